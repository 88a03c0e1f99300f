use std::sync::Arc;

use super::{check_count, check_dims, lin, AdjointVariant, Lazy, TimeGrid, Trajectory};
use crate::assembly::SipgOperators;
use crate::error::Result;
use crate::linalg::{CsrMatrix, Factorization};
use crate::scalar::Real;

/// θ-method for the state and both adjoint variants.
#[derive(Debug)]
pub struct ThetaStepper<T> {
    ops: Arc<SipgOperators<T>>,
    grid: TimeGrid<T>,
    theta: T,
    state_lu: Factorization<T>,
    od_lu: Lazy<Factorization<T>>,
    do_lu: Lazy<Factorization<T>>,
    mass_lu: Lazy<Factorization<T>>,
}

impl<T: Real> ThetaStepper<T> {
    pub fn new(ops: Arc<SipgOperators<T>>, grid: TimeGrid<T>, theta: T) -> Result<Self> {
        let kt = grid.k() * theta;
        let state = CsrMatrix::linear_combination(&[(T::one(), &ops.mass), (kt, &ops.state)])?;
        Ok(Self {
            state_lu: Factorization::new(&state)?,
            ops,
            grid,
            theta,
            od_lu: Lazy::new(),
            do_lu: Lazy::new(),
            mass_lu: Lazy::new(),
        })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    fn lhs(&self, op: &CsrMatrix<T>) -> Result<Factorization<T>> {
        let kt = self.grid.k() * self.theta;
        Factorization::new(&CsrMatrix::linear_combination(&[(T::one(), &self.ops.mass), (kt, op)])?)
    }

    /// `(M + kθA) y_{m+1} = (M - k(1-θ)A) y_m + k((1-θ)F_m + θF_{m+1}) + kM((1-θ)u_m + θu_{m+1})`.
    pub fn state_sweep(&self, u: &[Vec<T>], f: &[Vec<T>], y0: &[T]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let nodes = self.grid.num_nodes();
        check_count(u, nodes)?;
        check_count(f, nodes)?;
        check_dims(u, n)?;
        check_dims(f, n)?;
        check_dims(std::slice::from_ref(&y0.to_vec()), n)?;
        let k = self.grid.k();
        let (a, b) = (k * (T::one() - self.theta), k * self.theta);
        let mut y = Vec::with_capacity(nodes);
        y.push(y0.to_vec());
        for m in 0..self.grid.steps() {
            let ym = &y[m];
            let mut rhs = lin(&[(a, &f[m]), (b, &f[m + 1])]);
            self.ops.mass.mul_vec_add(T::one(), &lin(&[(T::one(), ym), (a, &u[m]), (b, &u[m + 1])]), &mut rhs);
            self.ops.state.mul_vec_add(-a, ym, &mut rhs);
            let next = self.state_lu.solve(&rhs).map_err(|e| e.at_step(m + 1))?;
            y.push(next);
        }
        Ok(Trajectory::nodal(y))
    }

    pub fn adjoint_sweep(&self, variant: AdjointVariant, y: &Trajectory<T>, yd: &[Vec<T>]) -> Result<Trajectory<T>> {
        match variant {
            AdjointVariant::Od => self.adjoint_sweep_od(y, yd),
            AdjointVariant::Do => self.adjoint_sweep_do(y, yd),
        }
    }

    /// θ-method applied to the continuous adjoint, `p_N = 0`.
    pub fn adjoint_sweep_od(&self, y: &Trajectory<T>, yd: &[Vec<T>]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let nodes = self.grid.num_nodes();
        check_count(y.nodes(), nodes)?;
        check_count(yd, nodes)?;
        check_dims(y.nodes(), n)?;
        check_dims(yd, n)?;
        let lu = self.od_lu.get_or_try(|| self.lhs(&self.ops.adjoint))?;
        let k = self.grid.k();
        let (a, b) = (k * (T::one() - self.theta), k * self.theta);
        let mut p = vec![vec![T::zero(); n]; nodes];
        for m in (0..self.grid.steps()).rev() {
            // -k [θ (M y_m - YD_m) + (1-θ)(M y_{m+1} - YD_{m+1})] + (M - k(1-θ)A_a) p_{m+1}
            let mut rhs = lin(&[(b, &yd[m]), (a, &yd[m + 1])]);
            let mixed = lin(&[(T::one(), &p[m + 1]), (-b, y.node(m)), (-a, y.node(m + 1))]);
            self.ops.mass.mul_vec_add(T::one(), &mixed, &mut rhs);
            self.ops.adjoint.mul_vec_add(-a, &p[m + 1], &mut rhs);
            p[m] = lu.solve(&rhs).map_err(|e| e.at_step(m))?;
        }
        Ok(Trajectory::nodal(p))
    }

    /// Exact adjoint of the discrete state scheme with rectangle-rule tracking.
    pub fn adjoint_sweep_do(&self, y: &Trajectory<T>, yd: &[Vec<T>]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let nodes = self.grid.num_nodes();
        let steps = self.grid.steps();
        check_count(y.nodes(), nodes)?;
        check_count(yd, nodes)?;
        check_dims(y.nodes(), n)?;
        check_dims(yd, n)?;
        let lu = self.do_lu.get_or_try(|| self.lhs(&self.ops.state_transpose))?;
        let k = self.grid.k();
        let a = k * (T::one() - self.theta);
        let mut p = vec![vec![T::zero(); n]; nodes];
        // terminal row is homogeneous
        p[steps] = lu.solve(&vec![T::zero(); n]).map_err(|e| e.at_step(steps))?;
        for m in (0..steps).rev() {
            let mut rhs = lin(&[(k, &yd[m])]);
            let mixed = lin(&[(T::one(), &p[m + 1]), (-k, y.node(m))]);
            self.ops.mass.mul_vec_add(T::one(), &mixed, &mut rhs);
            self.ops.state_transpose.mul_vec_add(-a, &p[m + 1], &mut rhs);
            p[m] = if m == 0 {
                let mass = self.mass_lu.get_or_try(|| Factorization::new(&self.ops.mass))?;
                mass.solve(&rhs)
            } else {
                lu.solve(&rhs)
            }
            .map_err(|e| e.at_step(m))?;
        }
        Ok(Trajectory::nodal(p))
    }
}
