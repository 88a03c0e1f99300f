//! dG(0) and dG(1) in time.
//!
//! Both steppers offer two right-hand side realizations. The nodal sweeps
//! combine nodal data as `(k/2)(f_m + f_{m-1})`. The Galerkin sweeps take
//! exact interval moments of the data and controls from the dG trial space;
//! their adjoint is the exact transpose of the state scheme.

use std::sync::Arc;

use super::{check_count, check_dims, lin, Lazy, TimeGrid, Trajectory};
use crate::assembly::SipgOperators;
use crate::error::{Error, Result};
use crate::linalg::{BlockFactorization, BlockSystem2x2, CsrMatrix, Factorization};
use crate::scalar::Real;

fn check_vec<T>(v: &[T], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    Ok(())
}

/// Piecewise constant in time: backward Euler with averaged data.
#[derive(Debug)]
pub struct Dg0Stepper<T> {
    ops: Arc<SipgOperators<T>>,
    grid: TimeGrid<T>,
    state_lu: Factorization<T>,
    adjoint_lu: Factorization<T>,
}

impl<T: Real> Dg0Stepper<T> {
    pub fn new(ops: Arc<SipgOperators<T>>, grid: TimeGrid<T>) -> Result<Self> {
        let k = grid.k();
        let s = CsrMatrix::linear_combination(&[(T::one(), &ops.mass), (k, &ops.state)])?;
        let a = CsrMatrix::linear_combination(&[(T::one(), &ops.mass), (k, &ops.adjoint)])?;
        Ok(Self {
            state_lu: Factorization::new(&s)?,
            adjoint_lu: Factorization::new(&a)?,
            ops,
            grid,
        })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    /// `(M + kA_s) y_m = M y_{m-1} + (k/2)(F_m + F_{m-1}) + (k/2) M (u_m + u_{m-1})`.
    pub fn state_sweep_nodal(&self, u: &[Vec<T>], f: &[Vec<T>], y0: &[T]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let nodes = self.grid.num_nodes();
        check_count(u, nodes)?;
        check_count(f, nodes)?;
        check_dims(u, n)?;
        check_dims(f, n)?;
        check_vec(y0, n)?;
        let hk = self.grid.k() * T::half();
        let mut y = vec![y0.to_vec()];
        for m in 1..nodes {
            let mut rhs = lin(&[(hk, &f[m]), (hk, &f[m - 1])]);
            let mixed = lin(&[(T::one(), &y[m - 1]), (hk, &u[m]), (hk, &u[m - 1])]);
            self.ops.mass.mul_vec_add(T::one(), &mixed, &mut rhs);
            y.push(self.state_lu.solve(&rhs).map_err(|e| e.at_step(m))?);
        }
        Ok(Trajectory::nodal(y))
    }

    /// `(M + kA_a) p_{m-1} = M p_m - (k/2) M (y_m + y_{m-1}) + (k/2)(YD_m + YD_{m-1})`, `p_N = 0`.
    pub fn adjoint_sweep_nodal(&self, y: &Trajectory<T>, yd: &[Vec<T>]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let nodes = self.grid.num_nodes();
        check_count(y.nodes(), nodes)?;
        check_count(yd, nodes)?;
        check_dims(y.nodes(), n)?;
        check_dims(yd, n)?;
        let hk = self.grid.k() * T::half();
        let mut p = vec![vec![T::zero(); n]; nodes];
        for m in (1..nodes).rev() {
            let mut rhs = lin(&[(hk, &yd[m]), (hk, &yd[m - 1])]);
            let mixed = lin(&[(T::one(), &p[m]), (-hk, y.node(m)), (-hk, y.node(m - 1))]);
            self.ops.mass.mul_vec_add(T::one(), &mixed, &mut rhs);
            p[m - 1] = self.adjoint_lu.solve(&rhs).map_err(|e| e.at_step(m - 1))?;
        }
        Ok(Trajectory::nodal(p))
    }

    /// Controls `u[m-1]` and data integrals `f_int[m-1]` are per interval `m`.
    pub fn state_sweep_galerkin(&self, u: &[Vec<T>], f_int: &[Vec<T>], y0: &[T]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let steps = self.grid.steps();
        check_count(u, steps)?;
        check_count(f_int, steps)?;
        check_dims(u, n)?;
        check_dims(f_int, n)?;
        check_vec(y0, n)?;
        let k = self.grid.k();
        let mut y = vec![y0.to_vec()];
        for m in 1..=steps {
            let mut rhs = f_int[m - 1].clone();
            self.ops.mass.mul_vec_add(T::one(), &lin(&[(T::one(), &y[m - 1]), (k, &u[m - 1])]), &mut rhs);
            y.push(self.state_lu.solve(&rhs).map_err(|e| e.at_step(m))?);
        }
        Ok(Trajectory::nodal(y))
    }

    /// Node `m - 1` of the result holds the adjoint on interval `m`; node `N` is zero.
    pub fn adjoint_sweep_galerkin(&self, y: &Trajectory<T>, yd_int: &[Vec<T>]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let steps = self.grid.steps();
        check_count(y.nodes(), steps + 1)?;
        check_count(yd_int, steps)?;
        check_dims(y.nodes(), n)?;
        check_dims(yd_int, n)?;
        let k = self.grid.k();
        let mut p = vec![vec![T::zero(); n]; steps + 1];
        for m in (1..=steps).rev() {
            let mut rhs = yd_int[m - 1].clone();
            self.ops.mass.mul_vec_add(T::one(), &lin(&[(T::one(), &p[m]), (-k, y.node(m))]), &mut rhs);
            p[m - 1] = self.adjoint_lu.solve(&rhs).map_err(|e| e.at_step(m - 1))?;
        }
        Ok(Trajectory::nodal(p))
    }
}

/// Piecewise linear in time; one coupled block system per interval.
#[derive(Debug)]
pub struct Dg1Stepper<T> {
    ops: Arc<SipgOperators<T>>,
    grid: TimeGrid<T>,
    state: BlockFactorization<T>,
    nodal_adjoint: Lazy<BlockFactorization<T>>,
    galerkin_adjoint: Lazy<BlockFactorization<T>>,
}

/// `[[M + kA, M + (k/2)A], [(k/2)A, M/2 + (k/3)A]]`, or its block transpose.
pub fn dg1_block_system<T: Real>(
    mass: &CsrMatrix<T>,
    op: &CsrMatrix<T>,
    k: T,
    transposed: bool,
) -> Result<BlockSystem2x2<T>> {
    let one = T::one();
    let b11 = CsrMatrix::linear_combination(&[(one, mass), (k, op)])?;
    let upper = CsrMatrix::linear_combination(&[(one, mass), (k * T::half(), op)])?;
    let lower = CsrMatrix::linear_combination(&[(k * T::half(), op)])?;
    let b22 = CsrMatrix::linear_combination(&[(T::half(), mass), (k / T::lit(3.0), op)])?;
    Ok(if transposed {
        BlockSystem2x2::new(b11, lower, upper, b22)
    } else {
        BlockSystem2x2::new(b11, upper, lower, b22)
    })
}

impl<T: Real> Dg1Stepper<T> {
    pub fn new(ops: Arc<SipgOperators<T>>, grid: TimeGrid<T>) -> Result<Self> {
        let state = dg1_block_system(&ops.mass, &ops.state, grid.k(), false)?.factorize()?;
        Ok(Self {
            ops,
            grid,
            state,
            nodal_adjoint: Lazy::new(),
            galerkin_adjoint: Lazy::new(),
        })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    /// Block system with right-hand side
    /// `[M y_{m-1} + (k/2)(F_m + F_{m-1}) + (k/2) M (u_m + u_{m-1}); (k/2)(F_m + M u_m)]`,
    /// and `y_m = Y_0 + Y_1`.
    pub fn state_sweep_nodal(&self, u: &[Vec<T>], f: &[Vec<T>], y0: &[T]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let nodes = self.grid.num_nodes();
        check_count(u, nodes)?;
        check_count(f, nodes)?;
        check_dims(u, n)?;
        check_dims(f, n)?;
        check_vec(y0, n)?;
        let hk = self.grid.k() * T::half();
        let mut y = vec![y0.to_vec()];
        let mut pieces = Vec::with_capacity(self.grid.steps());
        for m in 1..nodes {
            let mut r0 = lin(&[(hk, &f[m]), (hk, &f[m - 1])]);
            let mixed = lin(&[(T::one(), &y[m - 1]), (hk, &u[m]), (hk, &u[m - 1])]);
            self.ops.mass.mul_vec_add(T::one(), &mixed, &mut r0);
            let mut r1 = lin(&[(hk, &f[m])]);
            self.ops.mass.mul_vec_add(hk, &u[m], &mut r1);
            let (a, b) = self.state.solve(&r0, &r1).map_err(|e| e.at_step(m))?;
            y.push(lin(&[(T::one(), &a), (T::one(), &b)]));
            pieces.push([a, b]);
        }
        Ok(Trajectory::with_pieces(y, pieces))
    }

    /// Same block structure with `A_a` and right-hand side
    /// `[M p_m - (k/2) M (y_m + y_{m-1}) + (k/2)(YD_m + YD_{m-1}); -(k/2)(M y_{m-1} - YD_{m-1})]`;
    /// `p_{m-1} = P_0 + P_1`.
    pub fn adjoint_sweep_nodal(&self, y: &Trajectory<T>, yd: &[Vec<T>]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let nodes = self.grid.num_nodes();
        check_count(y.nodes(), nodes)?;
        check_count(yd, nodes)?;
        check_dims(y.nodes(), n)?;
        check_dims(yd, n)?;
        let lu = self.nodal_adjoint.get_or_try(|| {
            dg1_block_system(&self.ops.mass, &self.ops.adjoint, self.grid.k(), false)?.factorize()
        })?;
        let hk = self.grid.k() * T::half();
        let mut p = vec![vec![T::zero(); n]; nodes];
        let mut pieces = vec![[Vec::new(), Vec::new()]; self.grid.steps()];
        for m in (1..nodes).rev() {
            let mut r0 = lin(&[(hk, &yd[m]), (hk, &yd[m - 1])]);
            let mixed = lin(&[(T::one(), &p[m]), (-hk, y.node(m)), (-hk, y.node(m - 1))]);
            self.ops.mass.mul_vec_add(T::one(), &mixed, &mut r0);
            let mut r1 = lin(&[(hk, &yd[m - 1])]);
            self.ops.mass.mul_vec_add(-hk, y.node(m - 1), &mut r1);
            let (a, b) = lu.solve(&r0, &r1).map_err(|e| e.at_step(m - 1))?;
            p[m - 1] = lin(&[(T::one(), &a), (T::one(), &b)]);
            // the block unknowns run backward in time; store forward pieces
            pieces[m - 1] = [p[m - 1].clone(), lin(&[(-T::one(), &b)])];
        }
        Ok(Trajectory::with_pieces(p, pieces))
    }

    /// Controls are endpoint traces: `u[2(m-1)]` at `t_{m-1}^+`, `u[2(m-1)+1]` at `t_m^-`.
    /// `moments[2(m-1)+i]` holds the integral of `F` against `s^i` over interval `m`.
    pub fn state_sweep_galerkin(&self, u: &[Vec<T>], moments: &[Vec<T>], y0: &[T]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let steps = self.grid.steps();
        check_count(u, 2 * steps)?;
        check_count(moments, 2 * steps)?;
        check_dims(u, n)?;
        check_dims(moments, n)?;
        check_vec(y0, n)?;
        let k = self.grid.k();
        let (k2, k3, k6) = (k * T::half(), k / T::lit(3.0), k / T::lit(6.0));
        let mut y = vec![y0.to_vec()];
        let mut pieces = Vec::with_capacity(steps);
        for m in 1..=steps {
            let (up, um) = (&u[2 * (m - 1)], &u[2 * (m - 1) + 1]);
            let mut r0 = moments[2 * (m - 1)].clone();
            self.ops.mass.mul_vec_add(T::one(), &lin(&[(T::one(), &y[m - 1]), (k2, up), (k2, um)]), &mut r0);
            let mut r1 = moments[2 * (m - 1) + 1].clone();
            self.ops.mass.mul_vec_add(T::one(), &lin(&[(k6, up), (k3, um)]), &mut r1);
            let (a, b) = self.state.solve(&r0, &r1).map_err(|e| e.at_step(m))?;
            y.push(lin(&[(T::one(), &a), (T::one(), &b)]));
            pieces.push([a, b]);
        }
        Ok(Trajectory::with_pieces(y, pieces))
    }

    /// Exact adjoint of [`Self::state_sweep_galerkin`]. Node `m - 1` holds the
    /// trace at `t_{m-1}^+`; pieces are in the forward basis.
    pub fn adjoint_sweep_galerkin(&self, y: &Trajectory<T>, moments: &[Vec<T>]) -> Result<Trajectory<T>> {
        let n = self.ops.ndof();
        let steps = self.grid.steps();
        let ypieces = y
            .pieces()
            .ok_or_else(|| Error::InvalidParameter("dG(1) adjoint needs a piecewise linear state".into()))?;
        check_count(y.nodes(), steps + 1)?;
        check_count(moments, 2 * steps)?;
        check_dims(moments, n)?;
        if ypieces.len() != steps {
            return Err(Error::GridMismatch {
                expected: steps,
                got: ypieces.len(),
            });
        }
        let lu = self.galerkin_adjoint.get_or_try(|| {
            dg1_block_system(&self.ops.mass, &self.ops.adjoint, self.grid.k(), true)?.factorize()
        })?;
        let k = self.grid.k();
        let (k2, k3) = (k * T::half(), k / T::lit(3.0));
        let mut p = vec![vec![T::zero(); n]; steps + 1];
        let mut pieces = vec![[Vec::new(), Vec::new()]; steps];
        let mut next = vec![T::zero(); n];
        for m in (1..=steps).rev() {
            let [y0, y1] = &ypieces[m - 1];
            check_vec(y0, n)?;
            let mut r0 = moments[2 * (m - 1)].clone();
            self.ops.mass.mul_vec_add(T::one(), &lin(&[(T::one(), &next), (-k, y0), (-k2, y1)]), &mut r0);
            let mut r1 = moments[2 * (m - 1) + 1].clone();
            self.ops.mass.mul_vec_add(T::one(), &lin(&[(T::one(), &next), (-k2, y0), (-k3, y1)]), &mut r1);
            let (a, b) = lu.solve(&r0, &r1).map_err(|e| e.at_step(m - 1))?;
            p[m - 1] = a.clone();
            next = a.clone();
            pieces[m - 1] = [a, b];
        }
        Ok(Trajectory::with_pieces(p, pieces))
    }
}
