//! A problem bound to a space, a time grid and a scheme.
//!
//! Controls are stored as a list of "slots", each a coefficient vector:
//! one per time node for the θ-schemes and the nodal dG sweeps, one per
//! interval for Galerkin dG(0), and two endpoint traces per interval for
//! Galerkin dG(1).

use std::sync::Arc;

use super::OcpProblem;
use crate::assembly::{assemble_load, SipgOperators};
use crate::dg_space::DgSpace;
use crate::error::{Error, Result};
use crate::linalg::Factorization;
use crate::quadrature::LineRule;
use crate::scalar::{dot, Real};
use crate::timestepping::{
    check_count, check_dims, lin, AdjointVariant, Dg0Stepper, Dg1Stepper, Realization, Scheme, SchemeConfig,
    ThetaStepper, TimeGrid, Trajectory,
};

#[derive(Debug)]
enum Stepper<T> {
    Theta(ThetaStepper<T>, AdjointVariant),
    Dg0(Dg0Stepper<T>),
    Dg1(Dg1Stepper<T>),
}

/// State, adjoint and reduced gradient for one control.
#[derive(Clone, Debug)]
pub struct GradientEval<T> {
    pub y: Trajectory<T>,
    pub p: Trajectory<T>,
    pub gradient: Vec<Vec<T>>,
}

pub struct Discretization<T> {
    problem: OcpProblem<T>,
    space: Arc<DgSpace<T>>,
    ops: Arc<SipgOperators<T>>,
    grid: TimeGrid<T>,
    config: SchemeConfig<T>,
    stepper: Stepper<T>,
    mass_lu: Factorization<T>,
    /// `F` and `YD` at the nodes (nodal) or their interval moments (Galerkin).
    f: Vec<Vec<T>>,
    yd: Vec<Vec<T>>,
    /// `YD^T M^{-1} YD` at the nodes, or its Gauss-weighted interval sums.
    yd_energy: Vec<T>,
    y0: Vec<T>,
}

impl<T: Real> std::fmt::Debug for Discretization<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Discretization")
            .field("problem", &self.problem)
            .field("ndof", &self.space.ndof())
            .field("grid", &self.grid)
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl<T: Real> Discretization<T> {
    pub fn new(problem: OcpProblem<T>, space: Arc<DgSpace<T>>, steps: usize, config: SchemeConfig<T>) -> Result<Self> {
        problem.validate()?;
        config.validate()?;
        let grid = TimeGrid::new(problem.horizon, steps)?;
        let ops = Arc::new(SipgOperators::assemble(&space, &problem.params)?);
        Self::with_operators(problem, space, ops, grid, config)
    }

    /// Reuses operators assembled for the same space and coefficients.
    pub fn with_operators(
        problem: OcpProblem<T>,
        space: Arc<DgSpace<T>>,
        ops: Arc<SipgOperators<T>>,
        grid: TimeGrid<T>,
        config: SchemeConfig<T>,
    ) -> Result<Self> {
        problem.validate()?;
        config.validate()?;
        if ops.ndof() != space.ndof() {
            return Err(Error::DimensionMismatch {
                expected: space.ndof(),
                got: ops.ndof(),
            });
        }
        let stepper = match config.scheme {
            Scheme::Theta { theta, variant } => Stepper::Theta(ThetaStepper::new(ops.clone(), grid, theta)?, variant),
            Scheme::Dg0 => Stepper::Dg0(Dg0Stepper::new(ops.clone(), grid)?),
            Scheme::Dg1 => Stepper::Dg1(Dg1Stepper::new(ops.clone(), grid)?),
        };
        let mass_lu = Factorization::new(&ops.mass)?;
        let y0f = problem.y0.clone();
        let y0 = space.l2_project(|x, _| y0f(x, T::zero()), T::zero());
        let mut disc = Self {
            problem,
            space,
            ops,
            grid,
            config,
            stepper,
            mass_lu,
            f: Vec::new(),
            yd: Vec::new(),
            yd_energy: Vec::new(),
            y0,
        };
        disc.build_data()?;
        Ok(disc)
    }

    fn galerkin_degree(&self) -> Option<usize> {
        match (self.config.realization, self.config.scheme) {
            (Realization::Galerkin, Scheme::Dg0) => Some(0),
            (Realization::Galerkin, Scheme::Dg1) => Some(1),
            _ => None,
        }
    }

    fn build_data(&mut self) -> Result<()> {
        let (f, yd) = (self.problem.f.clone(), self.problem.yd.clone());
        let load = |g: &super::DataFn<T>, t: T| assemble_load(&self.space, |x, s| g(x, s), t);
        match self.galerkin_degree() {
            None => {
                let nodes = self.grid.nodes();
                self.f = nodes.iter().map(|&t| load(&f, t)).collect();
                self.yd = nodes.iter().map(|&t| load(&yd, t)).collect();
                self.yd_energy = self
                    .yd
                    .iter()
                    .map(|v| Ok(dot(v, &self.mass_lu.solve(v)?)))
                    .collect::<Result<_>>()?;
            }
            Some(q) => {
                let rule = LineRule::<T>::gauss3();
                let k = self.grid.k();
                let n = self.space.ndof();
                self.f.clear();
                self.yd.clear();
                self.yd_energy.clear();
                for m in 1..=self.grid.steps() {
                    let start = self.grid.t(m - 1);
                    let mut fm = vec![vec![T::zero(); n]; q + 1];
                    let mut ym = vec![vec![T::zero(); n]; q + 1];
                    let mut energy = T::zero();
                    for (&s, &w) in rule.points.iter().zip(&rule.weights) {
                        let t = start + s * k;
                        let fl = load(&f, t);
                        let yl = load(&yd, t);
                        let mut weight = w * k;
                        for i in 0..=q {
                            crate::scalar::axpy(weight, &fl, &mut fm[i]);
                            crate::scalar::axpy(weight, &yl, &mut ym[i]);
                            weight *= s;
                        }
                        energy += w * k * dot(&yl, &self.mass_lu.solve(&yl)?);
                    }
                    self.f.extend(fm);
                    self.yd.extend(ym);
                    self.yd_energy.push(energy);
                }
            }
        }
        Ok(())
    }

    pub fn problem(&self) -> &OcpProblem<T> {
        &self.problem
    }

    pub fn space(&self) -> &Arc<DgSpace<T>> {
        &self.space
    }

    pub fn operators(&self) -> &Arc<SipgOperators<T>> {
        &self.ops
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn config(&self) -> &SchemeConfig<T> {
        &self.config
    }

    /// Projected initial state.
    pub fn initial_state(&self) -> &[T] {
        &self.y0
    }

    pub fn num_slots(&self) -> usize {
        match self.galerkin_degree() {
            None => self.grid.num_nodes(),
            Some(0) => self.grid.steps(),
            Some(_) => 2 * self.grid.steps(),
        }
    }

    /// Time at which each control slot sits (interval midpoints for Galerkin dG(0)).
    pub fn slot_times(&self) -> Vec<T> {
        let g = &self.grid;
        match self.galerkin_degree() {
            None => g.nodes(),
            Some(0) => (1..=g.steps()).map(|m| (g.t(m - 1) + g.t(m)) * T::half()).collect(),
            Some(_) => (1..=g.steps()).flat_map(|m| [g.t(m - 1), g.t(m)]).collect(),
        }
    }

    /// Time quadrature weights used for control error norms.
    pub fn slot_weights(&self) -> Vec<T> {
        let k = self.grid.k();
        match self.galerkin_degree() {
            None => {
                let last = self.grid.steps();
                (0..=last)
                    .map(|j| if j == 0 || j == last { k * T::half() } else { k })
                    .collect()
            }
            Some(0) => vec![k; self.num_slots()],
            Some(_) => vec![k * T::half(); self.num_slots()],
        }
    }

    pub fn zero_control(&self) -> Vec<Vec<T>> {
        vec![vec![T::zero(); self.space.ndof()]; self.num_slots()]
    }

    fn check_control(&self, u: &[Vec<T>]) -> Result<()> {
        check_count(u, self.num_slots())?;
        check_dims(u, self.space.ndof())
    }

    pub fn solve_state(&self, u: &[Vec<T>]) -> Result<Trajectory<T>> {
        self.check_control(u)?;
        let gal = self.config.realization == Realization::Galerkin;
        match &self.stepper {
            Stepper::Theta(s, _) => s.state_sweep(u, &self.f, &self.y0),
            Stepper::Dg0(s) if gal => s.state_sweep_galerkin(u, &self.f, &self.y0),
            Stepper::Dg0(s) => s.state_sweep_nodal(u, &self.f, &self.y0),
            Stepper::Dg1(s) if gal => s.state_sweep_galerkin(u, &self.f, &self.y0),
            Stepper::Dg1(s) => s.state_sweep_nodal(u, &self.f, &self.y0),
        }
    }

    pub fn solve_adjoint(&self, y: &Trajectory<T>) -> Result<Trajectory<T>> {
        let gal = self.config.realization == Realization::Galerkin;
        match &self.stepper {
            Stepper::Theta(s, v) => s.adjoint_sweep(*v, y, &self.yd),
            Stepper::Dg0(s) if gal => s.adjoint_sweep_galerkin(y, &self.yd),
            Stepper::Dg0(s) => s.adjoint_sweep_nodal(y, &self.yd),
            Stepper::Dg1(s) if gal => s.adjoint_sweep_galerkin(y, &self.yd),
            Stepper::Dg1(s) => s.adjoint_sweep_nodal(y, &self.yd),
        }
    }

    /// Adjoint values entering the control update `u = clamp(p_eff / alpha)`.
    pub fn effective_adjoint(&self, p: &Trajectory<T>) -> Result<Vec<Vec<T>>> {
        self.adjoint_slots(p, self.config.endpoint_weights)
    }

    fn adjoint_slots(&self, p: &Trajectory<T>, endpoint_weights: bool) -> Result<Vec<Vec<T>>> {
        let nodes = p.nodes();
        check_count(nodes, self.grid.num_nodes())?;
        let steps = self.grid.steps();
        match (&self.stepper, self.galerkin_degree()) {
            (Stepper::Theta(s, AdjointVariant::Do), _) => {
                let th = s.theta();
                let om = T::one() - th;
                let scale = if endpoint_weights { T::two() } else { T::one() };
                let mut out = Vec::with_capacity(steps + 1);
                out.push(lin(&[(scale * om, &nodes[1])]));
                for j in 1..steps {
                    out.push(lin(&[(th, &nodes[j]), (om, &nodes[j + 1])]));
                }
                out.push(lin(&[(scale * th, &nodes[steps])]));
                Ok(out)
            }
            (_, None) => Ok(nodes.to_vec()),
            (_, Some(0)) => Ok(nodes[..steps].to_vec()),
            (_, Some(_)) => {
                let pieces = p
                    .pieces()
                    .ok_or_else(|| Error::InvalidParameter("dG(1) adjoint needs pieces".into()))?;
                Ok(pieces
                    .iter()
                    .flat_map(|[a, b]| [a.clone(), lin(&[(T::one(), a), (T::one(), b)])])
                    .collect())
            }
        }
    }

    /// `g = alpha u - p_eff`, the representative of the derivative of the
    /// discrete reduced cost under [`Self::pairing`]. Exact for θ-DO and the
    /// Galerkin dG realizations; the θ-OD and nodal dG versions are the
    /// usual nodal approximations.
    pub fn reduced_gradient(&self, u: &[Vec<T>]) -> Result<GradientEval<T>> {
        let y = self.solve_state(u)?;
        let p = self.solve_adjoint(&y)?;
        let peff = self.adjoint_slots(&p, true)?;
        let gradient = u
            .iter()
            .zip(&peff)
            .map(|(uj, pj)| lin(&[(self.problem.alpha, uj), (-T::one(), pj)]))
            .collect();
        Ok(GradientEval { y, p, gradient })
    }

    /// Space-time inner product on control slots.
    pub fn pairing(&self, a: &[Vec<T>], b: &[Vec<T>]) -> Result<T> {
        self.check_control(a)?;
        self.check_control(b)?;
        let k = self.grid.k();
        let m = &self.ops.mass;
        let ip = |x: &[T], y: &[T]| -> Result<T> { Ok(dot(x, &m.mul_vec(y)?)) };
        match self.galerkin_degree() {
            None => {
                let last = self.grid.steps();
                let mut acc = T::zero();
                for j in 0..=last {
                    let c = if j == 0 || j == last { T::half() } else { T::one() };
                    acc += c * ip(&a[j], &b[j])?;
                }
                Ok(k * acc)
            }
            Some(0) => Ok(k * a.iter().zip(b).map(|(x, y)| ip(x, y)).sum::<Result<T>>()?),
            Some(_) => {
                let (third, sixth) = (T::one() / T::lit(3.0), T::one() / T::lit(6.0));
                let mut acc = T::zero();
                for (x, y) in a.chunks(2).zip(b.chunks(2)) {
                    acc += third * (ip(&x[0], &y[0])? + ip(&x[1], &y[1])?)
                        + sixth * (ip(&x[0], &y[1])? + ip(&x[1], &y[0])?);
                }
                Ok(k * acc)
            }
        }
    }

    /// Scheme-matched quadrature of the tracking cost. Desired states enter
    /// through their L2 projections.
    pub fn cost(&self, u: &[Vec<T>], y: &Trajectory<T>) -> Result<T> {
        check_count(y.nodes(), self.grid.num_nodes())?;
        check_dims(y.nodes(), self.space.ndof())?;
        let control = T::half() * self.problem.alpha * self.pairing(u, u)?;
        let k = self.grid.k();
        let m = &self.ops.mass;
        let steps = self.grid.steps();
        // ||y - P yd||^2 at node j
        let nodal = |j: usize| -> Result<T> {
            let yj = y.node(j);
            Ok(dot(yj, &m.mul_vec(yj)?) - T::two() * dot(yj, &self.yd[j]) + self.yd_energy[j])
        };
        let tracking = match (&self.stepper, self.galerkin_degree()) {
            (Stepper::Theta(_, AdjointVariant::Do), _) => k * (0..steps).map(nodal).sum::<Result<T>>()?,
            (Stepper::Theta(_, AdjointVariant::Od), _) => {
                let inner = (1..steps).map(nodal).sum::<Result<T>>()?;
                k * (inner + T::half() * (nodal(0)? + nodal(steps)?))
            }
            (Stepper::Dg0(_), None) => k * (1..=steps).map(nodal).sum::<Result<T>>()?,
            (Stepper::Dg1(_), None) => {
                let pieces = y.pieces().ok_or_else(|| Error::InvalidParameter("dG(1) state needs pieces".into()))?;
                let mut acc = T::zero();
                for (i, [a, b]) in pieces.iter().enumerate() {
                    let (ma, mb) = (m.mul_vec(a)?, m.mul_vec(b)?);
                    let quad = dot(a, &ma) + dot(a, &mb) + dot(b, &mb) / T::lit(3.0);
                    let end = lin(&[(T::one(), a), (T::one(), b)]);
                    let cross = dot(a, &self.yd[i]) + dot(&end, &self.yd[i + 1]);
                    let data = T::half() * (self.yd_energy[i] + self.yd_energy[i + 1]);
                    acc += quad - cross + data;
                }
                k * acc
            }
            (_, Some(0)) => {
                let mut acc = T::zero();
                for mi in 1..=steps {
                    let ym = y.node(mi);
                    acc += k * dot(ym, &m.mul_vec(ym)?) - T::two() * dot(ym, &self.yd[mi - 1]) + self.yd_energy[mi - 1];
                }
                acc
            }
            (_, Some(_)) => {
                let pieces = y.pieces().ok_or_else(|| Error::InvalidParameter("dG(1) state needs pieces".into()))?;
                let mut acc = T::zero();
                for (i, [a, b]) in pieces.iter().enumerate() {
                    let (ma, mb) = (m.mul_vec(a)?, m.mul_vec(b)?);
                    let quad = k * (dot(a, &ma) + dot(a, &mb) + dot(b, &mb) / T::lit(3.0));
                    let cross = dot(a, &self.yd[2 * i]) + dot(b, &self.yd[2 * i + 1]);
                    acc += quad - T::two() * cross + self.yd_energy[i];
                }
                acc
            }
        };
        Ok(T::half() * tracking + control)
    }
}
