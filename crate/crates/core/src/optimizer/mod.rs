//! Reduced cost, gradients and the primal-dual active set solver.

mod discretization;
mod pdas;
mod problem;

pub use discretization::{Discretization, GradientEval};
pub use pdas::{pdas_solve, ActiveLabel, ActiveSets, OcpSolution, PdasRecord};
pub use problem::{project_control, Bounds, DataFn, OcpProblem};

use crate::error::Result;
use crate::scalar::Real;
use crate::timestepping::Trajectory;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 50;

/// State, adjoint and `alpha u - p_eff` for the control slots `u`.
pub fn reduced_gradient<T: Real>(disc: &Discretization<T>, u: &[Vec<T>]) -> Result<GradientEval<T>> {
    disc.reduced_gradient(u)
}

/// Scheme-matched discrete cost of `(u, y)`.
pub fn discrete_cost<T: Real>(disc: &Discretization<T>, u: &[Vec<T>], y: &Trajectory<T>) -> Result<T> {
    disc.cost(u, y)
}
