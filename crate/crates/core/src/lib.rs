//! Space-time discontinuous Galerkin solver for control-constrained optimal
//! control of unsteady convection-diffusion-reaction equations.
//!
//! Space: piecewise linear discontinuous elements on a structured
//! triangulation of the unit square, symmetric interior penalty for
//! diffusion and upwinding for convection. Time: θ-method (with
//! optimize-then-discretize and discretize-then-optimize adjoints), dG(0)
//! and dG(1). Box constraints on the control are handled by a primal-dual
//! active set iteration.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod assembly;
pub mod bench;
pub mod dg_space;
pub mod error;
pub mod linalg;
pub mod mesh;
pub mod optimizer;
pub mod quadrature;
pub mod scalar;
pub mod timestepping;

pub use error::{Error, Result};
pub use scalar::{Point2, Real};

pub type Mesh64 = mesh::Mesh<f64>;
pub type DgSpace64 = dg_space::DgSpace<f64>;
pub type CsrMatrix64 = linalg::CsrMatrix<f64>;
pub type SipgParams64 = assembly::SipgParams<f64>;
pub type SipgOperators64 = assembly::SipgOperators<f64>;
pub type TimeGrid64 = timestepping::TimeGrid<f64>;
pub type Trajectory64 = timestepping::Trajectory<f64>;
pub type SchemeConfig64 = timestepping::SchemeConfig<f64>;
pub type OcpProblem64 = optimizer::OcpProblem<f64>;
pub type Discretization64 = optimizer::Discretization<f64>;
pub type OcpSolution64 = optimizer::OcpSolution<f64>;
pub type ManufacturedCase64 = bench::ManufacturedCase<f64>;

pub type Mesh32 = mesh::Mesh<f32>;
pub type DgSpace32 = dg_space::DgSpace<f32>;
pub type SipgOperators32 = assembly::SipgOperators<f32>;
