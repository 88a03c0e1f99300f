//! Forward state and backward adjoint sweeps in time.
//!
//! Every stepper factorizes its step matrices once and reuses them for all
//! intervals. Load vectors (`F_m`, `YD_m`) are passed in already assembled,
//! so the sweeps only do sparse products and triangular solves.

mod dg;
mod grid;
mod theta;
mod trajectory;

use std::sync::OnceLock;

pub use dg::{dg1_block_system, Dg0Stepper, Dg1Stepper};
pub use grid::TimeGrid;
pub use theta::ThetaStepper;
pub use trajectory::Trajectory;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// How the adjoint of a θ-scheme is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjointVariant {
    /// Optimize-then-discretize: θ-scheme applied to the continuous adjoint.
    Od,
    /// Discretize-then-optimize: exact adjoint of the discrete state scheme.
    Do,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scheme<T> {
    Theta { theta: T, variant: AdjointVariant },
    Dg0,
    Dg1,
}

/// Which right-hand sides the dG schemes use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Realization {
    /// Nodal data combinations `(k/2)(f_m + f_{m-1})` with nodal controls.
    #[default]
    Nodal,
    /// Exact time integrals against the dG test functions, with controls
    /// living in the dG trial space. Gradients are then exact.
    Galerkin,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeConfig<T> {
    pub scheme: Scheme<T>,
    pub realization: Realization,
    /// Use the halved trapezoid weights at `t_0` and `t_N` in the θ-DO control update.
    pub endpoint_weights: bool,
}

impl<T: Real> SchemeConfig<T> {
    pub fn new(scheme: Scheme<T>) -> Self {
        Self {
            scheme,
            realization: Realization::Nodal,
            endpoint_weights: true,
        }
    }

    pub fn theta(theta: T, variant: AdjointVariant) -> Self {
        Self::new(Scheme::Theta { theta, variant })
    }

    pub fn backward_euler() -> Self {
        Self::theta(T::one(), AdjointVariant::Od)
    }

    pub fn crank_nicolson(variant: AdjointVariant) -> Self {
        Self::theta(T::half(), variant)
    }

    pub fn dg0() -> Self {
        Self::new(Scheme::Dg0)
    }

    pub fn dg1() -> Self {
        Self::new(Scheme::Dg1)
    }

    pub fn galerkin(mut self) -> Self {
        self.realization = Realization::Galerkin;
        self
    }

    pub fn with_endpoint_weights(mut self, on: bool) -> Self {
        self.endpoint_weights = on;
        self
    }

    /// Parses the command-line tags `be`, `cn-od`, `cn-do`, `dg0`, `dg1`.
    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "be" => Ok(Self::backward_euler()),
            "cn-od" => Ok(Self::crank_nicolson(AdjointVariant::Od)),
            "cn-do" => Ok(Self::crank_nicolson(AdjointVariant::Do)),
            "dg0" => Ok(Self::dg0()),
            "dg1" => Ok(Self::dg1()),
            other => Err(Error::InvalidParameter(format!("unknown scheme `{other}`"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Scheme::Theta { theta, .. } = self.scheme {
            if !(theta >= T::zero() && theta <= T::one()) {
                return Err(Error::InvalidParameter(format!("theta must lie in [0, 1], got {theta}")));
            }
            if self.realization == Realization::Galerkin {
                return Err(Error::InvalidParameter("the Galerkin realization applies to dG schemes only".into()));
            }
        }
        Ok(())
    }
}

// Factorization built on first use.
#[derive(Debug)]
pub(crate) struct Lazy<F> {
    cell: OnceLock<F>,
}

impl<F> Lazy<F> {
    pub(crate) fn new() -> Self {
        Self { cell: OnceLock::new() }
    }

    pub(crate) fn get_or_try<G: FnOnce() -> Result<F>>(&self, init: G) -> Result<&F> {
        if let Some(f) = self.cell.get() {
            return Ok(f);
        }
        let f = init()?;
        let _ = self.cell.set(f);
        Ok(self.cell.get().expect("just initialized"))
    }
}

pub(crate) fn check_count<T>(list: &[Vec<T>], expected: usize) -> Result<()> {
    if list.len() != expected {
        return Err(Error::GridMismatch {
            expected,
            got: list.len(),
        });
    }
    Ok(())
}

pub(crate) fn check_dims<T>(list: &[Vec<T>], ndof: usize) -> Result<()> {
    match list.iter().find(|v| v.len() != ndof) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: ndof,
            got: v.len(),
        }),
        None => Ok(()),
    }
}

/// `sum_i c_i v_i`.
pub(crate) fn lin<T: Real>(terms: &[(T, &[T])]) -> Vec<T> {
    let n = terms.first().map_or(0, |t| t.1.len());
    let mut out = vec![T::zero(); n];
    for &(c, v) in terms {
        if c != T::zero() {
            crate::scalar::axpy(c, v, &mut out);
        }
    }
    out
}

pub(crate) fn max_diff<T: Real>(a: &[Vec<T>], b: &[Vec<T>]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |m, (x, y)| m.max(crate::scalar::max_abs_diff(x, y)))
}
