use std::fmt;
use std::sync::Arc;

use crate::assembly::SipgParams;
use crate::error::{Error, Result};
use crate::scalar::{Point2, Real};

/// Space-time data function `g(x, t)`.
pub type DataFn<T> = Arc<dyn Fn(Point2<T>, T) -> T + Send + Sync>;

/// Box `[lower, upper]` for the control; either side may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds<T> {
    lower: T,
    upper: T,
}

impl<T: Real> Bounds<T> {
    pub fn new(lower: T, upper: T) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || !(lower < upper) {
            return Err(Error::InvalidParameter(format!("control bounds need lower < upper, got [{lower}, {upper}]")));
        }
        Ok(Self { lower, upper })
    }

    pub fn unbounded() -> Self {
        Self {
            lower: T::neg_infinity(),
            upper: T::infinity(),
        }
    }

    pub fn at_least(lower: T) -> Self {
        Self {
            lower,
            upper: T::infinity(),
        }
    }

    pub fn lower(&self) -> T {
        self.lower
    }

    pub fn upper(&self) -> T {
        self.upper
    }

    pub fn clamp(&self, x: T) -> T {
        self.upper.min(self.lower.max(x))
    }
}

/// Control-constrained tracking problem for the state equation
/// `y_t - eps lap y + beta . grad y + r y = f + u`, `y = 0` on the boundary.
#[derive(Clone)]
pub struct OcpProblem<T> {
    pub params: SipgParams<T>,
    pub alpha: T,
    pub bounds: Bounds<T>,
    pub horizon: T,
    pub f: DataFn<T>,
    pub yd: DataFn<T>,
    /// Initial state, evaluated at `t = 0`.
    pub y0: DataFn<T>,
}

impl<T: Real> OcpProblem<T> {
    pub fn new(
        params: SipgParams<T>,
        alpha: T,
        bounds: Bounds<T>,
        horizon: T,
        f: DataFn<T>,
        yd: DataFn<T>,
        y0: DataFn<T>,
    ) -> Result<Self> {
        let problem = Self {
            params,
            alpha,
            bounds,
            horizon,
            f,
            yd,
            y0,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// All data identically zero.
    pub fn homogeneous(params: SipgParams<T>, alpha: T, bounds: Bounds<T>, horizon: T) -> Result<Self> {
        let zero: DataFn<T> = Arc::new(|_, _| T::zero());
        Self::new(params, alpha, bounds, horizon, zero.clone(), zero.clone(), zero)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate_for_solve()?;
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.horizon > T::zero()) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {}", self.horizon)));
        }
        Bounds::new(self.bounds.lower, self.bounds.upper)?;
        Ok(())
    }
}

impl<T: Real> fmt::Debug for OcpProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OcpProblem")
            .field("params", &self.params)
            .field("alpha", &self.alpha)
            .field("bounds", &self.bounds)
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

/// Entrywise `clamp(p / alpha, lower, upper)`.
pub fn project_control<T: Real>(p: &[Vec<T>], alpha: T, bounds: &Bounds<T>) -> Vec<Vec<T>> {
    p.iter()
        .map(|v| v.iter().map(|&x| bounds.clamp(x / alpha)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_examples() {
        let b = Bounds::new(0.0, 0.5).unwrap();
        let u = project_control(&[vec![0.3, -1.0]], 1.0, &b);
        assert_eq!(u, vec![vec![0.3, 0.0]]);
        assert_eq!(project_control(&[vec![4.0]], 2.0, &b), vec![vec![0.5]]);
        let free = Bounds::unbounded();
        assert_eq!(free.clamp(-1e300), -1e300);
        assert_eq!(Bounds::at_least(0.0).clamp(7.0), 7.0);
    }

    #[test]
    fn rejects_bad_setup() {
        assert!(Bounds::new(1.0, 1.0).is_err());
        assert!(Bounds::new(f64::NAN, 1.0).is_err());
        let p = SipgParams::new(1e-2, [1.0, 0.0], 1.0);
        assert!(OcpProblem::homogeneous(p, 0.0, Bounds::unbounded(), 1.0).is_err());
        assert!(OcpProblem::homogeneous(p, 1.0, Bounds::unbounded(), 0.0).is_err());
        assert!(OcpProblem::homogeneous(SipgParams::new(0.0, [1.0, 0.0], 1.0), 1.0, Bounds::unbounded(), 1.0).is_err());
        assert!(OcpProblem::homogeneous(p, 1.0, Bounds::unbounded(), 1.0).is_ok());
    }
}
