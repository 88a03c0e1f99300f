use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform partition `t_m = m k` of `[0, T]` into `N` intervals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid<T> {
    horizon: T,
    steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(horizon: T, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidParameter("time grid needs at least one interval".into()));
        }
        if !(horizon > T::zero()) || !horizon.is_finite() {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
        }
        Ok(Self { horizon, steps })
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    /// Number of intervals `N`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn num_nodes(&self) -> usize {
        self.steps + 1
    }

    pub fn k(&self) -> T {
        self.horizon / T::from_index(self.steps)
    }

    pub fn t(&self, m: usize) -> T {
        if m == self.steps {
            self.horizon
        } else {
            self.k() * T::from_index(m)
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..=self.steps).map(|m| self.t(m)).collect()
    }
}
