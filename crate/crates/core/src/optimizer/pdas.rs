use std::io::Write;

use super::{Bounds, Discretization};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::timestepping::Trajectory;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActiveLabel {
    Inactive,
    Lower,
    Upper,
}

/// Active-set labels per control slot and DOF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveSets {
    labels: Vec<Vec<ActiveLabel>>,
}

impl ActiveSets {
    /// Lower-active where `w < lower`, upper-active where `w > upper`.
    pub fn classify<T: Real>(w: &[Vec<T>], bounds: &Bounds<T>) -> Self {
        let labels = w
            .iter()
            .map(|v| {
                v.iter()
                    .map(|&x| {
                        if x < bounds.lower() {
                            ActiveLabel::Lower
                        } else if x > bounds.upper() {
                            ActiveLabel::Upper
                        } else {
                            ActiveLabel::Inactive
                        }
                    })
                    .collect()
            })
            .collect();
        Self { labels }
    }

    pub fn labels(&self) -> &[Vec<ActiveLabel>] {
        &self.labels
    }

    pub fn count(&self, label: ActiveLabel) -> usize {
        self.labels.iter().flatten().filter(|&&l| l == label).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdasRecord {
    pub iter: usize,
    pub active_lower: usize,
    pub active_upper: usize,
    pub update_norm: f64,
}

#[derive(Clone, Debug)]
pub struct OcpSolution<T> {
    pub y: Trajectory<T>,
    /// Control slots (see [`Discretization`]).
    pub u: Trajectory<T>,
    pub p: Trajectory<T>,
    pub iterations: usize,
    /// `max |u - clamp(p_eff / alpha)|` for the returned triple.
    pub kkt_residual: T,
    pub active_sets: ActiveSets,
    pub log: Vec<PdasRecord>,
}

impl<T: Real> OcpSolution<T> {
    /// CSV with header `iter,active_lower,active_upper,update_norm`.
    pub fn write_log<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "iter,active_lower,active_upper,update_norm")?;
        for r in &self.log {
            writeln!(out, "{},{},{},{:e}", r.iter, r.active_lower, r.active_upper, r.update_norm)?;
        }
        Ok(())
    }
}

/// Primal-dual active set iteration over full state/adjoint sweeps.
///
/// Each pass solves the state for the current control, then the adjoint,
/// predicts `w = p_eff / alpha`, fixes `u` to the bound on the active sets
/// and to `w` elsewhere. It stops once the sets repeat and the control
/// changed by at most `tol`; the returned control is the one the returned
/// state and adjoint were computed with.
pub fn pdas_solve<T: Real>(disc: &Discretization<T>, tol: T, max_iter: usize) -> Result<OcpSolution<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    let problem = disc.problem();
    let bounds = problem.bounds;
    let alpha = problem.alpha;
    let mut u: Vec<Vec<T>> = disc
        .zero_control()
        .into_iter()
        .map(|v| v.into_iter().map(|x| bounds.clamp(x)).collect())
        .collect();
    let mut sets = ActiveSets::classify(&u, &bounds);
    let mut log = Vec::new();
    let mut last = f64::INFINITY;
    for iter in 1..=max_iter {
        let y = disc.solve_state(&u)?;
        let p = disc.solve_adjoint(&y)?;
        let w: Vec<Vec<T>> = disc
            .effective_adjoint(&p)?
            .into_iter()
            .map(|v| v.into_iter().map(|x| x / alpha).collect())
            .collect();
        if w.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { iteration: iter });
        }
        let next_sets = ActiveSets::classify(&w, &bounds);
        let next: Vec<Vec<T>> = w
            .iter()
            .map(|v| v.iter().map(|&x| bounds.clamp(x)).collect())
            .collect();
        let update = crate::timestepping::max_diff(&u, &next);
        last = update.to_f64().unwrap_or(f64::INFINITY);
        log.push(PdasRecord {
            iter,
            active_lower: next_sets.count(ActiveLabel::Lower),
            active_upper: next_sets.count(ActiveLabel::Upper),
            update_norm: last,
        });
        if next_sets == sets && update <= tol {
            return Ok(OcpSolution {
                y,
                u: Trajectory::nodal(u),
                p,
                iterations: iter,
                kkt_residual: update,
                active_sets: sets,
                log,
            });
        }
        sets = next_sets;
        u = next;
    }
    Err(Error::MaxIterations {
        iterations: max_iter,
        residual: last,
    })
}
