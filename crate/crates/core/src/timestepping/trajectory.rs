use std::io::Write;

use super::TimeGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Coefficient vectors at the time nodes, plus per-interval pieces for
/// piecewise linear-in-time solutions.
///
/// A piece `(a, b)` on interval `m` (between `t_{m-1}` and `t_m`) represents
/// `a + b s` with `s = (t - t_{m-1}) / k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    nodes: Vec<Vec<T>>,
    pieces: Option<Vec<[Vec<T>; 2]>>,
}

impl<T: Real> Trajectory<T> {
    pub fn nodal(nodes: Vec<Vec<T>>) -> Self {
        Self { nodes, pieces: None }
    }

    pub fn with_pieces(nodes: Vec<Vec<T>>, pieces: Vec<[Vec<T>; 2]>) -> Self {
        Self {
            nodes,
            pieces: Some(pieces),
        }
    }

    pub fn zeros(num_nodes: usize, ndof: usize) -> Self {
        Self::nodal(vec![vec![T::zero(); ndof]; num_nodes])
    }

    pub fn nodes(&self) -> &[Vec<T>] {
        &self.nodes
    }

    pub fn node(&self, m: usize) -> &[T] {
        &self.nodes[m]
    }

    pub fn pieces(&self) -> Option<&[[Vec<T>; 2]]> {
        self.pieces.as_deref()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn ndof(&self) -> usize {
        self.nodes.first().map_or(0, Vec::len)
    }

    pub fn into_nodes(self) -> Vec<Vec<T>> {
        self.nodes
    }

    /// Largest nodal distance in the norm induced by `mass`.
    pub fn max_distance(&self, other: &Self, mass: &crate::linalg::CsrMatrix<T>) -> Result<T> {
        if self.num_nodes() != other.num_nodes() {
            return Err(Error::GridMismatch {
                expected: self.num_nodes(),
                got: other.num_nodes(),
            });
        }
        let mut worst = T::zero();
        for (a, b) in self.nodes.iter().zip(&other.nodes) {
            let d: Vec<T> = a.iter().zip(b).map(|(&x, &y)| x - y).collect();
            worst = worst.max(crate::dg_space::l2_norm(mass, &d)?);
        }
        Ok(worst)
    }

    /// CSV with header `m,t,dof,value`, keeping every `stride`-th node.
    pub fn write_csv<W: Write>(&self, grid: &TimeGrid<T>, stride: usize, mut out: W) -> Result<()> {
        if self.num_nodes() != grid.num_nodes() {
            return Err(Error::GridMismatch {
                expected: grid.num_nodes(),
                got: self.num_nodes(),
            });
        }
        writeln!(out, "m,t,dof,value")?;
        for (m, v) in self.nodes.iter().enumerate().step_by(stride.max(1)) {
            let t = grid.t(m);
            for (i, x) in v.iter().enumerate() {
                writeln!(out, "{m},{t},{i},{x:e}")?;
            }
        }
        Ok(())
    }
}
