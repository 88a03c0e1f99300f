//! Two-by-two block systems, factorized as one monolithic sparse matrix.

use super::{CsrMatrix, Factorization};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `[[b11, b12], [b21, b22]] [x0; x1] = [r0; r1]` with square blocks.
#[derive(Clone, Debug)]
pub struct BlockSystem2x2<T> {
    pub b11: CsrMatrix<T>,
    pub b12: CsrMatrix<T>,
    pub b21: CsrMatrix<T>,
    pub b22: CsrMatrix<T>,
}

#[derive(Clone, Debug)]
pub struct BlockFactorization<T> {
    n: usize,
    lu: Factorization<T>,
}

impl<T: Real> BlockSystem2x2<T> {
    pub fn new(b11: CsrMatrix<T>, b12: CsrMatrix<T>, b21: CsrMatrix<T>, b22: CsrMatrix<T>) -> Self {
        Self { b11, b12, b21, b22 }
    }

    pub fn block_dim(&self) -> usize {
        self.b11.nrows()
    }

    pub fn assemble(&self) -> Result<CsrMatrix<T>> {
        CsrMatrix::block2x2(&self.b11, &self.b12, &self.b21, &self.b22)
    }

    pub fn factorize(&self) -> Result<BlockFactorization<T>> {
        let full = self.assemble()?;
        Ok(BlockFactorization {
            n: self.block_dim(),
            lu: Factorization::new(&full)?,
        })
    }

    /// `(b11 x0 + b12 x1, b21 x0 + b22 x1)`.
    pub fn apply(&self, x0: &[T], x1: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        let mut r0 = self.b11.mul_vec(x0)?;
        self.b12.mul_vec_add(T::one(), x1, &mut r0);
        let mut r1 = self.b21.mul_vec(x0)?;
        self.b22.mul_vec_add(T::one(), x1, &mut r1);
        Ok((r0, r1))
    }
}

impl<T: Real> BlockFactorization<T> {
    pub fn block_dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, r0: &[T], r1: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        if r0.len() != self.n || r1.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: if r0.len() != self.n { r0.len() } else { r1.len() },
            });
        }
        let mut rhs = Vec::with_capacity(2 * self.n);
        rhs.extend_from_slice(r0);
        rhs.extend_from_slice(r1);
        let mut x = self.lu.solve(&rhs)?;
        let x1 = x.split_off(self.n);
        Ok((x, x1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_blocks_closed_form() {
        // [[2I, I], [I, 3I]] has inverse [[3I, -I], [-I, 2I]] / 5
        let n = 4;
        let sys = BlockSystem2x2::new(
            CsrMatrix::diagonal(&vec![2.0; n]),
            CsrMatrix::identity(n),
            CsrMatrix::identity(n),
            CsrMatrix::diagonal(&vec![3.0; n]),
        );
        let f = sys.factorize().unwrap();
        let r0: Vec<f64> = vec![1.0, 2.0, 3.0, 4.0];
        let r1: Vec<f64> = vec![-1.0, 0.0, 1.0, 2.0];
        let (x0, x1) = f.solve(&r0, &r1).unwrap();
        for i in 0..n {
            assert!((x0[i] - (3.0 * r0[i] - r1[i]) / 5.0).abs() < 1e-15);
            assert!((x1[i] - (2.0 * r1[i] - r0[i]) / 5.0).abs() < 1e-15);
        }
        let (a0, a1) = sys.apply(&x0, &x1).unwrap();
        for i in 0..n {
            assert!((a0[i] - r0[i]).abs() < 1e-14 && (a1[i] - r1[i]).abs() < 1e-14);
        }
        assert!(f.solve(&r0[..2], &r1).is_err());
    }
}
