//! Left-looking sparse LU (Gilbert-Peierls) with threshold partial pivoting.
//!
//! Columns are visited in minimum-degree order. Within a column the diagonal
//! entry is kept as pivot whenever its magnitude is at least
//! `PIVOT_THRESHOLD` times the largest candidate, so the fill-reducing order
//! survives for the diagonally strong systems met in time stepping.

use super::{minimum_degree, CsrMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

const PIVOT_THRESHOLD: f64 = 0.1;
const NONE: usize = usize::MAX;

/// Reusable factorization `P A Q = L U`.
#[derive(Clone, Debug)]
pub struct Factorization<T> {
    n: usize,
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<T>,
    up: Vec<usize>,
    ui: Vec<usize>,
    ux: Vec<T>,
    /// original row -> pivot step
    pinv: Vec<usize>,
    /// pivot step -> original column
    q: Vec<usize>,
}

/// Factorizes a square sparse matrix.
pub fn factorize<T: Real>(a: &CsrMatrix<T>) -> Result<Factorization<T>> {
    Factorization::new(a)
}

impl<T: Real> Factorization<T> {
    pub fn new(a: &CsrMatrix<T>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: a.ncols(),
            });
        }
        let q = minimum_degree(a);
        Self::with_ordering(a, q)
    }

    /// Factorizes with a caller-supplied column order.
    pub fn with_ordering(a: &CsrMatrix<T>, q: Vec<usize>) -> Result<Self> {
        let n = a.nrows();
        // CSC of A is the CSR of its transpose
        let csc = a.transpose();
        let (ap, ai, ax) = (csc.row_ptr(), csc.col_idx(), csc.values());
        let tol = T::lit(PIVOT_THRESHOLD);

        let mut lp = Vec::with_capacity(n + 1);
        let mut li: Vec<usize> = Vec::with_capacity(4 * a.nnz());
        let mut lx: Vec<T> = Vec::with_capacity(4 * a.nnz());
        let mut up = Vec::with_capacity(n + 1);
        let mut ui: Vec<usize> = Vec::with_capacity(4 * a.nnz());
        let mut ux: Vec<T> = Vec::with_capacity(4 * a.nnz());
        let mut pinv = vec![NONE; n];
        let mut x = vec![T::zero(); n];
        let mut xi = vec![0usize; n];
        let mut stack = vec![0usize; n];
        let mut pstack = vec![0usize; n];
        let mut mark = vec![0usize; n];

        for (k, &col) in q.iter().enumerate() {
            lp.push(li.len());
            up.push(ui.len());
            let stamp = k + 1;
            let rows = &ai[ap[col]..ap[col + 1]];

            // symbolic: rows reachable from the pattern of A(:, col) through L
            let mut top = n;
            for &start in rows {
                if mark[start] == stamp {
                    continue;
                }
                let mut head: isize = 0;
                stack[0] = start;
                while head >= 0 {
                    let h = head as usize;
                    let j = stack[h];
                    let jnew = pinv[j];
                    if mark[j] != stamp {
                        mark[j] = stamp;
                        pstack[h] = if jnew == NONE { 0 } else { lp[jnew] };
                    }
                    let end = if jnew == NONE { 0 } else { lp[jnew + 1] };
                    let mut done = true;
                    for p in pstack[h]..end {
                        let i = li[p];
                        if mark[i] == stamp {
                            continue;
                        }
                        pstack[h] = p;
                        head += 1;
                        stack[head as usize] = i;
                        done = false;
                        break;
                    }
                    if done {
                        head -= 1;
                        top -= 1;
                        xi[top] = j;
                    }
                }
            }

            // numeric: x = L \ A(:, col) restricted to the reach
            for &i in &xi[top..n] {
                x[i] = T::zero();
            }
            for p in ap[col]..ap[col + 1] {
                x[ai[p]] = ax[p];
            }
            for px in top..n {
                let j = xi[px];
                let jj = pinv[j];
                if jj == NONE {
                    continue;
                }
                let xj = x[j];
                for p in lp[jj] + 1..lp[jj + 1] {
                    x[li[p]] -= lx[p] * xj;
                }
            }

            let mut ipiv = NONE;
            let mut best = -T::one();
            for &i in &xi[top..n] {
                if pinv[i] == NONE {
                    let mag = x[i].abs();
                    if mag > best {
                        best = mag;
                        ipiv = i;
                    }
                } else {
                    ui.push(pinv[i]);
                    ux.push(x[i]);
                }
            }
            if ipiv == NONE || !(best > T::zero()) || !best.is_finite() {
                return Err(Error::SingularMatrix { stage: k });
            }
            if pinv[col] == NONE && mark[col] == stamp && x[col].abs() >= best * tol {
                ipiv = col;
            }
            let pivot = x[ipiv];
            ui.push(k);
            ux.push(pivot);
            pinv[ipiv] = k;
            li.push(ipiv);
            lx.push(T::one());
            for &i in &xi[top..n] {
                if pinv[i] == NONE {
                    li.push(i);
                    lx.push(x[i] / pivot);
                }
                x[i] = T::zero();
            }
        }
        lp.push(li.len());
        up.push(ui.len());
        for r in li.iter_mut() {
            *r = pinv[*r];
        }
        Ok(Self {
            n,
            lp,
            li,
            lx,
            up,
            ui,
            ux,
            pinv,
            q,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stored entries of `L` and `U` together.
    pub fn factor_nnz(&self) -> usize {
        self.lx.len() + self.ux.len()
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.n];
        self.solve_into(b, &mut out)?;
        Ok(out)
    }

    /// Writes the solution of `A x = b` into `out`.
    pub fn solve_into(&self, b: &[T], out: &mut [T]) -> Result<()> {
        if b.len() != self.n || out.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: if b.len() != self.n { b.len() } else { out.len() },
            });
        }
        let mut x = vec![T::zero(); self.n];
        for (i, &bi) in b.iter().enumerate() {
            x[self.pinv[i]] = bi;
        }
        for j in 0..self.n {
            let xj = x[j];
            if xj != T::zero() {
                for p in self.lp[j] + 1..self.lp[j + 1] {
                    x[self.li[p]] -= self.lx[p] * xj;
                }
            }
        }
        for j in (0..self.n).rev() {
            let last = self.up[j + 1] - 1;
            x[j] /= self.ux[last];
            let xj = x[j];
            if xj != T::zero() {
                for p in self.up[j]..last {
                    x[self.ui[p]] -= self.ux[p] * xj;
                }
            }
        }
        for (k, &c) in self.q.iter().enumerate() {
            out[c] = x[k];
        }
        Ok(())
    }
}
