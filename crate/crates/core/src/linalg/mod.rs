//! Sparse matrices, fill-reducing ordering and direct solvers.

mod block;
mod lu;
mod ordering;
mod sparse;

pub use block::{BlockFactorization, BlockSystem2x2};
pub use lu::{factorize, Factorization};
pub use ordering::minimum_degree;
pub use sparse::{CsrMatrix, TripletBuilder};
