//! Small self-contained complex linear algebra: just what the oracles need.
//!
//! Dense matrices are row-major. Sparse matrices are CSR. The banded LU uses
//! LAPACK-style column-major band storage so pivoting row swaps stay in band.

mod band;
mod dense;
mod eig;
mod sparse;

pub use band::BandLu;
pub use dense::CMat;
pub use eig::{eigh, poly_roots};
pub use sparse::Csr;
