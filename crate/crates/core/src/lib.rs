//! Exact and floating-point machinery for identities linking Chebyshev,
//! Fibonacci, Lucas and Pell polynomials through finite trigonometric sums,
//! the resolvent kernel of the discrete circle and effective resistance on
//! circulant graphs.

pub mod exactnum;
pub mod sequences;
pub mod polyfam;
pub mod kernels;
pub mod resistance;
pub mod verify;

pub use exactnum::{BigRational, ExactError, QuadExt};
