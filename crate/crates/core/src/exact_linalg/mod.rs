//! Exact integer and prime-field linear algebra.
//!
//! * [`IntMatrix`]: dense integer matrices with multimodular determinants.
//! * [`ModMatrix`]: dense matrices over `F_l` for word-size primes `l`.
//! * [`KernelState`]: a left kernel over `F_l` that can be shrunk
//!   incrementally as new columns arrive.
//! * [`Factorization`] and [`squarefree_gcd_criterion`] for discriminants.

mod det;
mod factor;
mod kernel;
mod matrix;

pub use det::{det_exact, det_mod, hadamard_bound};
pub use factor::{factorize, squarefree_gcd_criterion, Factorization, TRIAL_DIVISION_CAP};
pub use kernel::{kernel_mod, kernel_refine, rank_mod, KernelState};
pub use matrix::{IntMatrix, ModMatrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("discriminant is zero")]
    ZeroDiscriminant,
    #[error("cannot decide squarefreeness: unfactored cofactor {0}")]
    Indeterminate(String),
    #[error("{0} is not a supported prime modulus")]
    BadModulus(u64),
    #[error("malformed matrix text: {0}")]
    Parse(String),
}
