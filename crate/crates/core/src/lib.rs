//! Exact criteria and numerical certificates for membership of functions
//! in the Wiener algebra `A(R^d)` of Fourier transforms of integrable functions.

pub mod bernstein;
pub mod criteria;
pub mod error;
pub mod exponent;
pub mod field;
pub mod fourier;
pub mod gallery;
pub mod hardy;
pub mod jet;

pub use error::{Error, Result};
pub use exponent::{Exponent, Rational};
pub use num_complex::Complex64;
