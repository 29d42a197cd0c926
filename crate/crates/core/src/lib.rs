//! Exact symbolic machinery for poly-analytic Fock spaces.
//!
//! Functions are exponential polynomials with Gaussian-rational data
//! ([`poly::ExpPoly`]); operators are Wick-ordered words in the ladder
//! operators ([`ops::NormalForm`]). On this class every inner product,
//! projection, membership test and restricted spectrum is computed exactly.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod decomp;
pub mod error;
pub mod kernel;
pub mod matrix;
pub mod ops;
pub mod poly;
pub mod scalar;
pub mod spectral;
pub mod upoly;

pub use decomp::{FockColumn, TrueLevelDecomposition};
pub use error::{Error, Result};
pub use kernel::{KernelFunc, Method};
pub use matrix::{ExactMatrix, GeneratorPoly, ModelMatrices};
pub use ops::{Letter, NormalForm, OperatorWord};
pub use poly::{ExpPoly, MultiMonomial};
pub use scalar::{ExpScalar, GaussianRational, Rational};
pub use spectral::{RestrictedMatrix, SpectrumReport};
pub use upoly::UPoly;
