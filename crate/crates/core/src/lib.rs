//! Exact arithmetic for weak Jacobi forms of rank-one and rank-two lattice
//! index.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is built on
//! [`JacobiSeries`], a truncated Fourier-Jacobi expansion
//!
//! ```text
//!     f(tau, z, w) = sum c(n, r, s) q^n zeta^r omega^s
//! ```
//!
//! with exact rational coefficients, where `q`-exponents live in `(1/24)Z`
//! and elliptic exponents in `(1/2)Z`. On top of it:
//!
//! - [`forms`] builds eta powers, Eisenstein series, the Jacobi theta
//!   function and its derivatives, the rank-one generators, the rank-two
//!   generators, theta blocks, and the heat and Serre operators.
//! - [`index`] handles index matrices in the `(a, b, c)` encoding
//!   `[[a+b, b], [b, c+b]]` and the anharmonic permutation action.
//! - [`dimension`] evaluates the generator-weight polynomials and the
//!   closed-form Hilbert series, giving dimensions of weight spaces.
//! - [`structure`] enumerates generator monomials, computes exact span
//!   ranks and decompositions, and compares them with [`dimension`].

#![no_std]

extern crate alloc;

pub mod dimension;
mod error;
pub mod forms;
pub mod index;
mod linalg;
mod poly;
mod rational;
mod render;
pub mod series;
pub mod structure;

pub use error::{Error, Result};
pub use index::IndexMatrix;
pub use rational::Rational;
pub use series::{ExponentKey, Gram, JacobiSeries, SeriesIndex, Substitution};
