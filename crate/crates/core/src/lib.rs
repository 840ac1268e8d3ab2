//! Exact divisor means and the biharmonic numbers built on them.
//!
//! The crate is organized bottom-up:
//!
//! - [`arith`]: rationals, factorization, divisor functions and a segmented
//!   σ-sieve.
//! - [`means`]: the arithmetic, geometric, harmonic, contraharmonic and
//!   biharmonic means of arbitrary positive rational lists.
//! - [`divisor_means`]: the same means specialized to divisor sets, the
//!   integer-sequence classifiers and the odd-prime characterization.
//! - [`recurrences`]: the sequences `u_n(w)` and `a_n(w)`, the three conics
//!   and a brute-force solver for `(x + y - 1)^2 = wxy`.
//! - [`crystals`]: the two-argument functions `B, F, P, Q`, crystal
//!   recognition, generation and the uniqueness scan.
//! - [`formal`]: sparse multivariate polynomials used to check the
//!   geometric/harmonic/arithmetic identity symbolically.
//! - [`oeis`]: embedded sequence prefixes, a b-file parser and an on-disk cache.

pub mod arith;
pub mod crystals;
pub mod divisor_means;
mod error;
pub mod formal;
pub mod means;
pub mod oeis;
mod par;
pub mod recurrences;
mod ser;

pub use arith::{factorize, is_prime, sigma_sieve, DivisorStats, Factorization, Rational, SigmaTable};
pub use error::{Error, Result};
