//! Exact rational reconstruction of truncated power series.
//!
//! Given the first `N` Taylor coefficients of a function in one distinguished
//! variable (coefficients may themselves be polynomials in parameters, or
//! rational functions in further variables), this crate decides whether the
//! data is generated by a linear recurrence of bounded order and, if so,
//! recovers a numerator/denominator pair `P`, `Q` with `f·Q = P` together
//! with the parameter locus on which the recovered denominator degenerates.
//!
//! All arithmetic is exact over the Gaussian rationals `ℚ(i)`.
//!
//! Layout:
//! - [`scalar`], [`mpoly`], [`ratfunc`], [`series`], [`poly1`]: the algebra
//!   the rest of the crate is written against, unified by the [`Ring`] trait.
//! - [`hankel`]: Hankel matrices, fraction-free determinants, condensation
//!   tables and the minimal-order search.
//! - [`kronecker`]: the one-variable reconstruction and its verifiers.
//! - [`param`]: exceptional sets, degree detection and vanishing loci for
//!   parameter-dependent coefficients.
//! - [`multivar`]: recursive reconstruction in several variables.

pub mod error;
pub mod hankel;
pub mod kronecker;
pub mod mpoly;
pub mod multivar;
pub mod param;
pub mod parse;
pub mod poly1;
pub mod ratfunc;
pub mod ring;
pub mod scalar;
pub mod series;

pub use error::{Error, ParseError, Result};
pub use mpoly::MPoly;
pub use poly1::UniPoly;
pub use ratfunc::RatFunc;
pub use ring::Ring;
pub use scalar::GaussRat;
pub use series::TruncSeries;
