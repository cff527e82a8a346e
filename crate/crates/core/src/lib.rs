//! Exact exponents and desk-scale lattice counting for Euclidean norm balls
//! in SL(n+1, R).
//!
//! The crate has two halves:
//!
//! * an exact engine over rationals ([`cartan`], [`functionals`],
//!   [`exponents`], [`verify`]) computing the volume growth rate `m₁`, the
//!   bound growth rate `m₁′`, and the error exponent
//!   `κ = 2n(1 − m₁/m₁′)κ₀` for a dominant weight `λ`;
//! * a numerical harness ([`rep`], [`volume`], [`simplex`], [`enumerate`],
//!   [`fit`]) that realizes the standard, dual, exterior-power and adjoint
//!   representations, integrates the polar volume density over the positive
//!   Weyl chamber, counts SL(n+1, Z) inside norm balls, and fits growth
//!   exponents.
//!
//! Exact routines are generic over the integer type behind [`Ratio`]; the
//! numerical ones over `f32`/`f64`. The aliases below fix the defaults.

pub mod cartan;
pub mod enumerate;
pub mod error;
pub mod exponents;
pub mod fit;
pub mod functionals;
pub mod simplex;
pub mod matrix;
pub mod quad;
pub mod rep;
pub mod scalar;
pub mod verify;
pub mod volume;

pub use num_bigint::BigInt;
pub use num_rational::Ratio;

pub use cartan::{DominantWeight, Rank};
pub use enumerate::{BallRadius, CountRecord, Mode};
pub use error::{Error, Result};
pub use functionals::BoundKind;
pub use matrix::{IntMatrix, SquareMatrix};
pub use rep::{RepKind, RepSpec};

/// Arbitrary precision rational.
pub type Rational = Ratio<BigInt>;
/// Functional with arbitrary precision coordinates.
pub type Functional = cartan::Functional<BigInt>;
pub type ExponentReport = exponents::ExponentReport<BigInt>;
pub type ConeReport = exponents::ConeReport<BigInt>;
pub type MinRatio = exponents::MinRatio<BigInt>;
