//! Scalar abstractions.
//!
//! The Lie-theoretic side of the crate is exact: every functional, ratio and
//! exponent is a [`Ratio`] over an integer type implementing [`ExactInt`]
//! (arbitrary precision [`BigInt`](num_bigint::BigInt) by default, machine
//! integers for quick experiments). The analytic side (chamber norms,
//! volumes, fits) is generic over [`Real`], i.e. `f32` or `f64`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive};

/// Integer type backing exact rationals.
pub trait ExactInt:
    Clone + Integer + Signed + FromPrimitive + ToPrimitive + Hash + Debug + Display + Send + Sync + 'static
{
}

impl<T> ExactInt for T where
    T: Clone
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Floating point scalar used by the numerical modules.
pub trait Real: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {}

/// Lift a machine integer into `I`.
#[inline]
pub fn int<I: ExactInt>(v: i64) -> I {
    I::from_i64(v).expect("integer literal fits the exact integer type")
}

/// The exact rational `num / den`.
#[inline]
pub fn rat<I: ExactInt>(num: i64, den: i64) -> Ratio<I> {
    Ratio::new(int(num), int(den))
}

/// Lift an `f64` constant into a real scalar.
#[inline]
pub fn real<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("constant representable")
}

/// Serialize an exact rational as `"p/q"` (the denominator is always written).
pub fn rational_string<I: ExactInt>(q: &Ratio<I>) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_rational<I: ExactInt>(s: &str) -> Option<Ratio<I>> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = I::from_str_radix(n, 10).ok()?;
    let d = I::from_str_radix(d, 10).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Ratio::new(n, d))
}

/// Decimal approximation of an exact rational.
pub fn rational_to_f64<I: ExactInt>(q: &Ratio<I>) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}
