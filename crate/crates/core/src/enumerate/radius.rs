use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Radius `T` of a closed norm ball, carried with the exact value of
/// `⌊T²⌋`.
///
/// Squared norms of integer points are integers, so `‖τ(g)‖ ≤ T` is decided
/// by comparing `‖τ(g)‖²` with [`BallRadius::budget`].
#[derive(Debug, Clone, PartialEq)]
pub struct BallRadius {
    t: f64,
    budget: i64,
    label: String,
}

const MAX_BUDGET: i64 = 1 << 60;

impl BallRadius {
    /// Uses the exact binary value of `t`.
    pub fn from_f64(t: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Invalid(format!("radius must be finite and non-negative, got {t}")));
        }
        let (mant, exp, _) = Float::integer_decode(t);
        let sq = BigInt::from(mant) * BigInt::from(mant);
        let e = 2 * exp as i32;
        let floor = if e >= 0 {
            sq << e as usize
        } else {
            sq >> (-e) as usize
        };
        Ok(BallRadius {
            t,
            budget: clamp_budget(&floor)?,
            label: format_t(t),
        })
    }

    /// `T = sqrt(k)`, so that `⌊T²⌋ = k` exactly.
    pub fn sqrt_of(k: u64) -> Result<Self> {
        let budget = i64::try_from(k).ok().filter(|&b| b <= MAX_BUDGET).ok_or(Error::Overflow)?;
        Ok(BallRadius {
            t: (k as f64).sqrt(),
            budget,
            label: format!("sqrt({k})"),
        })
    }

    #[inline]
    pub fn t(&self) -> f64 {
        self.t
    }

    /// `⌊T²⌋`.
    #[inline]
    pub fn budget(&self) -> i64 {
        self.budget
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

fn clamp_budget(v: &BigInt) -> Result<i64> {
    v.to_i64().filter(|&b| b <= MAX_BUDGET).ok_or(Error::Overflow)
}

fn format_t(t: f64) -> String {
    format!("{t}")
}

impl fmt::Display for BallRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl Serialize for BallRadius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label)
    }
}

impl FromStr for BallRadius {
    type Err = Error;

    /// Accepts `sqrt(K)` for an integer `K`, or a plain decimal such as
    /// `12.5`, whose square is floored exactly.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("cannot parse radius {s:?}"));
        if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let k: u64 = inner.trim().parse().map_err(|_| bad())?;
            return BallRadius::sqrt_of(k);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        let plain = !int_part.is_empty()
            && int_part.bytes().all(|b| b.is_ascii_digit())
            && frac_part.bytes().all(|b| b.is_ascii_digit());
        if !plain {
            // exponent notation and the like go through the binary value
            let t: f64 = s.parse().map_err(|_| bad())?;
            return BallRadius::from_f64(t);
        }
        let digits: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let floor = (&digits * &digits).div_floor(&(&den * &den));
        Ok(BallRadius {
            t: s.parse().map_err(|_| bad())?,
            budget: clamp_budget(&floor)?,
            label: s.to_string(),
        })
    }
}
