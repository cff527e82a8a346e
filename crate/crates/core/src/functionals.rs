//! Linear functionals `θ` of the three universal pointwise bounds
//! `F_θ(H) = P(H) e^{−θ(H)}` on spherical functions of SL(n+1, R), and the
//! derived growth functional `ψ = 2ρ − θ`.
//!
//! Only `θ` is represented; the polynomial prefactor `P` affects log powers,
//! never the exponents computed downstream.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cartan::{highest_root, rho2, Functional, Rank};
use crate::error::{Error, Result};
use crate::scalar::{int, rational_string, ExactInt};

/// Which universal pointwise bound supplies `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    /// `θ = ρ / n_G` with `n_G = n`.
    HarishChandra,
    /// `θ = β / 2`, `β` the highest root.
    HoweTan,
    /// `θ = γ`, built from strongly orthogonal systems.
    Oh,
}

impl BoundKind {
    pub const ALL: [BoundKind; 3] = [BoundKind::HarishChandra, BoundKind::HoweTan, BoundKind::Oh];

    /// Short CLI tag.
    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::HarishChandra => "hc",
            BoundKind::HoweTan => "ht",
            BoundKind::Oh => "oh",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hc" | "harish-chandra" | "harish_chandra" => Ok(BoundKind::HarishChandra),
            "ht" | "howe-tan" | "howe_tan" => Ok(BoundKind::HoweTan),
            "oh" => Ok(BoundKind::Oh),
            other => Err(Error::Invalid(format!("unknown bound kind {other:?} (expected hc, ht or oh)"))),
        }
    }
}

/// Oh's functional `γ` in simple-root coordinates.
fn gamma<I: ExactInt>(n: Rank) -> Result<Functional<I>> {
    let m = n.get();
    if m < 2 {
        return Err(Error::RankTooSmall { min: 2, got: m });
    }
    let half = |k: usize| Ratio::new(int::<I>(k as i64), int(2));
    let coords = (1..=m)
        .map(|i| {
            if n.is_odd() {
                if i <= (m - 1) / 2 {
                    half(i)
                } else {
                    half(m + 1 - i)
                }
            } else if i <= m / 2 {
                half(i)
            } else if i == m / 2 + 1 {
                half(m / 2)
            } else {
                half(m + 1 - i)
            }
        })
        .collect();
    Ok(Functional::from_coords(coords))
}

/// The bound functional `θ` for `kind` on SL(n+1, R).
pub fn theta<I: ExactInt>(kind: BoundKind, n: Rank) -> Result<Functional<I>> {
    match kind {
        BoundKind::HarishChandra => {
            // ρ / n = 2ρ / (2n)
            let c = Ratio::new(I::one(), int((2 * n.get()) as i64));
            Ok(rho2::<I>(n).scale(&c))
        }
        BoundKind::HoweTan => Ok(highest_root::<I>(n).scale(&Ratio::new(I::one(), int(2)))),
        BoundKind::Oh => gamma(n),
    }
}

/// `ψ = 2ρ − θ`; every value `ψ(β̃_j)` must be positive.
pub fn psi<I: ExactInt>(theta: &Functional<I>, n: Rank) -> Result<Functional<I>> {
    if theta.rank() != n.get() {
        return Err(Error::WeightLength {
            expected: n.get(),
            got: theta.rank(),
        });
    }
    let psi = &rho2::<I>(n) - theta;
    if let Some((j, v)) = psi
        .values()
        .iter()
        .enumerate()
        .find(|(_, v)| **v <= Ratio::zero())
    {
        return Err(Error::InadmissibleTheta {
            index: j + 1,
            value: rational_string(v),
        });
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_bigint::BigInt;
    use num_traits::One;

    type Q = Ratio<BigInt>;

    fn r(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    fn q(vals: &[(i64, i64)]) -> Vec<Q> {
        vals.iter().map(|&(a, b)| rat(a, b)).collect()
    }

    #[test]
    fn gamma_small_ranks() {
        let g3 = theta::<BigInt>(BoundKind::Oh, r(3)).unwrap();
        assert_eq!(g3.values(), q(&[(1, 2), (1, 1), (1, 2)]).as_slice());
        let g2 = theta::<BigInt>(BoundKind::Oh, r(2)).unwrap();
        assert_eq!(g2.values(), q(&[(1, 2), (1, 2)]).as_slice());
        assert_eq!(
            theta::<BigInt>(BoundKind::Oh, r(1)),
            Err(Error::RankTooSmall { min: 2, got: 1 })
        );
    }

    #[test]
    fn gamma_is_half_the_distance_to_the_nearer_end() {
        for n in 2..=200 {
            let g = theta::<i64>(BoundKind::Oh, r(n)).unwrap();
            for i in 1..=n {
                assert_eq!(*g.at(i), Ratio::new(i.min(n + 1 - i) as i64, 2));
                assert!(*g.at(i) > Ratio::zero());
            }
        }
    }

    #[test]
    fn howe_tan_and_harish_chandra() {
        let ht = theta::<BigInt>(BoundKind::HoweTan, r(4)).unwrap();
        assert!(ht.values().iter().all(|v| *v == rat(1, 2)));
        // n = 2: the Howe–Tan and Oh functionals coincide
        assert_eq!(
            theta::<BigInt>(BoundKind::HoweTan, r(2)).unwrap(),
            theta::<BigInt>(BoundKind::Oh, r(2)).unwrap()
        );
        let hc = theta::<BigInt>(BoundKind::HarishChandra, r(3)).unwrap();
        assert_eq!(hc.values(), q(&[(1, 2), (2, 3), (1, 2)]).as_slice());
    }

    #[test]
    fn psi_for_gamma_matches_closed_form() {
        let n = r(3);
        let p = psi(&theta::<BigInt>(BoundKind::Oh, n).unwrap(), n).unwrap();
        assert_eq!(p.values(), q(&[(5, 2), (3, 1), (5, 2)]).as_slice());
        // odd n: ψ = Σ_{i<=(n-1)/2} i(n+1/2-i) α_i + Σ_{i>=(n+1)/2} (n+1-i)(i-1/2) α_i
        for m in (3..=101).step_by(2) {
            let n = r(m);
            let p = psi(&theta::<BigInt>(BoundKind::Oh, n).unwrap(), n).unwrap();
            for i in 1..=m {
                let expected = if i <= (m - 1) / 2 {
                    rat::<BigInt>(i as i64, 1) * rat::<BigInt>(2 * m as i64 + 1 - 2 * i as i64, 2)
                } else {
                    rat::<BigInt>((m + 1 - i) as i64, 1) * rat::<BigInt>(2 * i as i64 - 1, 2)
                };
                assert_eq!(*p.at(i), expected, "n = {m}, i = {i}");
            }
        }
    }

    #[test]
    fn psi_for_harish_chandra_is_scaled_rho() {
        for m in 1..=60 {
            let n = r(m);
            let p = psi(&theta::<BigInt>(BoundKind::HarishChandra, n).unwrap(), n).unwrap();
            let factor = Q::one() - rat(1, 2 * m as i64);
            assert_eq!(p, rho2::<BigInt>(n).scale(&factor));
        }
    }

    #[test]
    fn psi_of_zero_is_two_rho_and_bad_theta_is_rejected() {
        let n = r(4);
        assert_eq!(psi(&Functional::<BigInt>::zero(n), n).unwrap(), rho2(n));
        let too_big = rho2::<BigInt>(n).scale(&rat(2, 1));
        match psi(&too_big, n) {
            Err(Error::InadmissibleTheta { index: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn psi_is_symmetric_for_all_bounds() {
        for m in 2..=200 {
            let n = r(m);
            for kind in BoundKind::ALL {
                let p = psi(&theta::<i128>(kind, n).unwrap(), n).unwrap();
                for j in 1..=m {
                    assert_eq!(p.at(j), p.at(m + 1 - j), "{kind} n = {m} j = {j}");
                }
            }
        }
    }

    #[test]
    fn parse_bound_tags() {
        assert_eq!("hc".parse::<BoundKind>().unwrap(), BoundKind::HarishChandra);
        assert_eq!("HT".parse::<BoundKind>().unwrap(), BoundKind::HoweTan);
        assert_eq!("oh".parse::<BoundKind>().unwrap(), BoundKind::Oh);
        assert!("xx".parse::<BoundKind>().is_err());
    }
}
