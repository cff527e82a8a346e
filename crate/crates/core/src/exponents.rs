//! Exact exponent engine: volume growth `m₁`, bound growth `m₁′`, their
//! minimizing index sets, the error exponent `κ = 2n(1 − m₁/m₁′)κ₀`, the
//! cones `Λ⁺_i`, and the admissible family `W_n`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;

use crate::cartan::{rho2, weight_to_functional, DominantWeight, Functional, Rank};
use crate::error::Result;
use crate::functionals::{psi, theta, BoundKind};
use crate::scalar::{int, ExactInt};

/// Exact minimum of `num(β̃_j) / den(β̃_j)` over `j` together with every
/// index attaining it. Ties are kept, never broken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinRatio<I: ExactInt> {
    pub value: Ratio<I>,
    pub argmin: BTreeSet<usize>,
}

/// Minimize `num_j / den_j` over `j = 1..=n`; `den` must be positive.
pub fn min_ratio<I: ExactInt>(num: &Functional<I>, den: &Functional<I>) -> MinRatio<I> {
    debug_assert_eq!(num.rank(), den.rank());
    let mut best: Option<Ratio<I>> = None;
    let mut argmin = BTreeSet::new();
    for (j, (a, b)) in num.values().iter().zip(den.values()).enumerate() {
        let r = a / b;
        match &best {
            Some(v) if r > *v => {}
            Some(v) if r == *v => {
                argmin.insert(j + 1);
            }
            _ => {
                best = Some(r);
                argmin.clear();
                argmin.insert(j + 1);
            }
        }
    }
    MinRatio {
        value: best.expect("rank is at least one"),
        argmin,
    }
}

/// `κ₀ = 1 / (n(n+1)(n+2))`.
pub fn kappa0<I: ExactInt>(n: Rank) -> Ratio<I> {
    let m = n.get() as i64;
    Ratio::new(I::one(), int(m * (m + 1) * (m + 2)))
}

/// `m₁ = min_j λ(β̃_j) / 2ρ(β̃_j)` and its argmin set `I(λ)`.
pub fn compute_m1<I: ExactInt>(lambda: &DominantWeight, n: Rank) -> Result<MinRatio<I>> {
    let f = weight_to_functional::<I>(lambda, n)?;
    Ok(min_ratio(&f, &rho2(n)))
}

/// `m₁′ = min_j λ(β̃_j) / ψ(β̃_j)` with `ψ = 2ρ − θ`, and its argmin set `I′(λ)`.
pub fn compute_m1_prime<I: ExactInt>(
    lambda: &DominantWeight,
    theta: &Functional<I>,
    n: Rank,
) -> Result<MinRatio<I>> {
    let f = weight_to_functional::<I>(lambda, n)?;
    let p = psi(theta, n)?;
    Ok(min_ratio(&f, &p))
}

/// Everything the engine knows about one `(n, λ, θ)` triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentReport<I: ExactInt> {
    pub n: Rank,
    pub lambda: DominantWeight,
    pub theta_kind: BoundKind,
    pub m1: Ratio<I>,
    pub i_set: BTreeSet<usize>,
    pub m1_prime: Ratio<I>,
    pub i_prime: BTreeSet<usize>,
    pub kappa0: Ratio<I>,
    pub kappa: Ratio<I>,
}

impl<I: ExactInt> ExponentReport<I> {
    /// `κ / κ₀ = 2n(1 − m₁/m₁′)`.
    pub fn kappa_over_kappa0(&self) -> Ratio<I> {
        &self.kappa / &self.kappa0
    }

    /// `m₁ / m₁′`.
    pub fn ratio(&self) -> Ratio<I> {
        &self.m1 / &self.m1_prime
    }
}

/// Cached `2ρ`, `θ` and `ψ` for one rank and bound kind; evaluating many
/// weights against the same context avoids rebuilding them.
#[derive(Debug, Clone)]
pub struct BoundContext<I: ExactInt> {
    n: Rank,
    kind: BoundKind,
    rho2: Functional<I>,
    psi: Functional<I>,
    kappa0: Ratio<I>,
}

impl<I: ExactInt> BoundContext<I> {
    pub fn new(kind: BoundKind, n: Rank) -> Result<Self> {
        let th = theta::<I>(kind, n)?;
        let psi = psi(&th, n)?;
        Ok(BoundContext {
            n,
            kind,
            rho2: rho2(n),
            psi,
            kappa0: kappa0(n),
        })
    }

    pub fn rank(&self) -> Rank {
        self.n
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    pub fn psi(&self) -> &Functional<I> {
        &self.psi
    }

    pub fn rho2(&self) -> &Functional<I> {
        &self.rho2
    }

    /// `min_j ψ(β̃_j) / 2ρ(β̃_j)`, the floor on `m₁/m₁′` for every weight.
    pub fn ratio_floor(&self) -> MinRatio<I> {
        min_ratio(&self.psi, &self.rho2)
    }

    /// Report for a weight already converted to a functional.
    pub fn report_functional(&self, lambda: &DominantWeight, f: &Functional<I>) -> ExponentReport<I> {
        let m1 = min_ratio(f, &self.rho2);
        let m1p = min_ratio(f, &self.psi);
        let two_n = Ratio::from_integer(int::<I>(2 * self.n.get() as i64));
        let kappa = two_n * (Ratio::one() - &m1.value / &m1p.value) * &self.kappa0;
        ExponentReport {
            n: self.n,
            lambda: lambda.clone(),
            theta_kind: self.kind,
            m1: m1.value,
            i_set: m1.argmin,
            m1_prime: m1p.value,
            i_prime: m1p.argmin,
            kappa0: self.kappa0.clone(),
            kappa,
        }
    }

    pub fn report(&self, lambda: &DominantWeight) -> Result<ExponentReport<I>> {
        let f = weight_to_functional::<I>(lambda, self.n)?;
        Ok(self.report_functional(lambda, &f))
    }
}

/// Full exact report for `(n, λ, θ_kind)`.
pub fn compute_kappa<I: ExactInt>(
    lambda: &DominantWeight,
    kind: BoundKind,
    n: Rank,
) -> Result<ExponentReport<I>> {
    BoundContext::new(kind, n)?.report(lambda)
}

/// `σ_i = min(n/i, n/(n+1−i))`.
pub fn sigma<I: ExactInt>(i: usize, n: Rank) -> Ratio<I> {
    let m = n.get() as i64;
    let i = i as i64;
    let a = Ratio::new(int::<I>(m), int(i));
    let b = Ratio::new(int::<I>(m), int(m + 1 - i));
    if a < b {
        a
    } else {
        b
    }
}

/// Cone membership of a weight among `Λ⁺_2, …, Λ⁺_{n−1}` (with `ψ = 2ρ − γ`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeReport<I: ExactInt> {
    pub n: Rank,
    pub lambda: DominantWeight,
    pub cones: BTreeSet<usize>,
    pub sigma: BTreeMap<usize, Ratio<I>>,
}

/// `λ ∈ Λ⁺_i` iff `i` minimizes `λ(β̃_j)/ψ(β̃_j)`, i.e. `i ∈ I′(λ)` for `θ = γ`.
pub fn classify_cones<I: ExactInt>(lambda: &DominantWeight, n: Rank) -> Result<ConeReport<I>> {
    let n = Rank::at_least(n.get(), 2)?;
    let ctx = BoundContext::<I>::new(BoundKind::Oh, n)?;
    let rep = ctx.report(lambda)?;
    Ok(cone_report_from(&rep))
}

pub(crate) fn cone_report_from<I: ExactInt>(rep: &ExponentReport<I>) -> ConeReport<I> {
    let m = rep.n.get();
    let inner = 2..m.max(2);
    ConeReport {
        n: rep.n,
        lambda: rep.lambda.clone(),
        cones: rep.i_prime.iter().copied().filter(|i| inner.contains(i)).collect(),
        sigma: inner.map(|i| (i, sigma(i, rep.n))).collect(),
    }
}

/// `W_n = {λ_i + λ_{n+1−i}}` with `i` up to `⌊(n+1)/4⌋` (odd `n`) or `⌊n/4⌋`
/// (even `n`). The adjoint weight `λ_1 + λ_n` is always included, which only
/// matters for `n = 2` where the even bound is zero.
pub fn admissible_wn(n: Rank) -> Result<Vec<DominantWeight>> {
    let n = Rank::at_least(n.get(), 2)?;
    let m = n.get();
    let top = if n.is_odd() { (m + 1) / 4 } else { m / 4 };
    (1..=top.max(1))
        .map(|i| DominantWeight::symmetric_pair(i, n))
        .collect()
}

/// Outcome of the central-index test of the main estimate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MainCondition {
    /// `index` lies in `I(λ) ∩ I′(λ)`.
    Holds { index: usize },
    /// None of the central indices lies in both sets.
    Fails {
        candidates: Vec<usize>,
        i_set: BTreeSet<usize>,
        i_prime: BTreeSet<usize>,
    },
}

impl MainCondition {
    pub fn holds(&self) -> bool {
        matches!(self, MainCondition::Holds { .. })
    }
}

/// Central indices: `(n+1)/2` for odd `n`; `n/2 + 1` then `n/2` for even `n`.
pub fn central_indices(n: Rank) -> Vec<usize> {
    let m = n.get();
    if n.is_odd() {
        vec![(m + 1) / 2]
    } else {
        vec![m / 2 + 1, m / 2]
    }
}

/// Check the hypothesis of the main estimate for `θ = γ`.
pub fn verify_main_condition<I: ExactInt>(lambda: &DominantWeight, n: Rank) -> Result<MainCondition> {
    let n = Rank::at_least(n.get(), 2)?;
    let rep = compute_kappa::<I>(lambda, BoundKind::Oh, n)?;
    Ok(main_condition_from(&rep))
}

pub(crate) fn main_condition_from<I: ExactInt>(rep: &ExponentReport<I>) -> MainCondition {
    let candidates = central_indices(rep.n);
    match candidates
        .iter()
        .find(|i| rep.i_set.contains(i) && rep.i_prime.contains(i))
    {
        Some(&index) => MainCondition::Holds { index },
        None => MainCondition::Fails {
            candidates,
            i_set: rep.i_set.clone(),
            i_prime: rep.i_prime.clone(),
        },
    }
}

/// Best exponent ratio `κ/κ₀` the method can give: `2n/(n+1)` (odd) or `2n/(n+2)` (even).
pub fn best_improvement<I: ExactInt>(n: Rank) -> Ratio<I> {
    let m = n.get() as i64;
    if n.is_odd() {
        Ratio::new(int(2 * m), int(m + 1))
    } else {
        Ratio::new(int(2 * m), int(m + 2))
    }
}

/// Closed form of `min_j ψ(β̃_j)/2ρ(β̃_j)` for `θ = γ` and its argmin.
pub fn gamma_ratio_floor<I: ExactInt>(n: Rank) -> MinRatio<I> {
    let m = n.get() as i64;
    let (value, argmin) = if n.is_odd() {
        (Ratio::new(int(m), int(m + 1)), [((m + 1) / 2) as usize].into())
    } else {
        (
            Ratio::new(int(m + 1), int(m + 2)),
            [(m / 2) as usize, (m / 2 + 1) as usize].into(),
        )
    };
    MinRatio { value, argmin }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_bigint::BigInt;

    type Q = Ratio<BigInt>;

    fn r(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    fn w(q: &[u32]) -> DominantWeight {
        DominantWeight::new(q.to_vec()).unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn m1_examples() {
        let m = compute_m1::<BigInt>(&w(&[1, 0, 1]), r(3)).unwrap();
        assert_eq!((m.value, m.argmin), (rat(1, 4), set(&[2])));
        let m = compute_m1::<BigInt>(&w(&[1, 1]), r(2)).unwrap();
        assert_eq!((m.value, m.argmin), (rat(1, 2), set(&[1, 2])));
        let m = compute_m1::<BigInt>(&w(&[1, 0]), r(2)).unwrap();
        assert_eq!((m.value, m.argmin), (rat(1, 6), set(&[2])));
    }

    #[test]
    fn m1_prime_examples() {
        let g3 = theta::<BigInt>(BoundKind::Oh, r(3)).unwrap();
        let m = compute_m1_prime(&w(&[1, 0, 1]), &g3, r(3)).unwrap();
        assert_eq!((m.value, m.argmin), (rat(1, 3), set(&[2])));
        let g2 = theta::<BigInt>(BoundKind::Oh, r(2)).unwrap();
        let m = compute_m1_prime(&w(&[1, 1]), &g2, r(2)).unwrap();
        assert_eq!((m.value, m.argmin), (rat(2, 3), set(&[1, 2])));
        for q in [[1u32, 0, 0, 2], [0, 3, 1, 0], [5, 0, 0, 0]] {
            let n = r(4);
            let zero = Functional::<BigInt>::zero(n);
            assert_eq!(
                compute_m1_prime(&w(&q), &zero, n).unwrap(),
                compute_m1::<BigInt>(&w(&q), n).unwrap()
            );
        }
    }

    #[test]
    fn kappa_examples() {
        let rep = compute_kappa::<BigInt>(&w(&[1, 0, 1]), BoundKind::Oh, r(3)).unwrap();
        assert_eq!(rep.kappa, rat(1, 40));
        assert_eq!(rep.kappa_over_kappa0(), rat(3, 2));
        assert_eq!(rep.kappa0, rat(1, 60));

        let rep = compute_kappa::<BigInt>(&w(&[1, 1]), BoundKind::Oh, r(2)).unwrap();
        assert_eq!(rep.kappa, rat(1, 24));
        assert_eq!(rep.kappa, rep.kappa0);

        for q in [vec![1, 0, 0, 1], vec![0, 2, 0, 0], vec![3, 1, 4, 1]] {
            let rep = compute_kappa::<BigInt>(&w(&q), BoundKind::HarishChandra, r(4)).unwrap();
            assert_eq!(rep.kappa, rep.kappa0);
        }
    }

    #[test]
    fn kappa_identity_holds() {
        let rep = compute_kappa::<BigInt>(&w(&[2, 0, 1, 0, 3]), BoundKind::Oh, r(5)).unwrap();
        let expected = Q::from_integer(10.into()) * (Q::one() - &rep.m1 / &rep.m1_prime) * &rep.kappa0;
        assert_eq!(rep.kappa, expected);
        assert_eq!(rep.kappa0, rat(1, 5 * 6 * 7));
    }

    #[test]
    fn cone_examples() {
        let c = classify_cones::<BigInt>(&w(&[1, 0, 1]), r(3)).unwrap();
        assert_eq!(c.cones, set(&[2]));
        assert_eq!(c.sigma[&2], rat(3, 2));

        let c = classify_cones::<BigInt>(&w(&[1, 0, 0]), r(3)).unwrap();
        assert!(c.cones.is_empty());
        let g = compute_kappa::<BigInt>(&w(&[1, 0, 0]), BoundKind::Oh, r(3)).unwrap();
        assert_eq!(g.i_prime, set(&[3]));
        assert_eq!(g.m1_prime, rat(1, 10));

        // The central fundamental weight of A_5 is not in the central cone:
        // λ_3(β̃) = (1/2, 1, 3/2, 1, 1/2) against ψ(β̃) = (9/2, 7, 15/2, 7, 9/2)
        // gives ratios (1/9, 1/7, 1/5, 1/7, 1/9), minimized at the ends.
        let c = classify_cones::<BigInt>(&w(&[0, 0, 1, 0, 0]), r(5)).unwrap();
        assert!(c.cones.is_empty());
        let rep = compute_kappa::<BigInt>(&w(&[0, 0, 1, 0, 0]), BoundKind::Oh, r(5)).unwrap();
        assert_eq!(rep.i_prime, set(&[1, 5]));
        assert_eq!(rep.kappa, rep.kappa0);

        let c = classify_cones::<BigInt>(&w(&[1, 0, 0, 0, 1]), r(5)).unwrap();
        assert_eq!(c.cones, set(&[3]));
        for (i, s) in &c.sigma {
            assert_eq!(*s, c.sigma[&(6 - i)]);
        }
    }

    #[test]
    fn central_cone_member_beats_sigma() {
        let n = r(5);
        let rep = compute_kappa::<BigInt>(&w(&[1, 0, 0, 0, 1]), BoundKind::Oh, n).unwrap();
        assert_eq!(sigma::<BigInt>(3, n), rat(5, 3));
        assert!(rep.kappa_over_kappa0() >= sigma(3, n));
        assert_eq!(rep.kappa_over_kappa0(), rat(5, 3));
    }

    #[test]
    fn wn_examples() {
        assert_eq!(admissible_wn(r(3)).unwrap(), vec![w(&[1, 0, 1])]);
        assert_eq!(
            admissible_wn(r(7)).unwrap(),
            vec![w(&[1, 0, 0, 0, 0, 0, 1]), w(&[0, 1, 0, 0, 0, 1, 0])]
        );
        assert_eq!(admissible_wn(r(4)).unwrap(), vec![w(&[1, 0, 0, 1])]);
        assert_eq!(admissible_wn(r(2)).unwrap(), vec![w(&[1, 1])]);
        assert!(admissible_wn(r(1)).is_err());
    }

    #[test]
    fn main_condition_examples() {
        assert_eq!(
            verify_main_condition::<BigInt>(&w(&[1, 0, 1]), r(3)).unwrap(),
            MainCondition::Holds { index: 2 }
        );
        assert_eq!(
            verify_main_condition::<BigInt>(&w(&[1, 1]), r(2)).unwrap(),
            MainCondition::Holds { index: 2 }
        );
        match verify_main_condition::<BigInt>(&w(&[1, 0, 0]), r(3)).unwrap() {
            MainCondition::Fails { i_set, .. } => assert_eq!(i_set, set(&[3])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gamma_floor_closed_form_matches_engine() {
        for m in 2..=60 {
            let ctx = BoundContext::<BigInt>::new(BoundKind::Oh, r(m)).unwrap();
            assert_eq!(ctx.ratio_floor(), gamma_ratio_floor(r(m)), "n = {m}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn weight_and_rank() -> impl Strategy<Value = (usize, Vec<u32>)> {
            (2usize..14).prop_flat_map(|n| {
                proptest::collection::vec(0u32..30, n)
                    .prop_filter("non-zero weight", |q| q.iter().any(|&x| x > 0))
                    .prop_map(move |q| (n, q))
            })
        }

        proptest! {
            #[test]
            fn scaling_leaves_exponents_and_argmins_unchanged((n, q) in weight_and_rank(), c in 2u32..9) {
                let n = r(n);
                let lam = DominantWeight::new(q).unwrap();
                let big = lam.scaled(c).unwrap();
                let a = compute_m1::<BigInt>(&lam, n).unwrap();
                let b = compute_m1::<BigInt>(&big, n).unwrap();
                prop_assert_eq!(&b.value, &(&a.value * Q::from_integer(c.into())));
                prop_assert_eq!(a.argmin, b.argmin);
                for kind in BoundKind::ALL {
                    let x = compute_kappa::<BigInt>(&lam, kind, n).unwrap();
                    let y = compute_kappa::<BigInt>(&big, kind, n).unwrap();
                    prop_assert_eq!(x.kappa, y.kappa);
                    prop_assert_eq!(x.i_set, y.i_set);
                    prop_assert_eq!(x.i_prime, y.i_prime);
                }
            }

            #[test]
            fn oh_exponent_is_flip_invariant_and_bounded((n, q) in weight_and_rank()) {
                let n = r(n);
                let lam = DominantWeight::new(q).unwrap();
                let a = compute_kappa::<BigInt>(&lam, BoundKind::Oh, n).unwrap();
                let b = compute_kappa::<BigInt>(&lam.flipped(), BoundKind::Oh, n).unwrap();
                prop_assert_eq!(&a.kappa, &b.kappa);
                prop_assert!(a.kappa_over_kappa0() <= best_improvement(n));
                let hc = compute_kappa::<BigInt>(&lam, BoundKind::HarishChandra, n).unwrap();
                prop_assert_eq!(&hc.kappa, &hc.kappa0);
                let ht = compute_kappa::<BigInt>(&lam, BoundKind::HoweTan, n).unwrap();
                prop_assert!(ht.kappa <= ht.kappa0);
            }
        }
    }
}
