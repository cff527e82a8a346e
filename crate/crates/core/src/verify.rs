//! Machine checks of the exponent statements over ranges of `n`.
//!
//! Universally quantified statements are checked on an exhaustive set of
//! small weights plus seeded random weights. A failing check never panics;
//! it becomes a record carrying the counterexample.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::{weight_to_functional, DominantWeight, Rank};
use crate::exponents::{
    admissible_wn, best_improvement, central_indices, gamma_ratio_floor, main_condition_from, sigma,
    BoundContext, ExponentReport, MainCondition,
};
use crate::functionals::BoundKind;
use crate::scalar::{rational_string, ExactInt};
use crate::{BigInt, Ratio, Result};

/// One checked statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    /// Adjoint exponent `κ/κ₀ = 2n/(n+1)` (odd) or `2n/(n+2)` (even).
    AdjointExponent,
    /// `m₁/m₁′ >= ψ(β̃_i)/2ρ(β̃_i)` for `i ∈ I(λ)`, hence `>= min_j`.
    RatioFloor,
    /// `κ = κ₀` for `θ = ρ/n`.
    HarishChandraExact,
    /// `κ <= κ₀` for `θ = β/2`.
    HoweTanBound,
    /// Exact minimum and argmin of `ψ/2ρ` for `θ = γ`.
    GammaMinimum,
    /// Every weight of `W_n` meets the central-index condition.
    AdmissibleFamily,
    /// `κ >= σ_i κ₀` on `Λ⁺_i`.
    ConeExponent,
    /// The central cones contain a weight.
    #[serde(rename = "central-cones-nonempty")]
    CentralCones,
    /// `κ/κ₀` never exceeds the best improvement for `θ = γ`.
    OhUpperBound,
}

impl Statement {
    pub fn id(self) -> &'static str {
        match self {
            Statement::AdjointExponent => "adjoint-exponent",
            Statement::RatioFloor => "ratio-floor",
            Statement::HarishChandraExact => "harish-chandra-exact",
            Statement::HoweTanBound => "howe-tan-bound",
            Statement::GammaMinimum => "gamma-minimum",
            Statement::AdmissibleFamily => "admissible-family",
            Statement::ConeExponent => "cone-exponent",
            Statement::CentralCones => "central-cones-nonempty",
            Statement::OhUpperBound => "oh-upper-bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub weight: Vec<u32>,
    pub bound: Option<BoundKind>,
    pub message: String,
}

/// Result of one statement at one rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub statement: Statement,
    pub n: usize,
    pub passed: bool,
    pub checked: u64,
    pub detail: String,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub n_min: usize,
    pub n_max: usize,
    /// Every weight with `1 <= Σq <= exhaustive_level` for `n <= exhaustive_max_n`.
    pub exhaustive_level: u64,
    pub exhaustive_max_n: usize,
    /// Seeded random weights per rank for `n <= random_max_n`.
    pub random_per_n: usize,
    pub random_max_n: usize,
    pub random_entry_max: u32,
    pub seed: u64,
    pub max_counterexamples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_min: 2,
            n_max: 50,
            exhaustive_level: 6,
            exhaustive_max_n: 12,
            random_per_n: 1000,
            random_max_n: 50,
            random_entry_max: 50,
            seed: 0,
            max_counterexamples: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub config: VerifyConfig,
    pub records: Vec<Record>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn records_for(&self, statement: Statement) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(move |r| r.statement == statement)
    }
}

/// All weights of rank `n` with `1 <= Σq <= level`.
pub fn exhaustive_weights(n: Rank, level: u64) -> Vec<DominantWeight> {
    fn rec(prefix: &mut Vec<u32>, left: u64, n: usize, out: &mut Vec<DominantWeight>) {
        if prefix.len() == n {
            if prefix.iter().any(|&x| x > 0) {
                out.push(DominantWeight::new(prefix.clone()).expect("non-zero"));
            }
            return;
        }
        for v in 0..=left {
            prefix.push(v as u32);
            rec(prefix, left - v, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n.get()), level, n.get(), &mut out);
    out
}

/// Seeded random weights: half with every entry uniform in `0..=entry_max`,
/// half sparse (each entry non-zero with probability 1/4).
pub fn random_weights(n: Rank, count: usize, entry_max: u32, seed: u64) -> Vec<DominantWeight> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n.get() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let sparse = out.len() % 2 == 1;
        let q: Vec<u32> = (0..n.get())
            .map(|_| {
                if sparse && rng.gen_range(0..4) != 0 {
                    0
                } else {
                    rng.gen_range(0..=entry_max)
                }
            })
            .collect();
        if let Ok(w) = DominantWeight::new(q) {
            out.push(w);
        }
    }
    out
}

/// Fundamental weights, the `λ_i + λ_{n+1−i}` family and `W_n`.
pub fn structured_weights(n: Rank) -> Vec<DominantWeight> {
    let m = n.get();
    let mut out: Vec<DominantWeight> = (1..=m)
        .map(|i| DominantWeight::fundamental(i, n).expect("index in range"))
        .collect();
    out.extend((1..=(m + 1) / 2).map(|i| DominantWeight::symmetric_pair(i, n).expect("index in range")));
    if m >= 2 {
        out.extend(admissible_wn(n).expect("n >= 2"));
    }
    out
}

/// The sample used for universally quantified statements at rank `n`.
pub fn sample_weights(n: Rank, cfg: &VerifyConfig) -> Vec<DominantWeight> {
    let mut set: BTreeSet<DominantWeight> = structured_weights(n).into_iter().collect();
    if n.get() <= cfg.exhaustive_max_n {
        set.extend(exhaustive_weights(n, cfg.exhaustive_level));
    }
    if n.get() <= cfg.random_max_n {
        set.extend(random_weights(n, cfg.random_per_n, cfg.random_entry_max, cfg.seed));
    }
    set.into_iter().collect()
}

fn rs<I: ExactInt>(q: &Ratio<I>) -> String {
    rational_string(q)
}

fn record(statement: Statement, n: usize, checked: u64, detail: String, mut cex: Vec<Counterexample>, cap: usize) -> Record {
    cex.sort_by(|a, b| (&a.weight, a.bound).cmp(&(&b.weight, b.bound)));
    let passed = cex.is_empty();
    cex.truncate(cap);
    Record {
        statement,
        n,
        passed,
        checked,
        detail,
        counterexamples: cex,
    }
}

/// Adjoint exponent at rank `n`.
pub fn check_adjoint_exponent(n: Rank) -> Result<Record> {
    let n = Rank::at_least(n.get(), 2)?;
    let ctx = BoundContext::<BigInt>::new(BoundKind::Oh, n)?;
    let adj = DominantWeight::symmetric_pair(1, n)?;
    let rep = ctx.report(&adj)?;
    let got = rep.kappa_over_kappa0();
    let want = best_improvement::<BigInt>(n);
    let mut cex = Vec::new();
    if got != want {
        cex.push(Counterexample {
            weight: adj.coords().to_vec(),
            bound: Some(BoundKind::Oh),
            message: format!("kappa/kappa0 = {} but expected {}", rs(&got), rs(&want)),
        });
    }
    Ok(record(
        Statement::AdjointExponent,
        n.get(),
        1,
        format!("adjoint kappa/kappa0 = {}", rs(&got)),
        cex,
        1,
    ))
}

/// Exact minimum of `ψ/2ρ` for `θ = γ` against the closed form.
pub fn check_gamma_minimum(n: Rank) -> Result<Record> {
    let n = Rank::at_least(n.get(), 2)?;
    let ctx = BoundContext::<BigInt>::new(BoundKind::Oh, n)?;
    let got = ctx.ratio_floor();
    let want = gamma_ratio_floor::<BigInt>(n);
    let mut cex = Vec::new();
    if got != want {
        cex.push(Counterexample {
            weight: Vec::new(),
            bound: Some(BoundKind::Oh),
            message: format!(
                "minimum {} at {:?}, expected {} at {:?}",
                rs(&got.value),
                got.argmin,
                rs(&want.value),
                want.argmin
            ),
        });
    }
    Ok(record(
        Statement::GammaMinimum,
        n.get(),
        1,
        format!("minimum {} at {:?}", rs(&got.value), got.argmin),
        cex,
        1,
    ))
}

/// Central-index condition and best exponent for every weight of `W_n`.
pub fn check_admissible_family(n: Rank) -> Result<Record> {
    let n = Rank::at_least(n.get(), 2)?;
    let ctx = BoundContext::<BigInt>::new(BoundKind::Oh, n)?;
    let best = best_improvement::<BigInt>(n);
    let wn = admissible_wn(n)?;
    let mut cex = Vec::new();
    let mut parts = Vec::new();
    for mu in &wn {
        let rep = ctx.report(mu)?;
        let cond = main_condition_from(&rep);
        let ratio = rep.kappa_over_kappa0();
        parts.push(format!("{} kappa/kappa0 = {}", mu, rs(&ratio)));
        match cond {
            MainCondition::Holds { .. } if ratio == best => {}
            MainCondition::Holds { index } => cex.push(Counterexample {
                weight: mu.coords().to_vec(),
                bound: Some(BoundKind::Oh),
                message: format!(
                    "condition holds at {index} but kappa/kappa0 = {} instead of {}",
                    rs(&ratio),
                    rs(&best)
                ),
            }),
            MainCondition::Fails { candidates, i_set, i_prime } => cex.push(Counterexample {
                weight: mu.coords().to_vec(),
                bound: Some(BoundKind::Oh),
                message: format!("no index of {candidates:?} in I = {i_set:?} and I' = {i_prime:?}"),
            }),
        }
    }
    Ok(record(
        Statement::AdmissibleFamily,
        n.get(),
        wn.len() as u64,
        format!("W_{} = [{}]", n, parts.join("; ")),
        cex,
        usize::MAX,
    ))
}

struct Contexts {
    hc: BoundContext<BigInt>,
    ht: BoundContext<BigInt>,
    oh: BoundContext<BigInt>,
}

#[derive(Default)]
struct SampleOutcome {
    ratio_floor: Vec<Counterexample>,
    harish_chandra: Vec<Counterexample>,
    howe_tan: Vec<Counterexample>,
    cone_exponent: Vec<Counterexample>,
    upper: Vec<Counterexample>,
    central_hits: BTreeSet<usize>,
    cone_members: u64,
}

impl SampleOutcome {
    fn merge(mut self, other: SampleOutcome) -> SampleOutcome {
        self.ratio_floor.extend(other.ratio_floor);
        self.harish_chandra.extend(other.harish_chandra);
        self.howe_tan.extend(other.howe_tan);
        self.cone_exponent.extend(other.cone_exponent);
        self.upper.extend(other.upper);
        self.central_hits.extend(other.central_hits);
        self.cone_members += other.cone_members;
        self
    }
}

fn ratio_floor_violation(ctx: &BoundContext<BigInt>, rep: &ExponentReport<BigInt>) -> Option<String> {
    let ratio = rep.ratio();
    let floor = ctx.ratio_floor();
    if ratio < floor.value {
        return Some(format!(
            "m1/m1' = {} below min psi/2rho = {}",
            rs(&ratio),
            rs(&floor.value)
        ));
    }
    for &i in &rep.i_set {
        let local = ctx.psi().at(i) / ctx.rho2().at(i);
        if ratio < local {
            return Some(format!(
                "m1/m1' = {} below psi/2rho = {} at i = {i} in I",
                rs(&ratio),
                rs(&local)
            ));
        }
    }
    None
}

fn check_one(ctxs: &Contexts, central: &[usize], lambda: &DominantWeight) -> Result<SampleOutcome> {
    let n = ctxs.oh.rank();
    let f = weight_to_functional::<BigInt>(lambda, n)?;
    let mut out = SampleOutcome::default();
    let cx = |bound, message| Counterexample {
        weight: lambda.coords().to_vec(),
        bound: Some(bound),
        message,
    };
    for ctx in [&ctxs.hc, &ctxs.ht, &ctxs.oh] {
        let rep = ctx.report_functional(lambda, &f);
        if let Some(msg) = ratio_floor_violation(ctx, &rep) {
            out.ratio_floor.push(cx(ctx.kind(), msg));
        }
        match ctx.kind() {
            BoundKind::HarishChandra if rep.kappa != rep.kappa0 => {
                out.harish_chandra.push(cx(ctx.kind(), format!("kappa/kappa0 = {}", rs(&rep.kappa_over_kappa0()))));
            }
            BoundKind::HoweTan if rep.kappa > rep.kappa0 => {
                out.howe_tan.push(cx(ctx.kind(), format!("kappa/kappa0 = {}", rs(&rep.kappa_over_kappa0()))));
            }
            BoundKind::Oh => {
                let ratio = rep.kappa_over_kappa0();
                let best = best_improvement::<BigInt>(n);
                if ratio > best {
                    out.upper.push(cx(
                        ctx.kind(),
                        format!("kappa/kappa0 = {} exceeds {}", rs(&ratio), rs(&best)),
                    ));
                }
                for &i in &rep.i_prime {
                    out.cone_members += 1;
                    let s = sigma::<BigInt>(i, n);
                    if ratio < s {
                        out.cone_exponent.push(cx(
                            ctx.kind(),
                            format!("in cone {i}: kappa/kappa0 = {} below sigma = {}", rs(&ratio), rs(&s)),
                        ));
                    }
                    if central.contains(&i) {
                        out.central_hits.insert(i);
                    }
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Sampled statements (ratio floor, the three bound kinds, cone exponents, upper bound) at rank `n`.
pub fn check_sampled(n: Rank, weights: &[DominantWeight], cap: usize) -> Result<Vec<Record>> {
    let n = Rank::at_least(n.get(), 2)?;
    let ctxs = Contexts {
        hc: BoundContext::new(BoundKind::HarishChandra, n)?,
        ht: BoundContext::new(BoundKind::HoweTan, n)?,
        oh: BoundContext::new(BoundKind::Oh, n)?,
    };
    let central = central_indices(n);
    let outcome = weights
        .par_iter()
        .map(|w| check_one(&ctxs, &central, w))
        .try_reduce(SampleOutcome::default, |a, b| Ok(a.merge(b)))?;
    let m = n.get();
    let k = weights.len() as u64;
    let missing: Vec<usize> = central
        .iter()
        .copied()
        .filter(|i| !outcome.central_hits.contains(i))
        .collect();
    let cone_cex = missing
        .iter()
        .map(|i| Counterexample {
            weight: Vec::new(),
            bound: Some(BoundKind::Oh),
            message: format!("no sampled weight lies in the cone {i}"),
        })
        .collect();
    Ok(vec![
        record(Statement::RatioFloor, m, 3 * k, format!("{k} weights x 3 bounds"), outcome.ratio_floor, cap),
        record(Statement::HarishChandraExact, m, k, format!("{k} weights"), outcome.harish_chandra, cap),
        record(Statement::HoweTanBound, m, k, format!("{k} weights"), outcome.howe_tan, cap),
        record(
            Statement::ConeExponent,
            m,
            outcome.cone_members,
            format!("{} cone memberships among {k} weights", outcome.cone_members),
            outcome.cone_exponent,
            cap,
        ),
        record(
            Statement::CentralCones,
            m,
            k,
            format!("central cones {:?} hit by {:?}", central, outcome.central_hits),
            cone_cex,
            cap,
        ),
        record(Statement::OhUpperBound, m, k, format!("{k} weights"), outcome.upper, cap),
    ])
}

/// Run every statement for `n_min..=n_max`.
pub fn verify_statements(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let lo = cfg.n_min.max(2);
    let per_n: Vec<Vec<Record>> = (lo..=cfg.n_max)
        .into_par_iter()
        .map(|m| -> Result<Vec<Record>> {
            let n = Rank::new(m)?;
            let mut recs = vec![check_gamma_minimum(n)?, check_adjoint_exponent(n)?, check_admissible_family(n)?];
            let weights = sample_weights(n, cfg);
            recs.extend(check_sampled(n, &weights, cfg.max_counterexamples)?);
            Ok(recs)
        })
        .collect::<Result<_>>()?;
    let mut records: Vec<Record> = per_n.into_iter().flatten().collect();
    records.sort_by_key(|r| (r.statement, r.n));
    Ok(VerificationReport {
        config: cfg.clone(),
        records,
    })
}
