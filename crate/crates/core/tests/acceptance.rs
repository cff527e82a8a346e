//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines always show.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use slcount::cartan::{rho2, weight_to_functional};
use slcount::enumerate::{enumerate_ball, naive_enumerate, EnumOptions};
use slcount::exponents::{admissible_wn, compute_kappa, min_ratio, verify_main_condition, BoundContext};
use slcount::fit::{fit_power_law, geometric_grid, upper_half_spread, GrowthModel};
use slcount::functionals::{psi, theta};
use slcount::rep::{adjoint_matrix_int, rep_norm_sq_int};
use slcount::simplex::{default_s_grid, simplex_oracle, standard_configs, DEFAULT_BURN_IN};
use slcount::verify::{sample_weights, VerifyConfig};
use slcount::volume::{ball_volume, fit_growth, QuadratureSpec};
use slcount::{BallRadius, BigInt, BoundKind, DominantWeight, Mode, Ratio, RepSpec};

use common::{rank, rep, random_unimodular, signed_permutations};

type Q = Ratio<BigInt>;
type Outcome = Result<String, String>;

fn q(a: i64, b: i64) -> Q {
    Ratio::new(BigInt::from(a), BigInt::from(b))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_adjoint_ratio() -> Outcome {
    for m in 2..=100usize {
        let n = rank(m);
        let adj = DominantWeight::symmetric_pair(1, n).unwrap();
        let rep = compute_kappa::<BigInt>(&adj, BoundKind::Oh, n).map_err(|e| e.to_string())?;
        let m = m as i64;
        let want = if m % 2 == 1 { q(2 * m, m + 1) } else { q(2 * m, m + 2) };
        ensure(rep.kappa_over_kappa0() == want, || {
            format!("n={m}: kappa/kappa0 = {} expected {want}", rep.kappa_over_kappa0())
        })?;
    }
    Ok("n = 2..100".into())
}

struct SampleStats {
    weights: usize,
    hc_bad: Vec<String>,
    ht_bad: Vec<String>,
    cone_bad: Vec<String>,
    cone_members: usize,
    missing_central: Vec<String>,
    floor_bad: Vec<String>,
}

/// Evaluates the sampled statements independently of the verification
/// module's bookkeeping.
fn sampled_statements() -> SampleStats {
    let cfg = VerifyConfig::default();
    let per_n: Vec<SampleStats> = (2..=50usize)
        .into_par_iter()
        .map(|m| {
            let n = rank(m);
            let ws = sample_weights(n, &cfg);
            let hc = BoundContext::<BigInt>::new(BoundKind::HarishChandra, n).unwrap();
            let ht = BoundContext::<BigInt>::new(BoundKind::HoweTan, n).unwrap();
            let oh = BoundContext::<BigInt>::new(BoundKind::Oh, n).unwrap();
            let central: Vec<usize> = if m % 2 == 1 { vec![(m + 1) / 2] } else { vec![m / 2, m / 2 + 1] };
            let mut hit = BTreeSet::new();
            let mut s = SampleStats {
                weights: ws.len(),
                hc_bad: vec![],
                ht_bad: vec![],
                cone_bad: vec![],
                cone_members: 0,
                missing_central: vec![],
                floor_bad: vec![],
            };
            for w in &ws {
                let r = hc.report(w).unwrap();
                if r.kappa != r.kappa0 {
                    s.hc_bad.push(format!("n={m} {w}"));
                }
                let r_ht = ht.report(w).unwrap();
                if r_ht.kappa > r_ht.kappa0 {
                    s.ht_bad.push(format!("n={m} {w}"));
                }
                let r_oh = oh.report(w).unwrap();
                for &i in &r_oh.i_prime {
                    s.cone_members += 1;
                    let sigma = q(m as i64, i as i64).min(q(m as i64, (m + 1 - i) as i64));
                    if r_oh.kappa_over_kappa0() < sigma {
                        s.cone_bad.push(format!("n={m} {w} i={i}"));
                    }
                    hit.insert(i);
                }
                for (ctx, rep) in [(&hc, &r), (&ht, &r_ht), (&oh, &r_oh)] {
                    let floor = min_ratio(ctx.psi(), &rho2(n)).value;
                    if rep.ratio() < floor {
                        s.floor_bad.push(format!("n={m} {w} {:?}", ctx.kind()));
                    }
                }
            }
            for c in central {
                if !hit.contains(&c) {
                    s.missing_central.push(format!("n={m} cone {c}"));
                }
            }
            s
        })
        .collect();
    let mut all = SampleStats {
        weights: 0,
        hc_bad: vec![],
        ht_bad: vec![],
        cone_bad: vec![],
        cone_members: 0,
        missing_central: vec![],
        floor_bad: vec![],
    };
    for s in per_n {
        all.weights += s.weights;
        all.hc_bad.extend(s.hc_bad);
        all.ht_bad.extend(s.ht_bad);
        all.cone_bad.extend(s.cone_bad);
        all.cone_members += s.cone_members;
        all.missing_central.extend(s.missing_central);
        all.floor_bad.extend(s.floor_bad);
    }
    all
}

fn none_bad(bad: &[String], what: &str, total: usize) -> Outcome {
    if bad.is_empty() {
        Ok(format!("{total} {what}"))
    } else {
        Err(format!("{} violations, first: {}", bad.len(), bad[0]))
    }
}

fn gamma_minimum() -> Outcome {
    for m in 2..=200usize {
        let n = rank(m);
        let g = theta::<BigInt>(BoundKind::Oh, n).map_err(|e| e.to_string())?;
        let p = psi(&g, n).map_err(|e| e.to_string())?;
        let got = min_ratio(&p, &rho2(n));
        let mi = m as i64;
        let (want, arg): (Q, BTreeSet<usize>) = if m % 2 == 1 {
            (q(mi, mi + 1), [(m + 1) / 2].into())
        } else {
            (q(mi + 1, mi + 2), [m / 2, m / 2 + 1].into())
        };
        ensure(got.value == want && got.argmin == arg, || {
            format!("n={m}: got {} at {:?}", got.value, got.argmin)
        })?;
    }
    Ok("n = 2..200".into())
}

fn admissible_family() -> Outcome {
    let mut total = 0;
    for m in 2..=101usize {
        let n = rank(m);
        for w in admissible_wn(n).map_err(|e| e.to_string())? {
            total += 1;
            let c = verify_main_condition::<BigInt>(&w, n).map_err(|e| e.to_string())?;
            ensure(c.holds(), || format!("n={m} {w}: {c:?}"))?;
        }
    }
    Ok(format!("{total} weights, n = 2..101"))
}

fn oracle_equivalence() -> Outcome {
    let opts = EnumOptions::default();
    let mut checked = 0;
    // STANDARD: ‖g‖²_F ≤ 8 forces |g_ij| ≤ 2
    for s in ["standard"] {
        for m in 0..=8u64 {
            let sp = rep(s, 2);
            let r = BallRadius::sqrt_of(m).unwrap();
            let fast = enumerate_ball(&sp, &r, Mode::Count, &opts).map_err(|e| e.to_string())?.record.count;
            let bound = if m < 4 { 1 } else { 2 };
            let slow = naive_enumerate(&sp, &r, bound, u64::MAX).map_err(|e| e.to_string())?;
            ensure(fast == slow, || format!("{s} T²={m}: {fast} vs naive {slow}"))?;
            checked += 1;
        }
    }
    // ADJOINT: ‖g⁻¹‖²_F ≥ 3 gives ‖g‖²_F ≤ (T²+1)/3, so T² ≤ 25 forces |g_ij| ≤ 2
    for m in 0..=25u64 {
        let sp = rep("adjoint", 2);
        let r = BallRadius::sqrt_of(m).unwrap();
        let fast = enumerate_ball(&sp, &r, Mode::Count, &opts).map_err(|e| e.to_string())?.record.count;
        let slow = naive_enumerate(&sp, &r, 2, u64::MAX).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("adjoint T²={m}: {fast} vs naive {slow}"))?;
        checked += 1;
    }
    // non-integer radius
    for (s, t) in [("standard", "2.5"), ("adjoint", "4.9")] {
        let sp = rep(s, 2);
        let r: BallRadius = t.parse().unwrap();
        let fast = enumerate_ball(&sp, &r, Mode::Count, &opts).map_err(|e| e.to_string())?.record.count;
        let slow = naive_enumerate(&sp, &r, 2, u64::MAX).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("{s} T={t}: {fast} vs naive {slow}"))?;
        checked += 1;
    }
    Ok(format!("{checked} (spec, T) pairs"))
}

fn adjoint_norm_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for n in [2usize, 3] {
        let sp = rep("adjoint", n);
        let d = n + 1;
        for _ in 0..1000 {
            let g = random_unimodular(d, 12, 2, &mut rng);
            let closed = rep_norm_sq_int(&sp, &g).map_err(|e| e.to_string())? as f64;
            let ad = adjoint_matrix_int::<f64>(&g).map_err(|e| e.to_string())?;
            ensure(ad.dim() == d * d - 1, || "wrong Ad dimension".into())?;
            let explicit = ad.frobenius_sq_real();
            worst = worst.max(((closed - explicit) / closed).abs());
        }
    }
    ensure(worst < 1e-12, || format!("max relative error {worst:.3e}"))?;
    Ok(format!("2000 matrices, max relative error {worst:.2e}"))
}

struct Sweep {
    t: Vec<f64>,
    counts: Vec<f64>,
    volumes: Vec<f64>,
}

fn sweep(spec: &RepSpec, t: Vec<f64>, node_budget: u64) -> Result<Sweep, String> {
    let opts = EnumOptions { node_budget };
    let mut counts = Vec::new();
    let mut volumes = Vec::new();
    for &x in &t {
        let e = enumerate_ball(spec, &BallRadius::from_f64(x).unwrap(), Mode::Count, &opts).map_err(|e| e.to_string())?;
        if e.record.partial {
            return Err(format!("node budget exhausted at T = {x}"));
        }
        counts.push(e.record.count as f64);
        volumes.push(ball_volume(spec, x, &QuadratureSpec::grid(32)).map_err(|e| e.to_string())?.value);
    }
    Ok(Sweep { t, counts, volumes })
}

fn spread_upper_half(s: &Sweep) -> f64 {
    let ratios: Vec<f64> = s.counts.iter().zip(&s.volumes).map(|(c, v)| c / v).collect();
    upper_half_spread(&ratios).unwrap_or(f64::INFINITY)
}

fn simplex_configs() -> Outcome {
    let mut passed = 0;
    for cfg in standard_configs() {
        let r = simplex_oracle(&cfg, &default_s_grid(), DEFAULT_BURN_IN).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("m = {:?}, d = {}: {:?}", cfg.m, cfg.degree, r.points))?;
        passed += 1;
    }
    Ok(format!("{passed}/9 configurations"))
}

fn invariant_suites() -> Outcome {
    let perms = signed_permutations(3);
    ensure(perms.len() == 24, || format!("{} signed permutations", perms.len()))?;
    // bi-K invariance of the listed ball
    for (s, m) in [("standard", 6), ("adjoint", 24), ("dual", 5)] {
        let sp = rep(s, 2);
        let list = enumerate_ball(&sp, &BallRadius::sqrt_of(m).unwrap(), Mode::List, &EnumOptions::default())
            .map_err(|e| e.to_string())?
            .matrices
            .unwrap();
        let set: BTreeSet<String> = list.iter().map(|g| g.to_string()).collect();
        for k in &perms {
            for g in &list {
                for h in [k.mul(g), g.mul(k)] {
                    ensure(set.contains(&h.to_string()), || format!("{s}: {h} missing"))?;
                }
            }
        }
        // transpose invariance
        for g in &list {
            ensure(set.contains(&g.transpose().to_string()), || format!("{s}: transpose of {g} missing"))?;
        }
    }
    // monotonicity in T
    for s in ["standard", "adjoint", "ext:2"] {
        let sp = rep(s, 3);
        let mut prev = 0;
        for m in [3u64, 4, 6, 9, 12, 16, 20] {
            let c = enumerate_ball(&sp, &BallRadius::sqrt_of(m).unwrap(), Mode::Count, &EnumOptions::default())
                .map_err(|e| e.to_string())?
                .record
                .count;
            ensure(c >= prev, || format!("{s} n=3: count drops at T²={m}"))?;
            prev = c;
        }
    }
    // scaling invariance of κ and the argmin sets
    for m in 2..=12usize {
        let n = rank(m);
        for w in sample_weights(n, &VerifyConfig { random_per_n: 20, ..VerifyConfig::default() }).iter().take(300) {
            for kind in [BoundKind::HarishChandra, BoundKind::HoweTan, BoundKind::Oh] {
                let a = compute_kappa::<BigInt>(w, kind, n).unwrap();
                for c in [2u32, 7] {
                    let b = compute_kappa::<BigInt>(&w.scaled(c).unwrap(), kind, n).unwrap();
                    let cq = q(c as i64, 1);
                    ensure(
                        b.kappa == a.kappa && b.i_set == a.i_set && b.i_prime == a.i_prime && b.m1 == &a.m1 * &cq,
                        || format!("scaling breaks at n={m} {w} x{c}"),
                    )?;
                }
                let f = compute_kappa::<BigInt>(&w.flipped(), kind, n).unwrap();
                ensure(f.kappa == a.kappa, || format!("flip changes kappa at n={m} {w}"))?;
            }
        }
    }
    // weights map linearly
    let n = rank(5);
    let a = DominantWeight::new(vec![1, 0, 2, 0, 1]).unwrap();
    let b = DominantWeight::new(vec![0, 3, 1, 0, 0]).unwrap();
    let sum = DominantWeight::new(vec![1, 3, 3, 0, 1]).unwrap();
    let fa = weight_to_functional::<BigInt>(&a, n).unwrap();
    let fb = weight_to_functional::<BigInt>(&b, n).unwrap();
    let fs = weight_to_functional::<BigInt>(&sum, n).unwrap();
    ensure((0..5).all(|j| fa.values()[j].clone() + fb.values()[j].clone() == fs.values()[j]), || {
        "weight_to_functional is not additive".into()
    })?;
    Ok("bi-K, transpose, monotonicity, scaling, flip".into())
}

fn main() {
    let mut failures = 0;
    let mut report = |id: u32, name: &str, start: Instant, outcome: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {id:>2} {name}: {detail} ({secs:.1}s)");
            }
        }
    };

    let t0 = Instant::now();
    report(1, "adjoint exponent ratio", t0, exact_adjoint_ratio());

    let t0 = Instant::now();
    let stats = sampled_statements();
    let t_sample = t0;
    report(2, "harish-chandra bound gives kappa0", t_sample, none_bad(&stats.hc_bad, "weights", stats.weights));
    report(3, "howe-tan bound at most kappa0", t_sample, none_bad(&stats.ht_bad, "weights", stats.weights));

    let t0 = Instant::now();
    report(4, "gamma ratio minimum and argmin", t0, gamma_minimum());

    let t0 = Instant::now();
    report(5, "admissible family meets the central condition", t0, admissible_family());

    let cones = if !stats.cone_bad.is_empty() {
        none_bad(&stats.cone_bad, "", 0)
    } else if !stats.missing_central.is_empty() {
        Err(format!("empty central cones: {:?}", stats.missing_central))
    } else {
        Ok(format!("{} cone memberships; central cones hit for n = 2..50", stats.cone_members))
    };
    report(6, "cone exponents and central cones", t_sample, cones);
    report(7, "ratio floor", t_sample, none_bad(&stats.floor_bad, "weight/bound pairs", 3 * stats.weights));

    let t0 = Instant::now();
    report(8, "oracle equivalence (n=2)", t0, oracle_equivalence());

    let t0 = Instant::now();
    report(9, "adjoint norm oracle", t0, adjoint_norm_oracle());

    let t0 = Instant::now();
    let std_sweep = sweep(&rep("standard", 2), geometric_grid(10.0, 60.0, 6).unwrap(), 100_000_000_000);
    let count_fit = std_sweep.as_ref().map_err(Clone::clone).and_then(|s| {
        let f = fit_power_law(&s.t, &s.counts, GrowthModel::Pure).map_err(|e| e.to_string())?;
        ensure((5.7..=6.3).contains(&f.slope), || format!("slope {:.4}", f.slope))?;
        Ok(format!("slope {:.4} on T in [10, 60], counts {:?}", f.slope, s.counts))
    });
    report(10, "count growth SL(3,Z) standard", t0, count_fit);

    let t0 = Instant::now();
    let volume_fit = std_sweep.as_ref().map_err(Clone::clone).and_then(|s| {
        let f = fit_power_law(&s.t, &s.volumes, GrowthModel::Pure).map_err(|e| e.to_string())?;
        ensure((5.8..=6.2).contains(&f.slope), || format!("standard slope {:.4}", f.slope))?;
        let grid = geometric_grid(100.0, 10_000.0, 8).unwrap();
        let g = fit_growth(&rep("adjoint", 2), &grid, &QuadratureSpec::grid(32), GrowthModel::Log).map_err(|e| e.to_string())?;
        ensure((1.8..=2.2).contains(&g.fit.slope), || format!("adjoint log-model slope {:.4}", g.fit.slope))?;
        Ok(format!(
            "standard slope {:.4}; adjoint log-model slope {:.4} (log power {:.3}) on T in [100, 10000]",
            f.slope, g.fit.slope, g.fit.log_power
        ))
    });
    report(11, "volume growth", t0, volume_fit);

    let t0 = Instant::now();
    let ratio = std_sweep.as_ref().map_err(Clone::clone).and_then(|s| {
        let a = spread_upper_half(s);
        ensure(a < 0.10, || format!("standard spread {:.2}%", 100.0 * a))?;
        let adj = sweep(&rep("adjoint", 2), geometric_grid(10.0, 300.0, 8).unwrap(), 10_000_000_000)?;
        let b = spread_upper_half(&adj);
        ensure(b < 0.15, || format!("adjoint spread {:.2}%", 100.0 * b))?;
        Ok(format!("standard spread {:.3}%, adjoint spread {:.3}% (T in [10, 300])", 100.0 * a, 100.0 * b))
    });
    report(12, "count/volume ratio stabilization", t0, ratio);

    let t0 = Instant::now();
    report(13, "simplex growth oracle", t0, simplex_configs());

    let t0 = Instant::now();
    report(14, "invariant suites", t0, invariant_suites());

    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
