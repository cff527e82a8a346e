//! Volume of the norm ball `B_T^τ` through the polar decomposition:
//! `∫_{𝔞⁺(T,τ)} ∏_{α>0} sinh α(H) dH`, with the Haar normalization constant
//! fixed to one.
//!
//! Points of the closed chamber are written `H = Σ t_j β̃_j` with `t ≥ 0`;
//! the Lebesgue measure on `(h_1, …, h_n)` is `dt / (n+1)`. Because the
//! highest weight occurs once, `λ(H) ≤ log T` on the region, so each ray
//! `t = r ω` with `λ(ω) = 1` leaves the region at a unique `r*(ω) ≤ log T`
//! (the squared norm is convex in `H` and minimal at `0`). The volume is
//!
//! ```text
//! (1/(n+1)) ∫_{λ(ω)=1} ∫_0^{r*(ω)} ∏ sinh(r α(ω)) r^{n−1} dr dω
//! ```
//!
//! The inner integral is Gauss–Legendre; the directions `ω` are either a
//! nested Gauss–Legendre product rule (GRID) or uniform random samples
//! (MONTE_CARLO).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::{positive_root_ranges, weight_to_functional};
use crate::error::{Error, Result};
use crate::fit::{fit_power_law, GrowthFit, GrowthModel};
use crate::quad::Rule;
use crate::rep::{rep_weights, RepSpec};
use crate::scalar::{rational_to_f64, real, Real};

pub const MIN_SAMPLES: usize = 10_000;
const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    MonteCarlo,
    Grid,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::MonteCarlo => "mc",
            Method::Grid => "grid",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mc" | "monte-carlo" | "monte_carlo" => Ok(Method::MonteCarlo),
            "grid" => Ok(Method::Grid),
            other => Err(Error::Invalid(format!("unknown method {other:?} (expected mc or grid)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub method: Method,
    /// Gauss–Legendre nodes per axis (GRID) or random directions (MONTE_CARLO).
    pub resolution: usize,
    /// Nodes on each radial segment.
    pub radial_nodes: usize,
    pub seed: u64,
    /// Bound `R` on `λ(H)` for the integration domain; defaults to `log T + 1`.
    pub truncation: Option<f64>,
}

impl QuadratureSpec {
    pub fn grid(resolution: usize) -> Self {
        QuadratureSpec {
            method: Method::Grid,
            resolution,
            radial_nodes: 64,
            seed: 0,
            truncation: None,
        }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        QuadratureSpec {
            method: Method::MonteCarlo,
            resolution: samples,
            radial_nodes: 64,
            seed,
            truncation: None,
        }
    }

    pub fn with_truncation(mut self, r: f64) -> Self {
        self.truncation = Some(r);
        self
    }

    fn validate(&self) -> Result<()> {
        match self.method {
            Method::MonteCarlo if self.resolution < MIN_SAMPLES => Err(Error::Invalid(format!(
                "Monte Carlo needs at least {MIN_SAMPLES} samples, got {}",
                self.resolution
            ))),
            Method::Grid if self.resolution < 2 => Err(Error::Invalid("grid resolution must be at least 2".into())),
            _ if self.radial_nodes < 2 => Err(Error::Invalid("at least 2 radial nodes are needed".into())),
            _ => Ok(()),
        }
    }
}

/// A volume with its error estimate: the Monte Carlo standard error, or the
/// change against the half-resolution grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate<F> {
    pub value: F,
    pub stderr: F,
}

/// The integrand and region data in simple-root coordinates.
struct Chamber<F> {
    n: usize,
    /// `λ(β̃_j)`, positive for the supported representations.
    lambda: Vec<F>,
    /// `(log mult(μ), 2μ(β̃_j))` for every weight.
    weights: Vec<(F, Vec<F>)>,
    /// Positive roots as coordinate ranges `t_i + … + t_j`.
    roots: Vec<(usize, usize)>,
}

impl<F: Real> Chamber<F> {
    fn new(spec: &RepSpec) -> Result<Self> {
        let rank = spec.rank();
        let n = rank.get();
        let d = n + 1;
        let lambda: Vec<F> = weight_to_functional::<i64>(&spec.highest_weight(), rank)?
            .values()
            .iter()
            .map(|v| real(rational_to_f64(v)))
            .collect();
        // (β̃_j)_i = (n+1−j)/(n+1) for i ≤ j, −j/(n+1) otherwise (1-based)
        let dual = |i: usize, j: usize| -> f64 {
            if i <= j {
                (d - j) as f64 / d as f64
            } else {
                -(j as f64) / d as f64
            }
        };
        let weights = rep_weights(spec)
            .entries()
            .iter()
            .map(|(w, m)| {
                let coeffs = (1..=n)
                    .map(|j| real(2.0 * w.iter().enumerate().map(|(i, &wi)| wi as f64 * dual(i + 1, j)).sum::<f64>()))
                    .collect();
                (real((*m as f64).ln()), coeffs)
            })
            .collect();
        let roots = positive_root_ranges(rank).into_iter().map(|(i, j)| (i - 1, j - 1)).collect();
        Ok(Chamber {
            n,
            lambda,
            weights,
            roots,
        })
    }

    /// `log ‖τ(exp H)‖²` at `t`.
    fn log_norm_sq(&self, t: &[F]) -> F {
        let exps: Vec<F> = self
            .weights
            .iter()
            .map(|(lm, c)| *lm + c.iter().zip(t).fold(F::zero(), |s, (&a, &b)| s + a * b))
            .collect();
        let top = exps.iter().fold(F::neg_infinity(), |m, &x| m.max(x));
        top + exps.iter().fold(F::zero(), |s, &x| s + (x - top).exp()).ln()
    }

    /// `log ∏ sinh α(H)`.
    fn log_density(&self, t: &[F]) -> F {
        let mut prefix = vec![F::zero(); self.n + 1];
        for i in 0..self.n {
            prefix[i + 1] = prefix[i] + t[i];
        }
        let thirty: F = real(30.0);
        let ln2: F = real(std::f64::consts::LN_2);
        self.roots.iter().fold(F::zero(), |acc, &(i, j)| {
            let a = prefix[j + 1] - prefix[i];
            let ls = if a > thirty {
                a + (-(-a - a).exp()).ln_1p() - ln2
            } else {
                a.sinh().ln()
            };
            acc + ls
        })
    }

    /// Exit radius along `ω` (with `λ(ω) = 1`), or `None` if the ray is still
    /// inside at the truncation level.
    fn exit_radius(&self, omega: &[F], log_t2: F, trunc: F) -> Option<F> {
        let at = |r: F| -> F {
            let t: Vec<F> = omega.iter().map(|&w| w * r).collect();
            self.log_norm_sq(&t) - log_t2
        };
        if at(trunc) <= F::zero() {
            return None;
        }
        let (mut lo, mut hi) = (F::zero(), trunc);
        for _ in 0..200 {
            let mid = (lo + hi) / real(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if at(mid) <= F::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }

    /// `∫_0^{r*} ∏ sinh(r α(ω)) r^{n−1} dr`.
    fn radial(&self, omega: &[F], r_star: F, rule: &Rule<F>) -> F {
        let mut t = vec![F::zero(); self.n];
        let pow = real::<F>((self.n - 1) as f64);
        rule.on(F::zero(), r_star).fold(F::zero(), |acc, (r, w)| {
            for (ti, &oi) in t.iter_mut().zip(omega) {
                *ti = oi * r;
            }
            acc + w * (self.log_density(&t) + pow * r.ln()).exp()
        })
    }
}

/// `log T`-level geometry of one evaluation.
struct Level<F> {
    log_t2: F,
    trunc: F,
    t: f64,
}

fn level<F: Real>(t: F, q: &QuadratureSpec) -> Level<F> {
    let log_t = t.ln();
    let trunc = q.truncation.map(real).unwrap_or(log_t + F::one());
    Level {
        log_t2: log_t + log_t,
        trunc,
        t: t.to_f64().unwrap_or(f64::NAN),
    }
}

/// Numerical `vol(B_T^τ)` (Haar constant one).
///
/// Returns zero for `T ≤ sqrt(dim τ)`, where the region is at most the
/// single point `H = 0`.
pub fn ball_volume<F: Real>(spec: &RepSpec, t: F, q: &QuadratureSpec) -> Result<VolumeEstimate<F>> {
    q.validate()?;
    if !(t > F::zero()) || !t.is_finite() {
        return Err(Error::Invalid(format!("T must be positive and finite, got {t}")));
    }
    if t * t <= real(spec.dim() as f64) {
        return Ok(VolumeEstimate {
            value: F::zero(),
            stderr: F::zero(),
        });
    }
    let ch = Chamber::<F>::new(spec)?;
    let lv = level(t, q);
    let rule = Rule::<F>::new(q.radial_nodes);
    match q.method {
        Method::Grid => {
            let fine = grid(&ch, &lv, q.resolution, &rule)?;
            let coarse = grid(&ch, &lv, (q.resolution / 2).max(1), &Rule::new((q.radial_nodes / 2).max(1)))?;
            Ok(VolumeEstimate {
                value: fine,
                stderr: (fine - coarse).abs(),
            })
        }
        Method::MonteCarlo => monte_carlo(&ch, &lv, q, &rule),
    }
}

fn scale_of<F: Real>(ch: &Chamber<F>) -> F {
    // 1/(n+1) from dH, 1/c_n from the slice parameterization
    F::one() / (real::<F>((ch.n + 1) as f64) * ch.lambda[ch.n - 1])
}

fn ray<F: Real>(ch: &Chamber<F>, lv: &Level<F>, omega: &[F], rule: &Rule<F>) -> Result<F> {
    match ch.exit_radius(omega, lv.log_t2, lv.trunc) {
        Some(r) if r > F::zero() => Ok(ch.radial(omega, r, rule)),
        Some(_) => Ok(F::zero()),
        None => Err(Error::Truncation {
            level: lv.trunc.to_f64().unwrap_or(f64::NAN),
            t: lv.t,
        }),
    }
}

fn grid<F: Real>(ch: &Chamber<F>, lv: &Level<F>, res: usize, rule: &Rule<F>) -> Result<F> {
    let n = ch.n;
    let outer = Rule::<F>::new(res);
    if n == 1 {
        let omega = [F::one() / ch.lambda[0]];
        return Ok(ray(ch, lv, &omega, rule)? * scale_of(ch));
    }
    // nested product rule over ω_1, …, ω_{n−1}; ω_n closes λ(ω) = 1
    fn nest<F: Real>(
        ch: &Chamber<F>,
        lv: &Level<F>,
        outer: &Rule<F>,
        rule: &Rule<F>,
        omega: &mut Vec<F>,
        room: F,
    ) -> Result<F> {
        let k = omega.len();
        let n = ch.n;
        if k == n - 1 {
            let mut full = omega.clone();
            full.push((room / ch.lambda[n - 1]).max(F::zero()));
            return ray(ch, lv, &full, rule);
        }
        let hi = room / ch.lambda[k];
        let mut acc = F::zero();
        for (x, w) in outer.on(F::zero(), hi) {
            omega.push(x);
            acc = acc + w * nest(ch, lv, outer, rule, omega, room - ch.lambda[k] * x)?;
            omega.pop();
        }
        Ok(acc)
    }
    let hi = F::one() / ch.lambda[0];
    let nodes: Vec<(F, F)> = outer.on(F::zero(), hi).collect();
    let parts: Vec<F> = nodes
        .par_iter()
        .map(|&(x, w)| {
            let mut omega = vec![x];
            nest(ch, lv, &outer, rule, &mut omega, F::one() - ch.lambda[0] * x).map(|v| v * w)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(F::zero(), |s, v| s + v) * scale_of(ch))
}

fn monte_carlo<F: Real>(ch: &Chamber<F>, lv: &Level<F>, q: &QuadratureSpec, rule: &Rule<F>) -> Result<VolumeEstimate<F>> {
    let n = ch.n;
    // area of {ω' ≥ 0, Σ_{j<n} λ_j ω_j ≤ 1} in the coordinates ω_1..ω_{n−1}
    let area = (1..n).fold(F::one(), |a, j| a / (ch.lambda[j - 1] * real(j as f64)));
    let chunks = q.resolution.div_ceil(CHUNK);
    let sums: Vec<(F, F)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(q.resolution - c * CHUNK);
            let mut s = F::zero();
            let mut s2 = F::zero();
            let mut omega = vec![F::zero(); n];
            for _ in 0..count {
                // uniform point of the standard simplex, mapped onto λ(ω) = 1
                let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
                let total: f64 = e.iter().sum();
                for j in 0..n {
                    omega[j] = real::<F>(e[j] / total) / ch.lambda[j];
                }
                let v = ray(ch, lv, &omega, rule)?;
                s = s + v;
                s2 = s2 + v * v;
            }
            Ok((s, s2))
        })
        .collect::<Result<_>>()?;
    let (s, s2) = sums.into_iter().fold((F::zero(), F::zero()), |a, b| (a.0 + b.0, a.1 + b.1));
    let m = real::<F>(q.resolution as f64);
    let mean = s / m;
    let var = ((s2 / m - mean * mean) * m / (m - F::one())).max(F::zero());
    let factor = area * scale_of(ch);
    Ok(VolumeEstimate {
        value: mean * factor,
        stderr: (var / m).sqrt() * factor,
    })
}

/// Whether `H = Σ t_j β̃_j` (simple-root coordinates, `t ≥ 0`) lies in
/// `𝔞⁺(T, τ)`.
pub fn in_region<F: Real>(spec: &RepSpec, t_coords: &[F], t: F) -> Result<bool> {
    let ch = Chamber::<F>::new(spec)?;
    if t_coords.len() != ch.n {
        return Err(Error::DimensionMismatch {
            expected: ch.n,
            got: t_coords.len(),
        });
    }
    if t_coords.iter().any(|&x| x < F::zero()) {
        return Err(Error::ChamberViolation);
    }
    Ok(ch.log_norm_sq(t_coords) <= t.ln() * real(2.0))
}

/// `λ(H)` for `H` in simple-root coordinates, `λ` the highest weight of `spec`.
pub fn highest_weight_value<F: Real>(spec: &RepSpec, t_coords: &[F]) -> Result<F> {
    let ch = Chamber::<F>::new(spec)?;
    Ok(ch.lambda.iter().zip(t_coords).fold(F::zero(), |s, (&a, &b)| s + a * b))
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeFit {
    pub t: Vec<f64>,
    pub volumes: Vec<VolumeEstimate<f64>>,
    pub fit: GrowthFit<f64>,
    /// Largest relative error estimate over the grid; a large value means
    /// quadrature noise may dominate the fit.
    pub max_relative_error: f64,
}

/// Volumes on a T grid and a least-squares growth fit through them.
pub fn fit_growth(spec: &RepSpec, t_grid: &[f64], q: &QuadratureSpec, model: GrowthModel) -> Result<VolumeFit> {
    if t_grid.len() < 6 {
        return Err(Error::Invalid(format!("growth fits need at least 6 T values, got {}", t_grid.len())));
    }
    let lo = t_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = t_grid.iter().cloned().fold(0.0, f64::max);
    if !(hi >= 10.0 * lo) {
        return Err(Error::Invalid(format!("the T grid must span a decade, got [{lo}, {hi}]")));
    }
    let volumes = t_grid
        .iter()
        .map(|&t| ball_volume::<f64>(spec, t, q))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = volumes.iter().map(|v| v.value).collect();
    let fit = fit_power_law(t_grid, &values, model)?;
    let max_relative_error = volumes.iter().map(|v| v.stderr / v.value).fold(0.0, f64::max);
    Ok(VolumeFit {
        t: t_grid.to_vec(),
        volumes,
        fit,
        max_relative_error,
    })
}
