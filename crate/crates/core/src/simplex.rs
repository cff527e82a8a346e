//! Numerical check that `∫_D P(t) e^{Σt_i} dt` grows no faster than
//! `e^{S/m₁} S^{d+k−1}` on `D = {t ≥ 0, Σ m_i t_i ≤ S}`, with
//! `P = (1 + Σt_i)^d`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::adaptive;

/// Relative slack allowed when testing the tail for monotonicity, to absorb
/// quadrature error.
pub const MONOTONE_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_BURN_IN: f64 = 20.0;
const REL_TOL: f64 = 1e-11;
const MAX_INTERVALS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexConfig {
    pub m: Vec<f64>,
    pub degree: u32,
}

impl SimplexConfig {
    pub fn new(m: Vec<f64>, degree: u32) -> Result<Self> {
        if m.is_empty() || m.len() > 4 {
            return Err(Error::Invalid(format!("need 1 to 4 weights, got {}", m.len())));
        }
        if m.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::Invalid("weights must be positive and finite".into()));
        }
        if m.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid("weights must be non-decreasing".into()));
        }
        Ok(SimplexConfig { m, degree })
    }

    pub fn k(&self) -> usize {
        self.m.len()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplexPoint {
    pub s: f64,
    /// `∫_D P e^{Σt − S/m₁} dt`.
    pub scaled_integral: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplexReport {
    pub config: SimplexConfig,
    pub points: Vec<SimplexPoint>,
    pub sup: f64,
    pub burn_in: f64,
    pub bounded: bool,
    pub non_increasing: bool,
    pub pass: bool,
}

/// `∫_D (1+Σt)^d e^{Σt − S/m₁} dt` by nested adaptive Gauss–Kronrod.
pub fn scaled_integral(cfg: &SimplexConfig, s: f64) -> f64 {
    let shift = s / cfg.m[0];
    // integrate t_j over [0, room / m_j], carrying Σt so far
    fn level(cfg: &SimplexConfig, j: usize, room: f64, sum: f64, shift: f64) -> f64 {
        let hi = (room / cfg.m[j]).max(0.0);
        let f = |x: f64| {
            if j + 1 == cfg.k() {
                let total = sum + x;
                (1.0 + total).powi(cfg.degree as i32) * (total - shift).exp()
            } else {
                level(cfg, j + 1, room - cfg.m[j] * x, sum + x, shift)
            }
        };
        adaptive(f, 0.0, hi, REL_TOL, 0.0, MAX_INTERVALS).0
    }
    level(cfg, 0, s, 0.0, shift)
}

/// Evaluates the normalized integral on `s_grid` and decides PASS: every ratio
/// is finite, and beyond `burn_in` the ratios never rise by more than
/// [`MONOTONE_TOLERANCE`] (relative).
pub fn simplex_oracle(cfg: &SimplexConfig, s_grid: &[f64], burn_in: f64) -> Result<SimplexReport> {
    if s_grid.is_empty() {
        return Err(Error::Invalid("empty S grid".into()));
    }
    if s_grid.iter().any(|&s| !(s > 0.0) || s > 60.0) {
        return Err(Error::Invalid("S values must lie in (0, 60]".into()));
    }
    if s_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("S grid must be increasing".into()));
    }
    let power = (cfg.degree as usize + cfg.k() - 1) as i32;
    let points: Vec<SimplexPoint> = s_grid
        .iter()
        .map(|&s| {
            let scaled_integral = scaled_integral(cfg, s);
            SimplexPoint {
                s,
                scaled_integral,
                ratio: scaled_integral / s.powi(power),
            }
        })
        .collect();
    let bounded = points.iter().all(|p| p.ratio.is_finite() && p.ratio >= 0.0);
    let sup = points.iter().map(|p| p.ratio).fold(0.0, f64::max);
    let tail: Vec<f64> = points.iter().filter(|p| p.s >= burn_in).map(|p| p.ratio).collect();
    let non_increasing = tail.len() >= 2 && tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + MONOTONE_TOLERANCE));
    Ok(SimplexReport {
        config: cfg.clone(),
        points,
        sup,
        burn_in,
        bounded,
        non_increasing,
        pass: bounded && non_increasing,
    })
}

/// The nine standard configurations: `m ∈ {(1), (1,2), (1,1,3)}`, `d ∈ {0,1,2}`.
pub fn standard_configs() -> Vec<SimplexConfig> {
    let ms = [vec![1.0], vec![1.0, 2.0], vec![1.0, 1.0, 3.0]];
    ms.iter()
        .flat_map(|m| (0..=2).map(move |d| SimplexConfig::new(m.clone(), d).expect("valid configuration")))
        .collect()
}

pub fn default_s_grid() -> Vec<f64> {
    (1..=12).map(|i| 5.0 * i as f64).collect()
}
