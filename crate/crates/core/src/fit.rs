//! Least-squares growth fits on log-transformed data.
//!
//! `PURE` regresses `log y` on `(1, log T)`; `LOG` on `(1, log T, log log T)`,
//! leaving the log power free.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthModel {
    Pure,
    Log,
}

impl fmt::Display for GrowthModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthModel::Pure => "pure",
            GrowthModel::Log => "log",
        })
    }
}

impl FromStr for GrowthModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pure" => Ok(GrowthModel::Pure),
            "log" => Ok(GrowthModel::Log),
            other => Err(Error::Invalid(format!("unknown model {other:?} (expected pure or log)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit<F> {
    pub model: GrowthModel,
    /// Exponent of `T`.
    pub slope: F,
    /// Exponent of `log T` (zero for the pure model).
    pub log_power: F,
    pub intercept: F,
    /// Standard error of the slope.
    pub stderr: F,
    pub log_power_stderr: F,
    pub r_squared: F,
    /// Root mean square residual in `log y`.
    pub residual: F,
    pub points: usize,
}

/// Fits `y ≈ C T^slope (log T)^log_power` by ordinary least squares.
pub fn fit_power_law<F: Real>(t: &[F], y: &[F], model: GrowthModel) -> Result<GrowthFit<F>> {
    if t.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: t.len(),
            got: y.len(),
        });
    }
    let p = match model {
        GrowthModel::Pure => 2,
        GrowthModel::Log => 3,
    };
    if t.len() < p {
        return Err(Error::Degenerate(format!("{} points cannot determine {p} coefficients", t.len())));
    }
    let mut rows = Vec::with_capacity(t.len());
    let mut obs = Vec::with_capacity(t.len());
    for (&ti, &yi) in t.iter().zip(y) {
        if !(yi > F::zero()) || !(ti > F::zero()) {
            return Err(Error::Degenerate(format!("non-positive data point ({ti}, {yi})")));
        }
        let lt = ti.ln();
        let mut row = vec![F::one(), lt];
        if model == GrowthModel::Log {
            if !(lt > F::zero()) {
                return Err(Error::Degenerate(format!("log log T undefined at T = {ti}")));
            }
            row.push(lt.ln());
        }
        rows.push(row);
        obs.push(yi.ln());
    }
    let (beta, cov_unscaled) = normal_equations(&rows, &obs, p)?;
    let n = obs.len();
    let mean = obs.iter().fold(F::zero(), |s, &v| s + v) / real(n as f64);
    let mut rss = F::zero();
    let mut tss = F::zero();
    for (row, &o) in rows.iter().zip(&obs) {
        let fit = row.iter().zip(&beta).fold(F::zero(), |s, (&x, &b)| s + x * b);
        rss = rss + (o - fit) * (o - fit);
        tss = tss + (o - mean) * (o - mean);
    }
    let dof = n.saturating_sub(p);
    let sigma2 = if dof > 0 { rss / real(dof as f64) } else { F::zero() };
    let r_squared = if tss > F::zero() { F::one() - rss / tss } else { F::one() };
    Ok(GrowthFit {
        model,
        slope: beta[1],
        log_power: if p == 3 { beta[2] } else { F::zero() },
        intercept: beta[0],
        stderr: (sigma2 * cov_unscaled[1][1]).sqrt(),
        log_power_stderr: if p == 3 { (sigma2 * cov_unscaled[2][2]).sqrt() } else { F::zero() },
        r_squared,
        residual: (rss / real(n as f64)).sqrt(),
        points: n,
    })
}

/// Solves `XᵀX β = Xᵀy`; returns `β` and `(XᵀX)⁻¹`.
fn normal_equations<F: Real>(rows: &[Vec<F>], obs: &[F], p: usize) -> Result<(Vec<F>, Vec<Vec<F>>)> {
    // columns are scaled to unit norm for conditioning, then unscaled
    let mut a = vec![vec![F::zero(); 2 * p]; p];
    let mut rhs = vec![F::zero(); p];
    for (row, &o) in rows.iter().zip(obs) {
        for i in 0..p {
            rhs[i] = rhs[i] + row[i] * o;
            for j in 0..p {
                a[i][j] = a[i][j] + row[i] * row[j];
            }
        }
    }
    let scale = a.iter().enumerate().map(|(i, r)| r[i].sqrt()).collect::<Vec<F>>();
    if scale.iter().any(|s| !(*s > F::zero())) {
        return Err(Error::Degenerate("zero design column".into()));
    }
    for i in 0..p {
        for j in 0..p {
            a[i][j] = a[i][j] / (scale[i] * scale[j]);
        }
        a[i][p + i] = F::one();
    }
    // Gauss–Jordan with partial pivoting on [A | I]
    for col in 0..p {
        let piv = (col..p)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() < real(1e-12) {
            return Err(Error::Degenerate("singular design matrix (T values too close together?)".into()));
        }
        a.swap(col, piv);
        let d = a[col][col];
        for v in a[col].iter_mut() {
            *v = *v / d;
        }
        for r in 0..p {
            if r != col {
                let f = a[r][col];
                for c in 0..2 * p {
                    a[r][c] = a[r][c] - f * a[col][c];
                }
            }
        }
    }
    let inv: Vec<Vec<F>> = (0..p)
        .map(|i| (0..p).map(|j| a[i][p + j] / (scale[i] * scale[j])).collect())
        .collect();
    let beta = (0..p)
        .map(|i| (0..p).fold(F::zero(), |s, j| s + inv[i][j] * rhs[j]))
        .collect();
    Ok((beta, inv))
}

/// `(T_start · r^i)` for `i = 0..steps`, ending at `T_end`.
pub fn geometric_grid(start: f64, end: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !(start > 0.0) || !(end > start) {
        return Err(Error::Invalid(format!(
            "geometric grid needs 0 < start < end and at least 2 steps (got {start}, {end}, {steps})"
        )));
    }
    let ratio = (end / start).powf(1.0 / (steps - 1) as f64);
    Ok((0..steps)
        .map(|i| if i + 1 == steps { end } else { start * ratio.powi(i as i32) })
        .collect())
}

/// Relative spread `(max − min) / mean` over the upper half of `values`
/// (the last `⌈len/2⌉` entries), used to judge whether a ratio has settled.
pub fn upper_half_spread(values: &[f64]) -> Result<f64> {
    if values.len() < 2 || values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::Invalid("spread needs at least two positive finite values".into()));
    }
    let upper = &values[values.len() / 2..];
    let mean = upper.iter().sum::<f64>() / upper.len() as f64;
    let (lo, hi) = upper.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    Ok((hi - lo) / mean)
}
