//! Matrix models of the standard, dual, exterior-power and adjoint
//! representations of SL(n+1, R): Euclidean norms `‖τ(g)‖` and the weight
//! multisets that evaluate `‖τ(exp H)‖` on the Cartan subgroup.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::cartan::{DominantWeight, Rank};
use crate::error::{Error, Result};
use crate::matrix::{combinations, IntMatrix, SquareMatrix};
use crate::scalar::{real, Real};

/// Tolerance on `det g − 1` for real input.
pub const DET_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    Standard,
    Dual,
    /// `Λ^k` of the standard representation, `1 ≤ k ≤ n`.
    Ext(usize),
    Adjoint,
}

/// A supported irreducible representation of SL(n+1, R).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RepSpec {
    kind: RepKind,
    n: Rank,
}

impl RepSpec {
    pub fn new(kind: RepKind, n: Rank) -> Result<Self> {
        if let RepKind::Ext(k) = kind {
            if k == 0 || k > n.get() {
                return Err(Error::InvalidRep(format!("ext:{k} needs 1 <= k <= {}", n.get())));
            }
        }
        Ok(RepSpec { kind, n })
    }

    pub fn standard(n: Rank) -> Self {
        RepSpec { kind: RepKind::Standard, n }
    }

    pub fn adjoint(n: Rank) -> Self {
        RepSpec { kind: RepKind::Adjoint, n }
    }

    /// Parses `standard`, `dual`, `ext:K` or `adjoint`.
    pub fn parse(s: &str, n: Rank) -> Result<Self> {
        Self::new(s.parse()?, n)
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn rank(&self) -> Rank {
        self.n
    }

    /// Size `n + 1` of the matrices acted on.
    pub fn matrix_dim(&self) -> usize {
        self.n.dim()
    }

    /// `k` such that the representation is `Λ^k`, if it is an exterior power
    /// (standard is `k = 1`, dual is `k = n`).
    pub fn exterior_degree(&self) -> Option<usize> {
        match self.kind {
            RepKind::Standard => Some(1),
            RepKind::Dual => Some(self.n.get()),
            RepKind::Ext(k) => Some(k),
            RepKind::Adjoint => None,
        }
    }

    /// `dim τ`.
    pub fn dim(&self) -> usize {
        let d = self.matrix_dim();
        match self.exterior_degree() {
            Some(k) => binomial(d, k),
            None => d * d - 1,
        }
    }

    pub fn highest_weight(&self) -> DominantWeight {
        let w = match self.kind {
            RepKind::Adjoint => DominantWeight::symmetric_pair(1, self.n),
            _ => DominantWeight::fundamental(self.exterior_degree().unwrap(), self.n),
        };
        w.expect("indices of a valid spec are in range")
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepKind::Standard => f.write_str("standard"),
            RepKind::Dual => f.write_str("dual"),
            RepKind::Ext(k) => write!(f, "ext:{k}"),
            RepKind::Adjoint => f.write_str("adjoint"),
        }
    }
}

impl FromStr for RepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "standard" => Ok(RepKind::Standard),
            "dual" => Ok(RepKind::Dual),
            "adjoint" => Ok(RepKind::Adjoint),
            _ => match s.strip_prefix("ext:") {
                Some(k) => k
                    .parse::<usize>()
                    .map(RepKind::Ext)
                    .map_err(|_| Error::InvalidRep(format!("bad exterior degree in {s:?}"))),
                None => Err(Error::InvalidRep(format!(
                    "unknown representation {s:?} (expected standard, dual, ext:K or adjoint)"
                ))),
            },
        }
    }
}

impl fmt::Display for RepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

impl Serialize for RepSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn check_dim(spec: &RepSpec, d: usize) -> Result<()> {
    if d != spec.matrix_dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.matrix_dim(),
            got: d,
        });
    }
    Ok(())
}

/// Exact `‖τ(g)‖²` for an integer matrix with determinant one.
pub fn rep_norm_sq_int(spec: &RepSpec, g: &IntMatrix) -> Result<i128> {
    check_dim(spec, g.dim())?;
    let det = g.det()?;
    if det != 1 {
        return Err(Error::NotUnimodular { det: det.to_string() });
    }
    norm_sq_unchecked(spec, g)
}

/// `‖τ(g)‖²` without the determinant check; callers guarantee `det g = 1`.
pub(crate) fn norm_sq_unchecked(spec: &RepSpec, g: &IntMatrix) -> Result<i128> {
    let d = g.dim();
    match spec.kind {
        RepKind::Standard => Ok(g.frobenius_sq()),
        RepKind::Dual => adjugate_sq(g),
        RepKind::Ext(k) if k == 1 => Ok(g.frobenius_sq()),
        RepKind::Ext(k) if k + 1 == d => adjugate_sq(g),
        RepKind::Ext(k) => g.minor_sum_sq(k),
        RepKind::Adjoint => g
            .frobenius_sq()
            .checked_mul(adjugate_sq(g)?)
            .map(|p| p - 1)
            .ok_or(Error::Overflow),
    }
}

fn adjugate_sq(g: &IntMatrix) -> Result<i128> {
    g.adjugate()?
        .as_slice()
        .iter()
        .try_fold(0i128, |acc, &x| x.checked_mul(x).and_then(|s| acc.checked_add(s)))
        .ok_or(Error::Overflow)
}

/// `‖τ(g)‖` for an integer matrix; the square root is the only inexact step.
pub fn rep_norm_int(spec: &RepSpec, g: &IntMatrix) -> Result<f64> {
    Ok((rep_norm_sq_int(spec, g)? as f64).sqrt())
}

/// `‖τ(g)‖` for a real matrix with `|det g − 1| ≤ 1e-9`.
pub fn rep_norm<F: Real>(spec: &RepSpec, g: &SquareMatrix<F>) -> Result<F> {
    check_dim(spec, g.dim())?;
    let det = g.det_real();
    if (det - F::one()).abs() > real(DET_TOLERANCE) {
        return Err(Error::NotUnimodular { det: det.to_string() });
    }
    let d = g.dim();
    let sq = match spec.kind {
        RepKind::Standard => g.frobenius_sq_real(),
        RepKind::Dual => g.inverse()?.frobenius_sq_real(),
        RepKind::Ext(k) if k == 1 => g.frobenius_sq_real(),
        RepKind::Ext(k) if k + 1 == d => g.inverse()?.frobenius_sq_real(),
        RepKind::Ext(k) => g.minor_sum_sq_real(k),
        RepKind::Adjoint => g.frobenius_sq_real() * g.inverse()?.frobenius_sq_real() - F::one(),
    };
    Ok(sq.sqrt())
}

/// The matrix of `Ad(g)` on `sl(d)` in a basis orthonormal for
/// `⟨X, Y⟩ = tr(XᵀY)`: the elementary matrices `E_ij`, `i ≠ j`, followed by
/// the normalized traceless diagonals `(e_1 + … + e_k − k e_{k+1}) / sqrt(k(k+1))`.
///
/// Its Frobenius norm equals the adjoint [`rep_norm`]; this explicit model
/// serves as a reference.
pub fn adjoint_matrix<F: Real>(g: &SquareMatrix<F>) -> Result<SquareMatrix<F>> {
    let ginv = g.inverse()?;
    Ok(ad_with_inverse(g, &ginv))
}

/// [`adjoint_matrix`] for an integer unimodular `g`, using the exact inverse
/// `adj g` so that only the final products are rounded.
pub fn adjoint_matrix_int<F: Real>(g: &IntMatrix) -> Result<SquareMatrix<F>> {
    let det = g.det()?;
    if det != 1 {
        return Err(Error::NotUnimodular { det: det.to_string() });
    }
    let ginv = g.adjugate()?.map(|&x| real::<F>(x as f64));
    Ok(ad_with_inverse(&g.to_real(), &ginv))
}

fn ad_with_inverse<F: Real>(g: &SquareMatrix<F>, ginv: &SquareMatrix<F>) -> SquareMatrix<F> {
    let d = g.dim();
    let mut basis: Vec<SquareMatrix<F>> = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in 0..d {
            if i != j {
                basis.push(SquareMatrix::from_fn(d, |r, c| {
                    if (r, c) == (i, j) {
                        F::one()
                    } else {
                        F::zero()
                    }
                }));
            }
        }
    }
    for k in 1..d {
        let scale = real::<F>((k * (k + 1)) as f64).sqrt().recip();
        basis.push(SquareMatrix::from_fn(d, |r, c| {
            if r != c {
                F::zero()
            } else if r < k {
                scale
            } else if r == k {
                -real::<F>(k as f64) * scale
            } else {
                F::zero()
            }
        }));
    }
    let images: Vec<SquareMatrix<F>> = basis.iter().map(|b| g.matmul(b).matmul(ginv)).collect();
    let inner = |x: &SquareMatrix<F>, y: &SquareMatrix<F>| {
        x.as_slice()
            .iter()
            .zip(y.as_slice())
            .fold(F::zero(), |acc, (&a, &b)| acc + a * b)
    };
    SquareMatrix::from_fn(basis.len(), |a, b| inner(&basis[a], &images[b]))
}

/// Weights of a representation, as integer vectors acting on the diagonal
/// `(h_1, …, h_{n+1})` by `H ↦ Σ w_i h_i`.
///
/// The standard weights are stored as the unit vectors `e_i`; on the trace-zero
/// hyperplane they agree with `e_i − (1/(n+1))Σe`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMultiset {
    entries: Vec<(Vec<i64>, u64)>,
}

impl WeightMultiset {
    pub fn entries(&self) -> &[(Vec<i64>, u64)] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// `Σ mult(μ) e^{2μ(H)}` for a diagonal `h`.
    pub fn exp_sum<F: Real>(&self, h: &[F]) -> F {
        let two = real::<F>(2.0);
        self.entries.iter().fold(F::zero(), |acc, (w, m)| {
            let mu = w
                .iter()
                .zip(h)
                .fold(F::zero(), |s, (&wi, &hi)| s + real::<F>(wi as f64) * hi);
            acc + real::<F>(*m as f64) * (two * mu).exp()
        })
    }
}

pub fn rep_weights(spec: &RepSpec) -> WeightMultiset {
    let d = spec.matrix_dim();
    let unit = |idx: &[usize], sign: i64| {
        let mut w = vec![0i64; d];
        for &i in idx {
            w[i] += sign;
        }
        w
    };
    let entries = match spec.kind {
        RepKind::Dual => (0..d).map(|i| (unit(&[i], -1), 1)).collect(),
        RepKind::Adjoint => {
            let mut e: Vec<(Vec<i64>, u64)> = Vec::with_capacity(d * d - d + 1);
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        let mut w = unit(&[i], 1);
                        w[j] = -1;
                        e.push((w, 1));
                    }
                }
            }
            e.push((vec![0; d], spec.n.get() as u64));
            e
        }
        _ => {
            let k = spec.exterior_degree().unwrap();
            combinations(d, k).iter().map(|c| (unit(c, 1), 1)).collect()
        }
    };
    WeightMultiset { entries }
}

/// Checks `h_1 ≥ … ≥ h_{n+1}` and `Σ h_i = 0` up to rounding.
pub fn check_chamber<F: Real>(h: &[F]) -> Result<()> {
    let scale = h.iter().fold(F::one(), |m, x| m.max(x.abs()));
    let tol = real::<F>(1e-9) * scale;
    let sum = h.iter().fold(F::zero(), |s, &x| s + x);
    if sum.abs() > tol || h.windows(2).any(|w| w[0] < w[1] - tol) {
        return Err(Error::ChamberViolation);
    }
    Ok(())
}

/// `‖τ(exp H)‖²` for `H` in the closed positive chamber.
pub fn norm_sq_on_chamber<F: Real>(spec: &RepSpec, h: &[F]) -> Result<F> {
    check_dim(spec, h.len())?;
    check_chamber(h)?;
    Ok(rep_weights(spec).exp_sum(h))
}

pub fn norm_on_chamber<F: Real>(spec: &RepSpec, h: &[F]) -> Result<F> {
    norm_sq_on_chamber(spec, h).map(|x| x.sqrt())
}
