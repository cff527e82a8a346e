//! Last-row completion: integer points `r` with `r·c = 1` and `‖r‖² ≤ b`.
//!
//! If the first `d − 1` rows `R` have cofactor vector `c` with `gcd(c) = 1`
//! and `r₀·c = 1`, then `R` together with `r₀` is a basis of `Z^d`, so the
//! solutions form the coset `r₀ + span_Z(R)`. The span is reduced (Gauss for
//! rank two, LLL above), `r₀` is moved next to the origin, and the coset is
//! scanned Fincke–Pohst style. Outer levels use floating point bounds with
//! slack; the innermost level solves an integer quadratic inequality, so the
//! points found are exact.

use num_integer::{Integer, Roots};

use crate::error::{Error, Result};
use crate::matrix::det_i128;

/// Row vector padded to length four; unused coordinates stay zero.
pub(crate) type Row = [i64; 4];

#[inline]
pub(crate) fn dot(a: &Row, b: &Row) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

#[inline]
fn dotf(a: &Row, b: &[f64; 4]) -> f64 {
    a[0] as f64 * b[0] + a[1] as f64 * b[1] + a[2] as f64 * b[2] + a[3] as f64 * b[3]
}

#[inline]
fn axpy(y: &mut Row, q: i64, x: &Row) {
    for i in 0..4 {
        y[i] += q * x[i];
    }
}

/// `round(a / b)` for `b > 0`, halves rounded up.
#[inline]
fn div_round(a: i64, b: i64) -> i64 {
    (2 * a + b).div_euclid(2 * b)
}

/// Vector `c` with `det([rows; r]) = r·c` for every `r`.
pub(crate) fn cofactors(rows: &[Row], d: usize) -> Result<Row> {
    let mut c = [0i64; 4];
    match d {
        2 => {
            c[0] = -rows[0][1];
            c[1] = rows[0][0];
        }
        3 => {
            let (a, b) = (&rows[0], &rows[1]);
            c[0] = a[1] * b[2] - a[2] * b[1];
            c[1] = a[2] * b[0] - a[0] * b[2];
            c[2] = a[0] * b[1] - a[1] * b[0];
        }
        _ => {
            let mut sub = Vec::with_capacity((d - 1) * (d - 1));
            for (j, cj) in c.iter_mut().enumerate().take(d) {
                sub.clear();
                for row in rows.iter().take(d - 1) {
                    sub.extend((0..d).filter(|&k| k != j).map(|k| row[k] as i128));
                }
                let m = det_i128(&sub, d - 1)?;
                let signed = if (j + d - 1) % 2 == 0 { m } else { -m };
                *cj = i64::try_from(signed).map_err(|_| Error::Overflow)?;
            }
        }
    }
    Ok(c)
}

/// Some `r` with `r·c = gcd(c)`, together with `gcd(c) ≥ 0`.
fn bezout(c: &Row, d: usize) -> (i64, Row) {
    let mut g = 0i64;
    let mut x = [0i64; 4];
    for j in 0..d {
        let e = i64::extended_gcd(&g, &c[j]);
        for xi in x.iter_mut() {
            *xi *= e.x;
        }
        x[j] += e.y;
        g = e.gcd;
    }
    if g < 0 {
        g = -g;
        for xi in x.iter_mut() {
            *xi = -*xi;
        }
    }
    (g, x)
}

/// Exact line `p + t·v`, `t ∈ Z`, with `‖p + t v‖² = a t² + 2 b t + c`.
pub(crate) struct Line {
    pub p: Row,
    pub v: Row,
    a: i128,
    b: i128,
    c: i128,
}

impl Line {
    fn new(p: Row, v: Row) -> Self {
        Line {
            a: dot(&v, &v) as i128,
            b: dot(&p, &v) as i128,
            c: dot(&p, &p) as i128,
            p,
            v,
        }
    }

    /// Integer `t` range with `‖p + t v‖² ≤ budget`.
    pub fn interval(&self, budget: i64) -> Option<(i64, i64)> {
        let disc = self.b * self.b - self.a * (self.c - budget as i128);
        if disc < 0 {
            return None;
        }
        let s = Roots::sqrt(&disc);
        let lo = -Integer::div_floor(&(self.b + s), &self.a);
        let hi = Integer::div_floor(&(s - self.b), &self.a);
        (lo <= hi).then_some((lo as i64, hi as i64))
    }

    /// Number of `t` with `‖p + t v‖² ≤ budget`.
    pub fn count(&self, budget: i64) -> u64 {
        self.interval(budget).map_or(0, |(lo, hi)| (hi - lo + 1) as u64)
    }

    pub fn point(&self, t: i64) -> Row {
        let mut r = self.p;
        axpy(&mut r, t, &self.v);
        r
    }
}

/// The solution coset `r₀ + L` of `r·c = 1` in a reduced basis.
pub(crate) struct Coset {
    k: usize,
    basis: [Row; 3],
    r0: Row,
    bstar_sq: [f64; 3],
    /// `mu[j][i] = ⟨b_j, b_i*⟩ / ‖b_i*‖²` for `j > i`.
    mu: [[f64; 3]; 3],
    rho: [f64; 3],
}

impl Coset {
    /// `None` when the rows do not extend to a unimodular matrix.
    pub fn new(rows: &[Row], c: &Row, d: usize) -> Option<Self> {
        let (g, r0) = bezout(c, d);
        if g != 1 {
            return None;
        }
        let k = d - 1;
        let mut basis = [[0i64; 4]; 3];
        basis[..k].copy_from_slice(&rows[..k]);
        reduce(&mut basis[..k]);
        let mut coset = Coset {
            k,
            basis,
            r0,
            bstar_sq: [0.0; 3],
            mu: [[0.0; 3]; 3],
            rho: [0.0; 3],
        };
        let bstar = coset.gram_schmidt();
        // nearest plane: move r₀ close to the origin
        for i in (0..k).rev() {
            let q = (dotf(&coset.r0, &bstar[i]) / coset.bstar_sq[i]).round() as i64;
            if q != 0 {
                let b = coset.basis[i];
                axpy(&mut coset.r0, -q, &b);
            }
        }
        for i in 0..k {
            coset.rho[i] = dotf(&coset.r0, &bstar[i]) / coset.bstar_sq[i];
        }
        Some(coset)
    }

    fn gram_schmidt(&mut self) -> [[f64; 4]; 3] {
        let mut bstar = [[0f64; 4]; 3];
        for i in 0..self.k {
            let mut v = self.basis[i].map(|x| x as f64);
            for j in 0..i {
                let m = dotf(&self.basis[i], &bstar[j]) / self.bstar_sq[j];
                self.mu[i][j] = m;
                for (vt, bt) in v.iter_mut().zip(&bstar[j]) {
                    *vt -= m * bt;
                }
            }
            self.bstar_sq[i] = v.iter().map(|x| x * x).sum();
            bstar[i] = v;
        }
        bstar
    }

    /// Calls `f` on every line `p + t b₀` that may meet the ball
    /// `‖r‖² ≤ budget`; together they cover every coset point in the ball.
    /// Returns the number of lines visited.
    pub fn for_each_line(&self, budget: i64, f: &mut impl FnMut(&Line)) -> u64 {
        if budget < 0 {
            return 0;
        }
        let slack = 1e-6 * (1.0 + budget as f64);
        let mut coeffs = [0i64; 3];
        self.descend(self.k - 1, budget as f64 + slack, &mut coeffs, f)
    }

    fn descend(&self, level: usize, room: f64, coeffs: &mut [i64; 3], f: &mut impl FnMut(&Line)) -> u64 {
        if level == 0 {
            let mut p = self.r0;
            for j in 1..self.k {
                axpy(&mut p, coeffs[j], &self.basis[j]);
            }
            f(&Line::new(p, self.basis[0]));
            return 1;
        }
        if room < 0.0 {
            return 0;
        }
        let centre = self.rho[level] + (level + 1..self.k).map(|j| coeffs[j] as f64 * self.mu[j][level]).sum::<f64>();
        let rad = (room / self.bstar_sq[level]).sqrt() + 1e-7;
        let lo = (-centre - rad).ceil() as i64;
        let hi = (-centre + rad).floor() as i64;
        let mut lines = 0;
        for a in lo..=hi {
            let y = centre + a as f64;
            coeffs[level] = a;
            lines += self.descend(level - 1, room - y * y * self.bstar_sq[level], coeffs, f);
        }
        lines
    }
}

/// Gauss reduction for two vectors, LLL (δ = 3/4) for more.
fn reduce(basis: &mut [Row]) {
    match basis.len() {
        0 | 1 => {}
        2 => {
            let (mut a, mut b) = (basis[0], basis[1]);
            loop {
                if dot(&a, &a) > dot(&b, &b) {
                    std::mem::swap(&mut a, &mut b);
                }
                let q = div_round(dot(&a, &b), dot(&a, &a));
                if q == 0 {
                    break;
                }
                axpy(&mut b, -q, &a);
            }
            basis[0] = a;
            basis[1] = b;
        }
        _ => lll(basis),
    }
}

fn lll(basis: &mut [Row]) {
    let k = basis.len();
    let gs = |basis: &[Row]| {
        let mut bstar = vec![[0f64; 4]; k];
        let mut norms = vec![0f64; k];
        let mut mu = vec![vec![0f64; k]; k];
        for i in 0..k {
            let mut v = basis[i].map(|x| x as f64);
            for j in 0..i {
                mu[i][j] = dotf(&basis[i], &bstar[j]) / norms[j];
                for (vt, bt) in v.iter_mut().zip(&bstar[j]) {
                    *vt -= mu[i][j] * bt;
                }
            }
            norms[i] = v.iter().map(|x| x * x).sum();
            bstar[i] = v;
        }
        (norms, mu)
    };
    let mut i = 1;
    let mut guard = 0;
    while i < k && guard < 10_000 {
        guard += 1;
        for j in (0..i).rev() {
            let (_, mu) = gs(basis);
            let q = mu[i][j].round() as i64;
            if q != 0 {
                let bj = basis[j];
                axpy(&mut basis[i], -q, &bj);
            }
        }
        let (norms, mu) = gs(basis);
        if norms[i] >= (0.75 - mu[i][i - 1] * mu[i][i - 1]) * norms[i - 1] {
            i += 1;
        } else {
            basis.swap(i, i - 1);
            i = (i - 1).max(1);
        }
    }
}

/// All integer rows `r` with `det([rows; r]) = 1` and `‖r‖² ≤ budget`,
/// sorted lexicographically.
///
/// `rows` holds the first `d − 1` rows of a `d × d` matrix, `2 ≤ d ≤ 4`.
/// Prefixes whose maximal minors have a common factor admit no completion
/// and give an empty list.
pub fn solve_last_row(rows: &[Vec<i64>], budget: i64) -> Result<Vec<Vec<i64>>> {
    let d = rows.len() + 1;
    if !(2..=4).contains(&d) {
        return Err(Error::Unsupported(format!("last-row completion for {d}x{d} matrices")));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: bad.len(),
        });
    }
    let padded: Vec<Row> = rows
        .iter()
        .map(|r| {
            let mut p = [0i64; 4];
            p[..d].copy_from_slice(r);
            p
        })
        .collect();
    let c = cofactors(&padded, d)?;
    let Some(coset) = Coset::new(&padded, &c, d) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    coset.for_each_line(budget, &mut |line| {
        if let Some((lo, hi)) = line.interval(budget) {
            out.extend((lo..=hi).map(|t| line.point(t)[..d].to_vec()));
        }
    });
    out.sort();
    Ok(out)
}
