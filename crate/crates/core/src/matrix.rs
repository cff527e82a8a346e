//! Small dense square matrices: exact integer determinants and minors
//! (fraction-free elimination in `i128`) and floating point LU helpers.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

/// Integer matrix used by the lattice side.
pub type IntMatrix = SquareMatrix<i64>;

impl<T: Clone> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Invalid("matrix rows must all have the matrix dimension".into()));
        }
        Ok(SquareMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        SquareMatrix { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.dim)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.dim + j]
    }
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| (i == j) as i64)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let d = self.dim;
        Self::from_fn(d, |i, j| (0..d).map(|k| self[(i, k)] * rhs[(k, j)]).sum())
    }

    pub fn to_real<F: Real>(&self) -> SquareMatrix<F> {
        self.map(|&x| F::from_i64(x).expect("integer entry representable"))
    }

    /// Sum of squared entries.
    pub fn frobenius_sq(&self) -> i128 {
        self.data.iter().map(|&x| (x as i128) * (x as i128)).sum()
    }

    pub fn det(&self) -> Result<i128> {
        let entries: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        det_i128(&entries, self.dim)
    }

    /// Adjugate `adj(g)`, so that `g · adj(g) = det(g) · I`.
    pub fn adjugate(&self) -> Result<SquareMatrix<i128>> {
        let d = self.dim;
        if d == 1 {
            return Ok(SquareMatrix { dim: 1, data: vec![1] });
        }
        let mut out = vec![0i128; d * d];
        let mut sub = Vec::with_capacity((d - 1) * (d - 1));
        for i in 0..d {
            for j in 0..d {
                sub.clear();
                for r in (0..d).filter(|&r| r != j) {
                    for c in (0..d).filter(|&c| c != i) {
                        sub.push(self[(r, c)] as i128);
                    }
                }
                let m = det_i128(&sub, d - 1)?;
                // adj(g)_{ij} = (−1)^{i+j} M_{ji}
                out[i * d + j] = if (i + j) % 2 == 0 { m } else { -m };
            }
        }
        Ok(SquareMatrix { dim: d, data: out })
    }

    /// `Σ (k×k minors)²` over all row and column subsets of size `k`.
    pub fn minor_sum_sq(&self, k: usize) -> Result<i128> {
        let d = self.dim;
        if k == 0 || k > d {
            return Err(Error::Invalid(format!("minor size {k} outside 1..={d}")));
        }
        let subsets = combinations(d, k);
        let mut sub = Vec::with_capacity(k * k);
        let mut acc: i128 = 0;
        for rows in &subsets {
            for cols in &subsets {
                sub.clear();
                for &r in rows {
                    for &c in cols {
                        sub.push(self[(r, c)] as i128);
                    }
                }
                let m = det_i128(&sub, k)?;
                let sq = m.checked_mul(m).ok_or(Error::Overflow)?;
                acc = acc.checked_add(sq).ok_or(Error::Overflow)?;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for IntMatrix {
    /// Rows as space separated entries, joined by `;`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for IntMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<Vec<i64>> = s
            .split(';')
            .map(|row| {
                row.split_whitespace()
                    .map(|x| x.parse::<i64>().map_err(|e| Error::Invalid(format!("{x:?}: {e}"))))
                    .collect()
            })
            .collect::<Result<_>>()?;
        SquareMatrix::from_rows(rows)
    }
}

/// All `k`-subsets of `0..d` in lexicographic order.
pub fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Bareiss fraction-free determinant of a row-major `n×n` integer matrix.
pub fn det_i128(a: &[i128], n: usize) -> Result<i128> {
    match n {
        0 => return Ok(1),
        1 => return Ok(a[0]),
        2 => {
            let p = a[0].checked_mul(a[3]).ok_or(Error::Overflow)?;
            let q = a[1].checked_mul(a[2]).ok_or(Error::Overflow)?;
            return p.checked_sub(q).ok_or(Error::Overflow);
        }
        _ => {}
    }
    let mut m = a.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k * n + k] == 0 {
            match (k + 1..n).find(|&r| m[r * n + k] != 0) {
                Some(r) => {
                    for c in 0..n {
                        m.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        let pivot = m[k * n + k];
        for i in k + 1..n {
            for j in k + 1..n {
                let x = m[i * n + j]
                    .checked_mul(pivot)
                    .and_then(|p| m[i * n + k].checked_mul(m[k * n + j]).and_then(|q| p.checked_sub(q)))
                    .ok_or(Error::Overflow)?;
                m[i * n + j] = x / prev;
            }
        }
        prev = pivot;
    }
    Ok(sign * m[n * n - 1])
}

impl<F: Real> SquareMatrix<F> {
    pub fn identity_real(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { F::one() } else { F::zero() })
    }

    /// `exp(diag(h))`.
    pub fn exp_diag(h: &[F]) -> Self {
        Self::from_fn(h.len(), |i, j| if i == j { h[i].exp() } else { F::zero() })
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let d = self.dim;
        Self::from_fn(d, |i, j| (0..d).fold(F::zero(), |acc, k| acc + self[(i, k)] * rhs[(k, j)]))
    }

    pub fn frobenius_sq_real(&self) -> F {
        self.data.iter().fold(F::zero(), |acc, &x| acc + x * x)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det_real(&self) -> F {
        det_real(self.data.clone(), self.dim)
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut inv = Self::identity_real(d).data;
        for col in 0..d {
            let piv = (col..d)
                .max_by(|&x, &y| a[x * d + col].abs().partial_cmp(&a[y * d + col].abs()).unwrap())
                .unwrap();
            if a[piv * d + col] == F::zero() {
                return Err(Error::Invalid("singular matrix".into()));
            }
            for c in 0..d {
                a.swap(col * d + c, piv * d + c);
                inv.swap(col * d + c, piv * d + c);
            }
            let p = a[col * d + col];
            for c in 0..d {
                a[col * d + c] = a[col * d + c] / p;
                inv[col * d + c] = inv[col * d + c] / p;
            }
            for r in (0..d).filter(|&r| r != col) {
                let f = a[r * d + col];
                if f != F::zero() {
                    for c in 0..d {
                        a[r * d + c] = a[r * d + c] - f * a[col * d + c];
                        inv[r * d + c] = inv[r * d + c] - f * inv[col * d + c];
                    }
                }
            }
        }
        Ok(SquareMatrix { dim: d, data: inv })
    }

    /// `Σ (k×k minors)²`.
    pub fn minor_sum_sq_real(&self, k: usize) -> F {
        let subsets = combinations(self.dim, k);
        let mut acc = F::zero();
        for rows in &subsets {
            for cols in &subsets {
                let sub: Vec<F> = rows
                    .iter()
                    .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
                    .map(|rc| self[rc])
                    .collect();
                let m = det_real(sub, k);
                acc = acc + m * m;
            }
        }
        acc
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        (self.det_real() - F::one()).abs() <= real(tol)
    }
}

fn det_real<F: Real>(mut a: Vec<F>, n: usize) -> F {
    let mut det = F::one();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x * n + col].abs().partial_cmp(&a[y * n + col].abs()).unwrap())
            .unwrap();
        if a[piv * n + col] == F::zero() {
            return F::zero();
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det = det * p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            for c in col..n {
                a[r * n + c] = a[r * n + c] - f * a[col * n + c];
            }
        }
    }
    det
}
