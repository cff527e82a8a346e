//! Root data of type A_n, the root system of SL(n+1, R).
//!
//! Functionals on the Cartan subalgebra are stored in the simple-root basis,
//! so evaluating one on the dual basis vector `β̃_j` (defined by
//! `α_i(β̃_j) = δ_ij`) is a coordinate read. Dominant weights are stored in
//! the fundamental-weight basis and converted through the inverse Cartan
//! matrix.

use std::fmt;
use std::ops::{Add, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{int, rational_string, ExactInt};

/// Rank `n` of the root system; the group is SL(n+1, R).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rank(usize);

impl Rank {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::RankTooSmall { min: 1, got: n });
        }
        Ok(Rank(n))
    }

    /// Rank with an explicit lower bound (the exponent statements need `n >= 2`).
    pub fn at_least(n: usize, min: usize) -> Result<Self> {
        if n < min.max(1) {
            return Err(Error::RankTooSmall { min: min.max(1), got: n });
        }
        Ok(Rank(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Matrix size `n + 1`.
    #[inline]
    pub fn dim(self) -> usize {
        self.0 + 1
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dominant weight `λ = Σ q_k λ_k` in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DominantWeight {
    q: Vec<u32>,
}

impl DominantWeight {
    /// Rejects the zero weight, which labels the trivial representation.
    pub fn new(q: Vec<u32>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::RankTooSmall { min: 1, got: 0 });
        }
        if q.iter().all(|&c| c == 0) {
            return Err(Error::ZeroWeight);
        }
        Ok(DominantWeight { q })
    }

    /// Fundamental weight `λ_i`, 1-based.
    pub fn fundamental(i: usize, n: Rank) -> Result<Self> {
        if i == 0 || i > n.get() {
            return Err(Error::Invalid(format!(
                "fundamental weight index {i} outside 1..={n}"
            )));
        }
        let mut q = vec![0; n.get()];
        q[i - 1] = 1;
        Ok(DominantWeight { q })
    }

    /// `λ_i + λ_{n+1-i}`; for `i = 1` this is the adjoint highest weight.
    pub fn symmetric_pair(i: usize, n: Rank) -> Result<Self> {
        let mut w = Self::fundamental(i, n)?;
        w.q[n.get() - i] += 1;
        Ok(w)
    }

    pub fn coords(&self) -> &[u32] {
        &self.q
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    /// The weight `q_k ↦ q_{n+1-k}` (highest weight of the dual representation).
    pub fn flipped(&self) -> Self {
        let mut q = self.q.clone();
        q.reverse();
        DominantWeight { q }
    }

    pub fn scaled(&self, c: u32) -> Result<Self> {
        DominantWeight::new(self.q.iter().map(|&x| x * c).collect())
    }

    /// Coordinate sum `Σ q_k`.
    pub fn level(&self) -> u64 {
        self.q.iter().map(|&x| x as u64).sum()
    }

    fn check_rank(&self, n: Rank) -> Result<()> {
        if self.q.len() != n.get() {
            return Err(Error::WeightLength {
                expected: n.get(),
                got: self.q.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.q.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Linear functional `Σ c_i α_i` on the Cartan subalgebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Functional<I: ExactInt> {
    coords: Vec<Ratio<I>>,
}

impl<I: ExactInt> Functional<I> {
    pub fn from_coords(coords: Vec<Ratio<I>>) -> Self {
        Functional { coords }
    }

    pub fn zero(n: Rank) -> Self {
        Functional {
            coords: vec![Ratio::zero(); n.get()],
        }
    }

    /// Simple root `α_i`, 1-based.
    pub fn simple_root(i: usize, n: Rank) -> Self {
        let mut f = Self::zero(n);
        f.coords[i - 1] = Ratio::one();
        f
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    /// Value on the dual basis vector `β̃_j`, 1-based.
    #[inline]
    pub fn at(&self, j: usize) -> &Ratio<I> {
        &self.coords[j - 1]
    }

    /// Values on `β̃_1, …, β̃_n` (identical to the simple-root coordinates).
    pub fn values(&self) -> &[Ratio<I>] {
        &self.coords
    }

    pub fn scale(&self, c: &Ratio<I>) -> Self {
        Functional {
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// Value on a diagonal element `H = diag(h_1, …, h_{n+1})` with trace zero.
    ///
    /// `α_i(H) = h_i − h_{i+1}`, so `Σ c_i α_i (H) = Σ_i (c_i − c_{i−1}) h_i`.
    pub fn on_diagonal(&self, h: &[Ratio<I>]) -> Ratio<I> {
        let mut acc = Ratio::zero();
        for (i, c) in self.coords.iter().enumerate() {
            acc = acc + c * (&h[i] - &h[i + 1]);
        }
        acc
    }

    /// `"p/q"` strings of the values on the dual basis.
    pub fn value_strings(&self) -> Vec<String> {
        self.coords.iter().map(rational_string).collect()
    }
}

impl<'a, I: ExactInt> Add for &'a Functional<I> {
    type Output = Functional<I>;
    fn add(self, rhs: Self) -> Functional<I> {
        assert_eq!(self.rank(), rhs.rank(), "functional ranks differ");
        Functional {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a, I: ExactInt> Sub for &'a Functional<I> {
    type Output = Functional<I>;
    fn sub(self, rhs: Self) -> Functional<I> {
        assert_eq!(self.rank(), rhs.rank(), "functional ranks differ");
        Functional {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Cartan matrix of A_n: 2 on the diagonal, −1 next to it.
pub fn cartan_matrix(n: Rank) -> Vec<Vec<i64>> {
    let n = n.get();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

/// Numerator of the closed-form inverse Cartan entry over the common
/// denominator `n + 1`: `min(i,j) · (n + 1 − max(i,j))`, 1-based.
#[inline]
fn inverse_numerator(i: usize, j: usize, n: usize) -> i64 {
    (i.min(j) * (n + 1 - i.max(j))) as i64
}

/// Exact inverse of the Cartan matrix; entry `(i,j)` is
/// `min(i,j)(n+1−max(i,j))/(n+1)`.
pub fn cartan_inverse<I: ExactInt>(n: Rank) -> Vec<Vec<Ratio<I>>> {
    let m = n.get();
    let den: I = int((m + 1) as i64);
    (1..=m)
        .map(|i| {
            (1..=m)
                .map(|j| Ratio::new(int(inverse_numerator(i, j, m)), den.clone()))
                .collect()
        })
        .collect()
}

/// `λ(β̃_j) = Σ_k q_k (C⁻¹)_{kj}` as a functional in simple-root coordinates.
pub fn weight_to_functional<I: ExactInt>(lambda: &DominantWeight, n: Rank) -> Result<Functional<I>> {
    lambda.check_rank(n)?;
    let m = n.get();
    let den: I = int((m + 1) as i64);
    let support: Vec<(usize, I)> = lambda
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, &q)| q != 0)
        .map(|(k, &q)| (k + 1, int(q as i64)))
        .collect();
    let coords = (1..=m)
        .map(|j| {
            let mut num = I::zero();
            for (k, q) in &support {
                num = num + q.clone() * int::<I>(inverse_numerator(*k, j, m));
            }
            Ratio::new(num, den.clone())
        })
        .collect();
    Ok(Functional { coords })
}

/// `2ρ = Σ_k k(n+1−k) α_k`.
pub fn rho2<I: ExactInt>(n: Rank) -> Functional<I> {
    let m = n.get();
    Functional {
        coords: (1..=m)
            .map(|k| Ratio::from_integer(int((k * (m + 1 - k)) as i64)))
            .collect(),
    }
}

/// Highest root `β = Σ α_i`.
pub fn highest_root<I: ExactInt>(n: Rank) -> Functional<I> {
    Functional {
        coords: vec![Ratio::one(); n.get()],
    }
}

/// Index pairs `(i, j)`, `1 <= i <= j <= n`, of the positive roots
/// `α_i + … + α_j`; on `diag(h)` such a root is `h_i − h_{j+1}`.
pub fn positive_root_ranges(n: Rank) -> Vec<(usize, usize)> {
    let m = n.get();
    (1..=m).flat_map(|i| (i..=m).map(move |j| (i, j))).collect()
}

/// The `n(n+1)/2` positive roots.
pub fn positive_roots<I: ExactInt>(n: Rank) -> Vec<Functional<I>> {
    positive_root_ranges(n)
        .into_iter()
        .map(|(i, j)| {
            let mut f = Functional::zero(n);
            for k in i..=j {
                f.coords[k - 1] = Ratio::one();
            }
            f
        })
        .collect()
}
