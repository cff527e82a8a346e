//! Counting and listing `SL(n+1, Z) ∩ B_T^τ` for `n + 1 ∈ {3, 4}`.
//!
//! The search runs depth first over the rows of `g`; the last row is solved
//! from the determinant equation by [`solve_last_row`]'s coset scan. Every
//! ball test compares integer squared norms with `⌊T²⌋`.
//!
//! Counting exploits the invariance of the ball under signed row and column
//! permutations. Only matrices whose row norms are non-decreasing are
//! visited, each weighted by the number of row orders it stands for, and
//! the first row is restricted to non-negative non-increasing entries,
//! weighted by the size of its signed-permutation orbit. Listing visits
//! every matrix without reduction and doubles as a cross-check.

mod coset;
mod radius;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

pub use coset::solve_last_row;
pub use radius::BallRadius;

use crate::error::{Error, Result};
use crate::matrix::{combinations, det_i128, IntMatrix};
use crate::rep::{RepKind, RepSpec};
use coset::{cofactors, dot, Coset, Row};

/// Default cap on visited search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;
const CHECKPOINT: u64 = 10_000_000;
const FLUSH: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Count,
    List,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    pub node_budget: u64,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Result of one ball count. `partial` is set when the node budget ran out,
/// in which case `count` is only a lower bound.
#[derive(Debug, Clone, Serialize)]
pub struct CountRecord {
    pub t: f64,
    pub radius: BallRadius,
    pub spec: RepSpec,
    pub count: u64,
    pub seconds: f64,
    pub nodes: u64,
    pub partial: bool,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub record: CountRecord,
    /// Present in [`Mode::List`], sorted by entries.
    pub matrices: Option<Vec<IntMatrix>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Norm {
    Frobenius,
    Adjoint,
    Minors(usize),
}

/// Largest `‖g‖²_F` possible inside the ball `‖τ(g)‖² ≤ budget`, `det g = 1`.
///
/// With `s_i` the squared singular values (`∏ s_i = 1`) and `x = max s_i ≥ F/d`:
/// the adjoint norm satisfies `F·Σ 1/s_i ≤ budget + 1` with
/// `Σ 1/s_i ≥ max(d, (d−1)x^{1/(d−1)})`, and `Λ^k` satisfies
/// `e_k(s) ≥ C(d−1, k−1) x^{(d−k)/(d−1)}`.
pub fn frobenius_cap(spec: &RepSpec, budget: i64) -> i64 {
    let d = spec.matrix_dim();
    let df = d as f64;
    let m = budget.max(0) as f64;
    let cap = match norm_of(spec) {
        (Norm::Frobenius, _) => return budget,
        (Norm::Adjoint, _) => {
            let a = (m + 1.0) / df;
            let b = df.powf(1.0 / df) * ((m + 1.0) / (df - 1.0)).powf((df - 1.0) / df);
            a.min(b)
        }
        (Norm::Minors(k), _) => {
            let c = binomial(d - 1, k - 1) as f64;
            df * (m / c).powf((df - 1.0) / (df - k as f64))
        }
    };
    (cap * (1.0 + 1e-9)).floor() as i64 + 1
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The norm actually searched, and whether results must be inverted
/// (the dual ball is the inverse image of the standard one).
fn norm_of(spec: &RepSpec) -> (Norm, bool) {
    let d = spec.matrix_dim();
    match spec.kind() {
        RepKind::Adjoint => (Norm::Adjoint, false),
        _ => match spec.exterior_degree().unwrap() {
            1 => (Norm::Frobenius, false),
            k if k + 1 == d => (Norm::Frobenius, true),
            k => (Norm::Minors(k), false),
        },
    }
}

fn check_supported(spec: &RepSpec) -> Result<()> {
    let d = spec.matrix_dim();
    if !(3..=4).contains(&d) {
        return Err(Error::Unsupported(format!(
            "lattice enumeration is implemented for n + 1 in {{3, 4}}, got n + 1 = {d}"
        )));
    }
    Ok(())
}

/// All integer vectors of length `d` with `1 ≤ ‖v‖² ≤ max_norm`, sorted by norm.
struct ShellTable {
    rows: Vec<Row>,
    norms: Vec<i64>,
    /// `offsets[s]` = index of the first row with norm `≥ s`.
    offsets: Vec<usize>,
}

impl ShellTable {
    fn new(d: usize, max_norm: i64) -> Self {
        let max_norm = max_norm.max(0);
        let b = (max_norm as f64).sqrt() as i64 + 1;
        let mut rows: Vec<(i64, Row)> = Vec::new();
        let mut v = [0i64; 4];
        fn rec(i: usize, d: usize, b: i64, room: i64, v: &mut Row, out: &mut Vec<(i64, Row)>, max: i64) {
            if i == d {
                let n = max - room;
                if n >= 1 {
                    out.push((n, *v));
                }
                return;
            }
            for x in -b..=b {
                if x * x <= room {
                    v[i] = x;
                    rec(i + 1, d, b, room - x * x, v, out, max);
                }
            }
            v[i] = 0;
        }
        rec(0, d, b, max_norm, &mut v, &mut rows, max_norm);
        rows.sort_unstable();
        let norms: Vec<i64> = rows.iter().map(|r| r.0).collect();
        let mut offsets = Vec::with_capacity(max_norm as usize + 2);
        let mut idx = 0;
        for s in 0..=max_norm + 1 {
            while idx < norms.len() && norms[idx] < s {
                idx += 1;
            }
            offsets.push(idx);
        }
        ShellTable {
            rows: rows.into_iter().map(|r| r.1).collect(),
            norms,
            offsets,
        }
    }

    /// Index range of rows with `lo ≤ ‖v‖² ≤ hi`.
    fn range(&self, lo: i64, hi: i64) -> std::ops::Range<usize> {
        let top = self.offsets.len() as i64 - 1;
        let lo = lo.clamp(0, top);
        let hi = (hi + 1).clamp(0, top);
        if hi <= lo {
            return 0..0;
        }
        self.offsets[lo as usize]..self.offsets[hi as usize]
    }
}

struct Shared {
    nodes: AtomicU64,
    budget: u64,
    stop: AtomicBool,
    /// Some subtree was skipped, so the result is incomplete.
    truncated: AtomicBool,
}

impl Shared {
    fn flush(&self, local: &mut u64) -> bool {
        let before = self.nodes.fetch_add(*local, Ordering::Relaxed);
        let after = before + *local;
        *local = 0;
        if before / CHECKPOINT != after / CHECKPOINT {
            log::info!("{} search nodes visited", after / CHECKPOINT * CHECKPOINT);
        }
        if after > self.budget {
            self.stop.store(true, Ordering::Relaxed);
        }
        !self.stop.load(Ordering::Relaxed)
    }
}

struct Search<'a> {
    d: usize,
    norm: Norm,
    m: i64,
    f_cap: i64,
    /// Sorted-row counting (true) or plain listing (false).
    reduced: bool,
    table: &'a ShellTable,
    shared: &'a Shared,
}

enum Sink {
    Count(u128),
    List(Vec<IntMatrix>),
}

struct Walker<'a> {
    s: &'a Search<'a>,
    local: u64,
    alive: bool,
    rows: [Row; 4],
    norms: [i64; 4],
    sink: Sink,
}

/// `d! / ∏ (multiplicities of equal entries)!` for sorted `norms`.
fn arrangements(norms: &[i64]) -> u128 {
    let mut total: u128 = (1..=norms.len() as u128).product();
    let mut run = 1u128;
    for w in norms.windows(2) {
        if w[0] == w[1] {
            run += 1;
            total /= run;
        } else {
            run = 1;
        }
    }
    total
}

/// Number of distinct signed permutations of a row.
fn orbit_size(row: &[i64]) -> u128 {
    let mut abs: Vec<i64> = row.iter().map(|x| x.abs()).collect();
    abs.sort_unstable();
    let nonzero = abs.iter().filter(|&&x| x != 0).count() as u32;
    arrangements(&abs) << nonzero
}

fn is_canonical(row: &[i64]) -> bool {
    row.iter().all(|&x| x >= 0) && row.windows(2).all(|w| w[0] >= w[1])
}

fn gcd_of_minors(rows: &[Row], k: usize, d: usize) -> Result<i128> {
    let mut g = 0i128;
    let mut sub = Vec::with_capacity(k * k);
    for cols in combinations(d, k) {
        sub.clear();
        for row in &rows[..k] {
            sub.extend(cols.iter().map(|&c| row[c] as i128));
        }
        g = g.gcd(&det_i128(&sub, k)?);
        if g == 1 {
            break;
        }
    }
    Ok(g)
}

fn minor_sum_sq(rows: &[Row], k: usize, d: usize) -> Result<i128> {
    if k == 2 {
        // Lagrange identity: Σ of squared 2×2 minors of (a, b) is ‖a‖²‖b‖² − (a·b)²
        let mut acc = 0i128;
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                let (a, b) = (&rows[i], &rows[j]);
                let ab = dot(a, b) as i128;
                acc += dot(a, a) as i128 * dot(b, b) as i128 - ab * ab;
            }
        }
        return Ok(acc);
    }
    let mut acc = 0i128;
    let mut sub = Vec::with_capacity(k * k);
    let colsets = combinations(d, k);
    for rs in combinations(rows.len(), k) {
        for cols in &colsets {
            sub.clear();
            for &r in &rs {
                sub.extend(cols.iter().map(|&c| rows[r][c] as i128));
            }
            let m = det_i128(&sub, k)?;
            acc += m * m;
        }
    }
    Ok(acc)
}

/// `‖adj g‖²_F` for a unimodular `g` given by rows.
fn adjugate_sq(rows: &[Row], d: usize) -> Result<i128> {
    if d == 3 {
        let cross = |a: &Row, b: &Row| -> i128 {
            let x = (a[1] * b[2] - a[2] * b[1]) as i128;
            let y = (a[2] * b[0] - a[0] * b[2]) as i128;
            let z = (a[0] * b[1] - a[1] * b[0]) as i128;
            x * x + y * y + z * z
        };
        return Ok(cross(&rows[0], &rows[1]) + cross(&rows[1], &rows[2]) + cross(&rows[0], &rows[2]));
    }
    minor_sum_sq(&rows[..d], d - 1, d)
}

fn to_matrix(rows: &[Row], d: usize) -> IntMatrix {
    IntMatrix::from_fn(d, |i, j| rows[i][j])
}

impl<'a> Walker<'a> {
    fn new(s: &'a Search<'a>) -> Self {
        Walker {
            s,
            local: 0,
            alive: true,
            rows: [[0; 4]; 4],
            norms: [0; 4],
            sink: if s.reduced { Sink::Count(0) } else { Sink::List(Vec::new()) },
        }
    }

    #[inline]
    fn tick(&mut self, n: u64) {
        self.local += n;
        if self.local >= FLUSH {
            self.alive = self.s.shared.flush(&mut self.local);
        }
    }

    fn finish(&mut self) {
        self.s.shared.flush(&mut self.local);
    }

    /// Rows `0..depth` are fixed with squared norms summing to `used`.
    fn descend(&mut self, depth: usize, used: i64) -> Result<()> {
        let s = self.s;
        let d = s.d;
        if !self.alive {
            return Ok(());
        }
        if depth == d - 1 {
            return self.last_row(used);
        }
        let remaining = (d - depth) as i64;
        let (lo, hi) = if s.reduced {
            (self.norms[depth - 1], (s.f_cap - used) / remaining)
        } else {
            (1, s.f_cap - used - (remaining - 1))
        };
        for idx in s.table.range(lo, hi) {
            self.tick(1);
            if !self.alive {
                break;
            }
            self.rows[depth] = s.table.rows[idx];
            self.norms[depth] = s.table.norms[idx];
            let k = depth + 1;
            if k < d - 1 && gcd_of_minors(&self.rows, k, d)? != 1 {
                continue;
            }
            if let Norm::Minors(e) = s.norm {
                if k >= e && minor_sum_sq(&self.rows[..k], e, d)? > s.m as i128 {
                    continue;
                }
            }
            self.descend(k, used + self.norms[depth])?;
        }
        Ok(())
    }

    fn last_row(&mut self, used: i64) -> Result<()> {
        let s = self.s;
        let d = s.d;
        let prefix = &self.rows[..d - 1];
        let c = cofactors(prefix, d)?;
        let lower = if s.reduced { self.norms[d - 2] } else { 1 };
        let upper = match s.norm {
            Norm::Frobenius => s.m - used,
            Norm::Minors(_) => s.f_cap - used,
            Norm::Adjoint => {
                let g_low = (dot(&c, &c) as i128).max(d as i128);
                let frob = ((s.m as i128 + 1) / g_low) as i64;
                frob.min(s.f_cap) - used
            }
        };
        if upper < lower {
            return Ok(());
        }
        let Some(coset) = Coset::new(prefix, &c, d) else {
            return Ok(());
        };
        let mut err = None;
        let lines = match (&mut self.sink, s.norm) {
            (Sink::Count(acc), Norm::Frobenius) => {
                let mut norms = [0i64; 4];
                norms[..d - 1].copy_from_slice(&self.norms[..d - 1]);
                norms[d - 1] = lower;
                let tie = arrangements(&norms[..d]);
                norms[d - 1] = lower + 1;
                let strict = arrangements(&norms[..d]);
                let mut n_up = 0u64;
                let mut n_tie = 0u64;
                let mut n_below = 0u64;
                let lines = coset.for_each_line(upper, &mut |line| {
                    n_up += line.count(upper);
                    n_tie += line.count(lower);
                    n_below += line.count(lower - 1);
                });
                *acc += strict * (n_up - n_tie) as u128 + tie * (n_tie - n_below) as u128;
                lines
            }
            (sink, norm) => {
                let rows = &mut self.rows;
                let norms = &mut self.norms;
                coset.for_each_line(upper, &mut |line| {
                    let Some((a, b)) = line.interval(upper) else { return };
                    for t in a..=b {
                        let r = line.point(t);
                        let rn = dot(&r, &r);
                        if rn < lower {
                            continue;
                        }
                        rows[d - 1] = r;
                        norms[d - 1] = rn;
                        let frob = used + rn;
                        let inside = match norm {
                            Norm::Frobenius => Ok(true),
                            Norm::Adjoint => adjugate_sq(&rows[..], d).map(|g| frob as i128 * g - 1 <= s.m as i128),
                            Norm::Minors(k) => minor_sum_sq(&rows[..d], k, d).map(|v| v <= s.m as i128),
                        };
                        match inside {
                            Ok(true) => match sink {
                                Sink::Count(acc) => *acc += arrangements(&norms[..d]),
                                Sink::List(out) => out.push(to_matrix(&rows[..], d)),
                            },
                            Ok(false) => {}
                            Err(e) => err = Some(e),
                        }
                    }
                })
            }
        };
        self.tick(lines);
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Counts (or lists) `g ∈ SL(n+1, Z)` with `‖τ(g)‖ ≤ T`.
pub fn enumerate_ball(spec: &RepSpec, radius: &BallRadius, mode: Mode, opts: &EnumOptions) -> Result<Enumeration> {
    check_supported(spec)?;
    let start = Instant::now();
    let d = spec.matrix_dim();
    let (norm, invert) = norm_of(spec);
    let m = radius.budget();
    let f_cap = frobenius_cap(spec, m);
    let reduced = mode == Mode::Count;
    // largest norm a non-final row can have
    let max_row = if reduced {
        (0..d - 1).map(|depth| (f_cap - depth as i64) / (d - depth) as i64).max().unwrap()
    } else {
        f_cap - (d as i64 - 1)
    };
    let table = ShellTable::new(d, max_row);
    let shared = Shared {
        nodes: AtomicU64::new(0),
        budget: opts.node_budget,
        stop: AtomicBool::new(false),
        truncated: AtomicBool::new(false),
    };
    let search = Search {
        d,
        norm,
        m,
        f_cap,
        reduced,
        table: &table,
        shared: &shared,
    };
    let first: Vec<usize> = if reduced {
        table.range(1, f_cap / d as i64).filter(|&i| is_canonical(&table.rows[i][..d])).collect()
    } else {
        table.range(1, max_row).collect()
    };

    let run = |idx: usize| -> Result<Sink> {
        let mut w = Walker::new(&search);
        if shared.stop.load(Ordering::Relaxed) {
            shared.truncated.store(true, Ordering::Relaxed);
            return Ok(w.sink);
        }
        w.rows[0] = table.rows[idx];
        w.norms[0] = table.norms[idx];
        w.tick(1);
        w.descend(1, table.norms[idx])?;
        if !w.alive {
            shared.truncated.store(true, Ordering::Relaxed);
        }
        w.finish();
        Ok(match w.sink {
            Sink::Count(c) => Sink::Count(c * orbit_size(&table.rows[idx][..d])),
            other => other,
        })
    };

    let (count, matrices) = if reduced {
        let total = first
            .par_iter()
            .map(|&i| match run(i)? {
                Sink::Count(c) => Ok(c),
                Sink::List(_) => unreachable!(),
            })
            .try_reduce(|| 0u128, |a, b| Ok(a + b))?;
        (u64::try_from(total).map_err(|_| Error::Overflow)?, None)
    } else {
        let parts: Vec<Vec<IntMatrix>> = first
            .par_iter()
            .map(|&i| match run(i)? {
                Sink::List(v) => Ok(v),
                Sink::Count(_) => unreachable!(),
            })
            .collect::<Result<_>>()?;
        let mut all: Vec<IntMatrix> = parts.into_iter().flatten().collect();
        if invert {
            all = all.iter().map(inverse).collect::<Result<_>>()?;
        }
        all.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        (all.len() as u64, Some(all))
    };

    let nodes = shared.nodes.load(Ordering::Relaxed);
    let partial = shared.truncated.load(Ordering::Relaxed);
    if partial {
        log::warn!("node budget {} exhausted at T = {radius}; count is partial", opts.node_budget);
    }
    Ok(Enumeration {
        record: CountRecord {
            t: radius.t(),
            radius: radius.clone(),
            spec: *spec,
            count,
            seconds: start.elapsed().as_secs_f64(),
            nodes,
            partial,
        },
        matrices,
    })
}

/// Inverse of a unimodular integer matrix.
pub fn inverse(g: &IntMatrix) -> Result<IntMatrix> {
    let det = g.det()?;
    if det != 1 {
        return Err(Error::NotUnimodular { det: det.to_string() });
    }
    let adj = g.adjugate()?;
    let mut out = IntMatrix::identity(g.dim());
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            out[(i, j)] = i64::try_from(adj[(i, j)]).map_err(|_| Error::Overflow)?;
        }
    }
    Ok(out)
}

/// Counts by exhaustive scan over all matrices with entries in
/// `[−bound, bound]`. Fails when `(2·bound + 1)^{d²}` exceeds `cap`.
pub fn naive_enumerate(spec: &RepSpec, radius: &BallRadius, bound: u32, cap: u64) -> Result<u64> {
    let d = spec.matrix_dim();
    let side = 2 * bound as u64 + 1;
    let cells = d * d;
    let total = side.checked_pow(cells as u32).filter(|&t| t <= cap);
    if total.is_none() {
        return Err(Error::NodeCap { cap });
    }
    let b = bound as i64;
    let m = radius.budget() as i128;
    // split on the first entry so the scan parallelizes
    let count = (-b..=b)
        .into_par_iter()
        .map(|first| -> Result<u64> {
            let mut g = IntMatrix::from_fn(d, |_, _| -b);
            g[(0, 0)] = first;
            let mut count = 0u64;
            loop {
                if g.det()? == 1 && crate::rep::rep_norm_sq_int(spec, &g)? <= m {
                    count += 1;
                }
                let mut i = 1;
                while i < cells && g[(i / d, i % d)] == b {
                    g[(i / d, i % d)] = -b;
                    i += 1;
                }
                if i == cells {
                    break;
                }
                g[(i / d, i % d)] += 1;
            }
            Ok(count)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(count)
}
