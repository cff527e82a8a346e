#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use slcount::{IntMatrix, Rank, RepSpec};

pub fn rank(n: usize) -> Rank {
    Rank::new(n).unwrap()
}

pub fn rep(s: &str, n: usize) -> RepSpec {
    RepSpec::parse(s, rank(n)).unwrap()
}

/// Product of `steps` random elementary row operations `r_i += c·r_j`, with
/// a random signed permutation of determinant one applied first.
pub fn random_unimodular(d: usize, steps: usize, max_mult: i64, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut g = signed_permutations(d).swap_remove(rng.gen_range(0..signed_permutation_count(d)));
    for _ in 0..steps {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let c = rng.gen_range(-max_mult..=max_mult);
        for k in 0..d {
            g[(i, k)] += c * g[(j, k)];
        }
    }
    g
}

fn signed_permutation_count(d: usize) -> usize {
    (1..=d).product::<usize>() * (1 << d) / 2
}

/// All signed permutation matrices of size `d` with determinant one.
pub fn signed_permutations(d: usize) -> Vec<IntMatrix> {
    fn perms(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for k in 0..rest.len() {
            let x = rest.remove(k);
            cur.push(x);
            perms(rest, cur, out);
            cur.pop();
            rest.insert(k, x);
        }
    }
    let mut ps = Vec::new();
    perms(&mut (0..d).collect(), &mut Vec::new(), &mut ps);
    let mut out = Vec::new();
    for p in ps {
        for signs in 0..(1u32 << d) {
            let g = IntMatrix::from_fn(d, |i, j| if p[i] == j { if signs >> i & 1 == 1 { -1 } else { 1 } } else { 0 });
            if g.det().unwrap() == 1 {
                out.push(g);
            }
        }
    }
    out
}
