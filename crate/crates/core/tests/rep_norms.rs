mod common;

use common::{random_unimodular, rep};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slcount::matrix::{combinations, SquareMatrix};
use slcount::rep::{adjoint_matrix, adjoint_matrix_int, norm_on_chamber, rep_norm, rep_norm_int, rep_norm_sq_int, rep_weights};
use slcount::{Error, IntMatrix, RepKind};

fn shear() -> IntMatrix {
    "1 1 0;0 1 0;0 0 1".parse().unwrap()
}

#[test]
fn identity_has_norm_sqrt_dim() {
    for (s, n, dim) in [("standard", 2, 3), ("dual", 2, 3), ("adjoint", 2, 8), ("ext:2", 3, 6), ("adjoint", 3, 15)] {
        let sp = rep(s, n);
        assert_eq!(sp.dim(), dim);
        let g = IntMatrix::identity(n + 1);
        assert_eq!(rep_norm_sq_int(&sp, &g).unwrap(), dim as i128);
        assert!((rep_norm_int(&sp, &g).unwrap() - (dim as f64).sqrt()).abs() < 1e-15);
    }
}

#[test]
fn shear_norms() {
    assert_eq!(rep_norm_sq_int(&rep("standard", 2), &shear()).unwrap(), 4);
    assert_eq!(rep_norm_sq_int(&rep("dual", 2), &shear()).unwrap(), 4);
    assert_eq!(rep_norm_sq_int(&rep("adjoint", 2), &shear()).unwrap(), 15);
}

#[test]
fn rejects_non_unimodular() {
    let g: IntMatrix = "2 0 0;0 1 0;0 0 1".parse().unwrap();
    assert!(matches!(rep_norm_sq_int(&rep("standard", 2), &g), Err(Error::NotUnimodular { .. })));
    let g: IntMatrix = "1 0;0 1".parse().unwrap();
    assert!(rep_norm_sq_int(&rep("standard", 2), &g).is_err());
}

/// The closed adjoint form against the explicit `Ad(g)` matrix on 1000 random
/// unimodular matrices of each size.
#[test]
fn adjoint_closed_form_matches_explicit_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2usize, 3] {
        let sp = rep("adjoint", n);
        for _ in 0..1000 {
            let g = random_unimodular(n + 1, 10, 3, &mut rng);
            assert_eq!(g.det().unwrap(), 1);
            let closed = rep_norm_sq_int(&sp, &g).unwrap() as f64;
            let ad = adjoint_matrix_int::<f64>(&g).unwrap();
            assert_eq!(ad.dim(), (n + 1) * (n + 1) - 1);
            let explicit = ad.frobenius_sq_real();
            assert!(((closed - explicit) / closed).abs() < 1e-12, "{g}: {closed} vs {explicit}");
            // the fully floating-point model, with a rounded inverse
            let float = adjoint_matrix::<f64>(&g.to_real()).unwrap().frobenius_sq_real();
            assert!(((closed - float) / closed).abs() < 1e-9);
        }
    }
}

#[test]
fn adjoint_matrix_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let a = random_unimodular(3, 6, 2, &mut rng).to_real::<f64>();
        let b = random_unimodular(3, 6, 2, &mut rng).to_real::<f64>();
        let lhs = adjoint_matrix(&a.matmul(&b)).unwrap();
        let rhs = adjoint_matrix(&a).unwrap().matmul(&adjoint_matrix(&b).unwrap());
        let scale = lhs.frobenius_sq_real().sqrt();
        for (x, y) in lhs.as_slice().iter().zip(rhs.as_slice()) {
            assert!((x - y).abs() < 1e-10 * scale);
        }
    }
}

/// Exterior powers by brute-force minors, the integer path and the real path.
#[test]
fn exterior_norms_three_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let g = random_unimodular(4, 8, 2, &mut rng);
        for k in 1..=3usize {
            let sp = rep(&format!("ext:{k}"), 3);
            let mut brute = 0i128;
            for rows in combinations(4, k) {
                for cols in combinations(4, k) {
                    let sub = IntMatrix::from_fn(k, |i, j| g[(rows[i], cols[j])]);
                    let d = sub.det().unwrap();
                    brute += d * d;
                }
            }
            assert_eq!(rep_norm_sq_int(&sp, &g).unwrap(), brute);
            let real = rep_norm::<f64>(&sp, &g.to_real()).unwrap();
            assert!((real * real - brute as f64).abs() < 1e-9 * brute as f64);
        }
        // Λ³ of a 4×4 unimodular matrix is the dual
        assert_eq!(
            rep_norm_sq_int(&rep("ext:3", 3), &g).unwrap(),
            rep_norm_sq_int(&rep("dual", 3), &g).unwrap()
        );
    }
}

#[test]
fn real_and_integer_paths_agree_in_single_precision() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let g = random_unimodular(3, 4, 1, &mut rng);
        for s in ["standard", "dual", "adjoint"] {
            let sp = rep(s, 2);
            let exact = rep_norm_int(&sp, &g).unwrap();
            let single = rep_norm::<f32>(&sp, &g.to_real()).unwrap() as f64;
            assert!(((single - exact) / exact).abs() < 1e-4, "{s} {g}");
        }
    }
}

#[test]
fn weight_multisets() {
    let w = rep_weights(&rep("adjoint", 2));
    assert_eq!(w.total_multiplicity(), 8);
    assert_eq!(w.entries().iter().filter(|(v, _)| v.iter().all(|&x| x == 0)).map(|e| e.1).sum::<u64>(), 2);
    assert_eq!(w.entries().iter().filter(|(v, _)| v.iter().any(|&x| x != 0)).count(), 6);
    assert_eq!(rep_weights(&rep("standard", 4)).total_multiplicity(), 5);
    assert_eq!(rep_weights(&rep("ext:2", 4)).total_multiplicity(), 10);
    assert_eq!(rep_weights(&rep("adjoint", 4)).total_multiplicity(), 24);
}

/// `‖τ(exp H)‖` from the weights equals the matrix norm of `exp(diag H)`.
#[test]
fn chamber_norm_matches_matrix_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (s, n) in [("standard", 2), ("dual", 2), ("adjoint", 2), ("ext:2", 3), ("adjoint", 3), ("ext:3", 4)] {
        let sp = rep(s, n);
        for _ in 0..50 {
            let mut h: Vec<f64> = (0..=n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            h.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let mean = h.iter().sum::<f64>() / h.len() as f64;
            h.iter_mut().for_each(|x| *x -= mean);
            let a = norm_on_chamber(&sp, &h).unwrap();
            let b = rep_norm(&sp, &SquareMatrix::exp_diag(&h)).unwrap();
            assert!(((a - b) / b).abs() < 1e-10, "{s}");
        }
    }
    // off the chamber
    assert!(norm_on_chamber(&rep("standard", 2), &[-1.0, 0.0, 1.0]).is_err());
}

#[test]
fn adjoint_ray() {
    let sp = rep("adjoint", 2);
    for t in [0.0f64, 0.3, 1.0, 2.5] {
        let v = norm_on_chamber(&sp, &[t, 0.0, -t]).unwrap();
        let want = (4.0 * t).exp() + 2.0 * (2.0 * t).exp() + 2.0 + 2.0 * (-2.0 * t).exp() + (-4.0 * t).exp();
        assert!((v * v - want).abs() < 1e-10 * want);
    }
}

#[test]
fn parse_specs() {
    let s = rep("ext:2", 3);
    assert_eq!(s.kind(), RepKind::Ext(2));
    assert_eq!(s.to_string(), "ext:2");
    assert!(slcount::RepSpec::parse("ext:4", common::rank(3)).is_err());
    assert!(slcount::RepSpec::parse("spin", common::rank(3)).is_err());
    assert_eq!(rep("adjoint", 5).highest_weight().coords(), &[1, 0, 0, 0, 1]);
    assert_eq!(rep("dual", 3).highest_weight().coords(), &[0, 0, 1]);
}
