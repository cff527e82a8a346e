//! One-dimensional quadrature rules shared by the volume integrator and the
//! simplex oracle.

use crate::scalar::{real, Real};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, then Newton on P_n
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            z = 0.0;
            dp = 1.0;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n == 1 {
        w[0] = 2.0;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to `[a, b]`, in the working precision.
#[derive(Debug, Clone)]
pub struct Rule<F> {
    x: Vec<F>,
    w: Vec<F>,
}

impl<F: Real> Rule<F> {
    pub fn new(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        Rule {
            x: x.into_iter().map(real).collect(),
            w: w.into_iter().map(real).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Nodes and weights on `[a, b]`.
    pub fn on(&self, a: F, b: F) -> impl Iterator<Item = (F, F)> + '_ {
        let half = (b - a) / real(2.0);
        let mid = (a + b) / real(2.0);
        self.x.iter().zip(&self.w).map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

const GK_X: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GK_WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Gauss–Kronrod 7/15 on `[a, b]`: (Kronrod estimate, |Kronrod − Gauss|).
fn gk15<F: Real>(f: &mut impl FnMut(F) -> F, a: F, b: F) -> (F, F) {
    let half = (b - a) / real(2.0);
    let mid = (a + b) / real(2.0);
    let fc = f(mid);
    let mut k = fc * real(GK_WK[7]);
    let mut g = fc * real(GK_WG[3]);
    for j in 0..7 {
        let dx = half * real(GK_X[j]);
        let s = f(mid - dx) + f(mid + dx);
        k = k + s * real(GK_WK[j]);
        if j % 2 == 1 {
            g = g + s * real(GK_WG[j / 2]);
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive Gauss–Kronrod integration to relative tolerance `rel` (with an
/// absolute floor `abs`), bisecting the worst interval first.
pub fn adaptive<F: Real>(mut f: impl FnMut(F) -> F, a: F, b: F, rel: f64, abs: f64, max_intervals: usize) -> (F, F) {
    if b <= a {
        return (F::zero(), F::zero());
    }
    let mut parts = vec![(a, b, gk15(&mut f, a, b))];
    loop {
        let total = parts.iter().fold(F::zero(), |s, p| s + p.2 .0);
        let err = parts.iter().fold(F::zero(), |s, p| s + p.2 .1);
        if err <= (real::<F>(rel) * total.abs()).max(real(abs)) || parts.len() >= max_intervals {
            return (total, err);
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.partial_cmp(&y.1 .2 .1).unwrap())
            .unwrap();
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = (lo + hi) / real(2.0);
        let left = gk15(&mut f, lo, mid);
        let right = gk15(&mut f, mid, hi);
        parts.push((lo, mid, left));
        parts.push((mid, hi, right));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        for n in 1..=40 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
            // exact for degree 2n - 1
            let deg = 2 * n - 2;
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((got - 2.0 / (deg as f64 + 1.0)).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn rule_on_interval() {
        let r = Rule::<f64>::new(20);
        let v: f64 = r.on(0.0, 3.0).map(|(x, w)| w * x.exp()).sum();
        assert!((v - (3f64.exp() - 1.0)).abs() < 1e-12);
        let r = Rule::<f32>::new(10);
        let v: f32 = r.on(0.0, 1.0).map(|(x, w)| w * x * x).sum();
        assert!((v - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let (v, _) = adaptive(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 0.0, 1000);
        let exact = 2.0 * (1.0 / 1e-4f64.sqrt()) * (1.0 / 1e-4f64.sqrt()).atan();
        assert!(((v - exact) / exact).abs() < 1e-10);
        let (v, _) = adaptive(|x: f64| (x - 40.0).exp(), 0.0, 40.0, 1e-12, 0.0, 1000);
        assert!((v - (1.0 - (-40f64).exp())).abs() < 1e-11);
    }
}
