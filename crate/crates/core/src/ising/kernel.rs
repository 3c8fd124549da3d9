//! Orthonormal kernel `P_n(theta)` and the spectral weight of the chain.

use super::ChainModel;
use crate::qseries::qpoch_inf;
use num_complex::Complex64;
use std::f64::consts::PI;

/// `(-q;q)_k (-q;q)_{n-1-k} / ((q;q)_k (q;q)_{n-1-k})` for `k = 0..n`.
fn cosine_coeffs(n: usize, q: f64) -> Vec<f64> {
    // ratio table r_j = (-q;q)_j / (q;q)_j
    let mut r = vec![1.0; n.max(1)];
    let mut qj = q;
    for j in 1..n {
        r[j] = r[j - 1] * (1.0 + qj) / (1.0 - qj);
        qj *= q;
    }
    (0..n).map(|k| r[k] * r[n - 1 - k]).collect()
}

/// `P_n(theta) = sqrt(gamma_1/gamma_n) sum_k c_k cos((2k-n+1) theta)`, with `P_0 = 0`.
pub fn kernel_p(n: usize, theta: f64, model: &ChainModel) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let s = (model.gamma(1) / model.gamma(n)).sqrt();
    let c = cosine_coeffs(n, model.q);
    s * c.iter().enumerate().map(|(k, ck)| ck * (((2 * k) as f64 - n as f64 + 1.0) * theta).cos()).sum::<f64>()
}

/// `(P_n(0), P_n''(0), P_n''''(0))` from the cosine sum; odd derivatives vanish.
pub fn kernel_p_derivs(n: usize, model: &ChainModel) -> (f64, f64, f64) {
    if n == 0 {
        return (0.0, 0.0, 0.0);
    }
    let s = (model.gamma(1) / model.gamma(n)).sqrt();
    let c = cosine_coeffs(n, model.q);
    let (mut p0, mut p2, mut p4) = (0.0, 0.0, 0.0);
    for (k, ck) in c.iter().enumerate() {
        let m2 = ((2 * k) as f64 - n as f64 + 1.0).powi(2);
        p0 += ck;
        p2 -= ck * m2;
        p4 += ck * m2 * m2;
    }
    (s * p0, s * p2, s * p4)
}

/// `P_0(theta), ..., P_{n_max}(theta)` by the symmetric recurrence
/// `sqrt(g_{n-1} g_n)/2 P_{n-1} + sqrt(g_n g_{n+1})/2 P_{n+1} = cos(theta) P_n`.
pub fn kernel_p_upto(n_max: usize, theta: f64, model: &ChainModel) -> Vec<f64> {
    let mut p = vec![0.0; n_max + 1];
    if n_max == 0 {
        return p;
    }
    p[1] = 1.0;
    let c = theta.cos();
    let mut g_prev = model.gamma(0);
    let mut g = model.gamma(1);
    for n in 1..n_max {
        let g_next = model.gamma(n + 1);
        p[n + 1] = (2.0 * c * p[n] - (g_prev * g).sqrt() * p[n - 1]) / (g * g_next).sqrt();
        g_prev = g;
        g = g_next;
    }
    p
}

/// `dmu/dtheta = 2/(pi gamma_1) sin^2(theta) |(q, q e^{2i theta}; q)_inf / (-q, -q e^{2i theta}; q)_inf|^2`.
pub fn spectral_weight(theta: f64, model: &ChainModel) -> f64 {
    let q = model.q;
    let w2 = Complex64::from_polar(1.0, 2.0 * theta);
    let ratio = model.gamma_product() * qpoch_inf(q * w2, q).map(|r| r.value).unwrap_or_default()
        / qpoch_inf(-q * w2, q).map(|r| r.value).unwrap_or_default();
    2.0 / (PI * model.gamma(1)) * theta.sin().powi(2) * ratio.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::ac_density;
    use crate::orthopoly::{poly_recurrence, PolyFamily};
    use crate::quadrature::{integrate_many, QuadSettings};

    fn model() -> ChainModel {
        ChainModel::new(0.5).unwrap()
    }

    #[test]
    fn examples() {
        let m = model();
        assert_eq!(kernel_p(0, 0.4, &m), 0.0);
        for &th in &[0.0, 0.7, 2.0, PI] {
            assert!((kernel_p(1, th, &m) - 1.0).abs() < 1e-15);
        }
        let th = 0.7;
        let res = (m.gamma(3) * m.gamma(4)).sqrt() / 2.0 * kernel_p(3, th, &m)
            + (m.gamma(4) * m.gamma(5)).sqrt() / 2.0 * kernel_p(5, th, &m)
            - th.cos() * kernel_p(4, th, &m);
        assert!(res.abs() <= 1e-12);
    }

    #[test]
    fn derivative_examples() {
        let m = model();
        assert_eq!(kernel_p_derivs(1, &m), (1.0, 0.0, 0.0));
        let s = (m.gamma(1) / m.gamma(2)).sqrt();
        let v = 2.0 * (1.0 + m.q) / (1.0 - m.q);
        let (p0, p2, _) = kernel_p_derivs(2, &m);
        assert!((p0 - s * v).abs() < 1e-14);
        assert!((p2 + s * v).abs() < 1e-14);
        for n in 1..=10 {
            let h = 1e-4;
            let d1 = (kernel_p(n, h, &m) - kernel_p(n, -h, &m)) / (2.0 * h);
            assert!(d1.abs() < 1e-10);
            let (p0, p2, _) = kernel_p_derivs(n, &m);
            assert!(p0 > 0.0);
            let fd2 = (kernel_p(n, h, &m) - 2.0 * p0 + kernel_p(n, -h, &m)) / (h * h);
            assert!((fd2 - p2).abs() <= 1e-5 * p2.abs().max(1.0));
        }
    }

    #[test]
    fn recurrence_matches_cosine_sum_and_polynomials() {
        let m = model();
        let fam = PolyFamily::new(m.params);
        for &th in &[0.1, 1.3, 2.9] {
            let all = kernel_p_upto(25, th, &m);
            for n in 1..=25 {
                let direct = kernel_p(n, th, &m);
                assert!((all[n] - direct).abs() <= 1e-12 * direct.abs().max(1.0), "n={n}");
                let norm: f64 = (1..n).map(|i| m.gamma(i) * m.gamma(i + 1)).product();
                let via_poly = poly_recurrence(n as i64 - 1, Complex64::new(2.0 * th.cos(), 0.0), &fam).re / norm.sqrt();
                assert!((via_poly - direct).abs() <= 1e-12 * direct.abs().max(1.0));
            }
        }
    }

    #[test]
    fn weight_is_the_family_density() {
        let m = model();
        for &th in &[0.2, 1.0, 2.5] {
            let a = spectral_weight(th, &m);
            let b = ac_density(th, &m.params).unwrap();
            assert!((a - b).abs() <= 1e-13 * b);
        }
    }

    #[test]
    fn orthonormality() {
        let m = model();
        let nm = 12;
        let g = integrate_many(0.0, PI, nm * nm, QuadSettings::default(), |th, out| {
            let p = kernel_p_upto(nm, th, &m);
            let w = spectral_weight(th, &m);
            for i in 0..nm {
                for j in 0..nm {
                    out[i * nm + j] = w * p[i + 1] * p[j + 1];
                }
            }
        })
        .unwrap();
        for i in 0..nm {
            for j in 0..nm {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g.values[i * nm + j] - e).abs() <= 1e-8);
            }
        }
    }
}
