//! Explicit forms of `p_n^{(q,beta)}`.

use super::SpectralPoint;
use crate::error::{Error, Result};
use crate::qseries::{phi_rs, qpoch, QTriple, DEFAULT_TOL};
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn tau_alpha_q(point: &SpectralPoint, beta: f64, q: f64) -> Result<Complex64> {
    let params = QTriple::alpha_eq_q(q, beta)?;
    let p = SpectralPoint::from_z(point.z, &params)?;
    p.tau.ok_or_else(|| Error::Domain("tau undefined".into()))
}

/// `(q;q)_n/(beta;q)_n sum_k (q tau/z;q)_k (q z/tau;q)_{n-k} / ((q;q)_k (q;q)_{n-k}) z^{2k-n}`.
pub fn poly_alpha_q(n: usize, point: &SpectralPoint, beta: f64, q: f64) -> Result<Complex64> {
    let z = point.z;
    let tau = tau_alpha_q(point, beta, q)?;
    let (a, b) = (q * tau / z, q * z / tau);
    // running Pochhammer tables up to n
    let mut pa = vec![c(1.0); n + 1];
    let mut pb = vec![c(1.0); n + 1];
    let mut pq = vec![1.0; n + 1];
    for j in 1..=n {
        let qj = q.powi(j as i32 - 1);
        pa[j] = pa[j - 1] * (1.0 - a * qj);
        pb[j] = pb[j - 1] * (1.0 - b * qj);
        pq[j] = pq[j - 1] * (1.0 - q * qj);
    }
    let zi = z.inv();
    let mut sum = c(0.0);
    for k in 0..=n {
        sum += pa[k] * pb[n - k] / (pq[k] * pq[n - k]) * z.powi(k as i32) * zi.powi((n - k) as i32);
    }
    Ok(sum * pq[n] / qpoch(c(beta), q, n as i64)?)
}

/// `(q z/tau;q)_n / (z^n (beta;q)_n) 2phi1(q^-n, q tau/z; q^-n tau/z; q, tau z)`.
pub fn poly_alpha_q_hyper2phi1(n: usize, point: &SpectralPoint, beta: f64, q: f64) -> Result<Complex64> {
    let z = point.z;
    let tau = tau_alpha_q(point, beta, q)?;
    let qn = q.powi(-(n as i32));
    let s = phi_rs(&[c(qn), q * tau / z], &[qn * tau / z], q, tau * z, DEFAULT_TOL)?.value;
    Ok(qpoch(q * z / tau, q, n as i64)? / (z.powi(n as i32) * qpoch(c(beta), q, n as i64)?) * s)
}

/// `(q^2;q)_n / (q^n tau^n (beta;q)_n) 3phi2(q^-n, q tau/z, q tau z; q^2, 0; q, q)`.
///
/// The terms grow like `q^{-n^2/2}` before cancelling, so this form loses
/// digits quickly for small `q`; the explicit sum is the reference.
pub fn poly_alpha_q_hyper3phi2(n: usize, point: &SpectralPoint, beta: f64, q: f64) -> Result<Complex64> {
    Ok(hyper3phi2_scaled(n, point, beta, q)?.0)
}

/// Value together with `|prefactor| * sum |terms|`, the scale of its rounding error.
fn hyper3phi2_scaled(n: usize, point: &SpectralPoint, beta: f64, q: f64) -> Result<(Complex64, f64)> {
    let z = point.z;
    let tau = tau_alpha_q(point, beta, q)?;
    let s = phi_rs(&[c(q.powi(-(n as i32))), q * tau / z, q * tau * z], &[c(q * q), c(0.0)], q, c(q), DEFAULT_TOL)?;
    let pre = qpoch(c(q * q), q, n as i64)? / ((q * tau).powi(n as i32) * qpoch(c(beta), q, n as i64)?);
    Ok((pre * s.value, pre.norm() * s.abs_sum))
}

/// Continuous dual q-Hahn `p_n(x; a, b, c | q) = a^-n (ab, ac;q)_n 3phi2(q^-n, a e^{i theta}, a e^{-i theta}; ab, ac; q, q)`,
/// parametrized by `e^{i theta}` (any nonzero complex value).
pub fn continuous_dual_q_hahn(n: usize, eith: Complex64, a: Complex64, b: Complex64, cc: Complex64, q: f64) -> Result<Complex64> {
    let s = phi_rs(&[c(q.powi(-(n as i32))), a * eith, a / eith], &[a * b, a * cc], q, c(q), DEFAULT_TOL)?.value;
    Ok(a.powi(-(n as i32)) * qpoch(a * b, q, n as i64)? * qpoch(a * cc, q, n as i64)? * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::{poly_recurrence, PolyFamily};
    use crate::qseries::identity_residual;
    use crate::qseries::Identity;
    use proptest::prelude::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn n_zero() {
        let p = QTriple::alpha_eq_q(0.5, -0.5).unwrap();
        let pt = SpectralPoint::from_z(Complex64::new(0.4, 0.2), &p).unwrap();
        assert!((poly_alpha_q(0, &pt, -0.5, 0.5).unwrap() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn special_value() {
        let (q, z) = (0.5f64, 0.5f64);
        let beta = (q * q + z * z) / (1.0 + z * z);
        assert!((beta - 0.4).abs() < 1e-15);
        let p = QTriple::alpha_eq_q(q, beta).unwrap();
        let pt = SpectralPoint::from_z(c(z), &p).unwrap();
        let expected = qpoch(c(q * q), q, 3).unwrap() / (z.powi(3) * qpoch(c(beta), q, 3).unwrap());
        assert!(rel(poly_alpha_q(3, &pt, beta, q).unwrap(), expected) < 1e-13);
        let rec = poly_recurrence(3, pt.x(), &PolyFamily::new(p));
        assert!(rel(rec, expected) < 1e-13);
    }

    #[test]
    fn continuous_dual_q_hahn_relation() {
        let (q, beta) = (0.5, -0.3);
        let p = QTriple::alpha_eq_q(q, beta).unwrap();
        let z = Complex64::new(0.55, 0.35);
        let pt = SpectralPoint::from_z(z, &p).unwrap();
        let tau = pt.tau.unwrap();
        let h = continuous_dual_q_hahn(4, z, q * tau, q / tau, c(0.0), q).unwrap();
        let lhs = poly_alpha_q(4, &pt, beta, q).unwrap();
        assert!(rel(lhs, h / qpoch(c(beta), q, 4).unwrap()) < 1e-12);
    }

    proptest! {
        #[test]
        fn four_forms_agree(n in 0usize..14, q in 0.2f64..0.8, beta in -1.5f64..0.95, r in 0.2f64..0.95, arg in 0.05f64..3.1) {
            let p = QTriple::alpha_eq_q(q, beta).unwrap();
            let pt = SpectralPoint::from_z(Complex64::from_polar(r, arg), &p).unwrap();
            let rec = poly_recurrence(n as i64, pt.x(), &PolyFamily::new(p));
            let scale = rec.norm().max(1.0);
            let e = poly_alpha_q(n, &pt, beta, q).unwrap();
            prop_assert!((e - rec).norm() <= 1e-10 * scale);
            if let Ok(h2) = poly_alpha_q_hyper2phi1(n, &pt, beta, q) {
                prop_assert!((h2 - rec).norm() <= 1e-9 * scale);
            }
            let (h3, cond) = hyper3phi2_scaled(n, &pt, beta, q).unwrap();
            prop_assert!((h3 - rec).norm() <= 1e-10 * scale + 1e-14 * cond);
        }

        #[test]
        fn jackson_links_hypergeometric_forms(n in 0usize..12, q in 0.2f64..0.8, beta in -1.5f64..0.95, r in 0.2f64..0.95, arg in 0.05f64..3.1) {
            let p = QTriple::alpha_eq_q(q, beta).unwrap();
            let z = Complex64::from_polar(r, arg);
            let tau = SpectralPoint::from_z(z, &p).unwrap().tau.unwrap();
            let kind = Identity::JacksonTransform { n, b: q * tau / z, c: q.powi(-(n as i32)) * tau / z, z: tau * z };
            if let Ok(res) = identity_residual(kind, q, 1e-17) {
                // rounding scale of the two terminating sums
                let qn = q.powi(-(n as i32));
                let lhs = phi_rs(&[c(qn), q * tau / z], &[qn * tau / z], q, tau * z, 1e-17).unwrap();
                let pt = SpectralPoint::from_z(z, &p).unwrap();
                let (_, cond) = hyper3phi2_scaled(n, &pt, beta, q).unwrap();
                let pre = (qpoch(q * z / tau, q, n as i64).unwrap() / (z.powi(n as i32) * qpoch(c(beta), q, n as i64).unwrap())).norm();
                prop_assert!(res <= 1e-11 * lhs.value.norm().max(1.0) + 1e-14 * (lhs.abs_sum + cond / pre));
            }
        }
    }
}
