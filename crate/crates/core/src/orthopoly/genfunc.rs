//! Generating functions `sum_n (beta;q)_n/(alpha;q)_n p_n(v(z)) t^n` for `alpha` in `(-q, q]`.

use super::{joukowsky, PolyFamily};
use crate::error::{Error, Result};
use crate::qseries::{qpoch, PochOrder, QTriple};
use num_complex::Complex64;

const MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenfuncCheck {
    /// `|closed form - truncated series|`.
    pub residual: f64,
    /// Geometric estimate of the neglected series tail.
    pub tail_estimate: f64,
    pub closed_form: Complex64,
    pub series: Complex64,
}

/// Closed-form right-hand side.
///
/// For `alpha = q` this is `(q tau t, q t/tau; q)_inf / (z t, t/z; q)_inf`; for `|alpha| < q`
/// it is `(1 - alpha/q) / ((1 - z t)(1 - t/z)) 3phi2(q, q tau t, q t/tau; q z t, q t/z; q, alpha/q)`.
/// In both, the `tau` pair enters only through `alpha (tau + 1/tau) = beta v(z)`.
pub fn genfunc_closed_form(t: Complex64, z: Complex64, params: &QTriple) -> Result<Complex64> {
    let QTriple { q, alpha, beta } = *params;
    let bv = beta * joukowsky(z);
    let zi = z.inv();
    if t == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if params.is_alpha_eq_q() {
        // (q tau t q^j)(q t q^j / tau) pair: 1 - beta v t q^j + q^2 t^2 q^{2j}
        let mut num = Complex64::new(1.0, 0.0);
        let mut qj = 1.0;
        while (bv * t).norm() * qj + (t * t).norm() * q * q * qj * qj >= 1e-18 {
            num *= 1.0 - bv * t * qj + q * q * t * t * qj * qj;
            qj *= q;
        }
        let den = qpoch(z * t, q, PochOrder::Infinite)? * qpoch(zi * t, q, PochOrder::Infinite)?;
        return Ok(num / den);
    }
    let one = Complex64::new(1.0, 0.0);
    let (mut sum, mut term, mut qk) = (one, one, 1.0);
    let mut small = 0;
    for _ in 0..MAX_TERMS {
        let num = (alpha - bv * q * t * qk + alpha * q * q * t * t * qk * qk) / q;
        let den = (1.0 - q * z * t * qk) * (1.0 - q * zi * t * qk);
        term *= num / den;
        sum += term;
        qk *= q;
        small = if term.norm() <= 1e-17 * sum.norm() { small + 1 } else { 0 };
        if small >= 2 {
            return Ok((1.0 - alpha / q) / ((1.0 - z * t) * (1.0 - zi * t)) * sum);
        }
    }
    Err(Error::Divergence("3phi2 in the generating function did not converge".into()))
}

/// Compares the closed form with the series truncated at `n_max`.
pub fn genfunc_check(t: Complex64, z: Complex64, params: &QTriple, n_max: usize) -> Result<GenfuncCheck> {
    if !(t.norm() < z.norm() && z.norm() < 1.0) {
        return Err(Error::Domain(format!("need |t| < |z| < 1, got |t| = {}, |z| = {}", t.norm(), z.norm())));
    }
    if !params.in_genfunc_range() {
        return Err(Error::Domain(format!("alpha must lie in (-q, q], got {}", params.alpha)));
    }
    let QTriple { q, alpha, beta } = *params;
    let fam = PolyFamily::new(*params);
    let p = fam.values_upto(n_max, joukowsky(z));
    let mut series = Complex64::new(0.0, 0.0);
    let mut coef = 1.0; // (beta;q)_n / (alpha;q)_n
    let mut tn = Complex64::new(1.0, 0.0);
    let mut last = 0.0;
    for n in 0..=n_max {
        let c = coef * p[n + 1] * tn;
        series += c;
        last = c.norm();
        let qn = q.powi(n as i32);
        coef *= (1.0 - beta * qn) / (1.0 - alpha * qn);
        tn *= t;
    }
    let rho = t.norm() / z.norm();
    let closed_form = genfunc_closed_form(t, z, params)?;
    Ok(GenfuncCheck { residual: (closed_form - series).norm(), tail_estimate: last * rho / (1.0 - rho), closed_form, series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::tau_from_z;
    use crate::qseries::phi_rs;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn examples() {
        let p = QTriple::new(0.5, 0.2, 0.1).unwrap();
        let r = genfunc_check(c(0.0), c(0.6), &p, 10).unwrap();
        assert_eq!(r.residual, 0.0);
        let p = QTriple::new(0.5, 0.5, -0.5).unwrap();
        assert!(genfunc_check(c(0.2), c(0.6), &p, 40).unwrap().residual <= 1e-10);
        let p = QTriple::new(0.5, 0.2, 0.1).unwrap();
        assert!(genfunc_check(c(0.2), c(0.6), &p, 40).unwrap().residual <= 1e-10);
    }

    #[test]
    fn domain_errors() {
        let p = QTriple::new(0.5, 0.7, 0.1).unwrap();
        assert!(matches!(genfunc_check(c(0.2), c(0.6), &p, 10), Err(Error::Domain(_))));
        let p = QTriple::new(0.5, 0.2, 0.1).unwrap();
        assert!(matches!(genfunc_check(c(0.7), c(0.6), &p, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn closed_form_matches_tau_parametrization() {
        let t = Complex64::new(0.1, 0.15);
        let z = Complex64::new(0.5, -0.3);
        let q = 0.6;
        // alpha = q: product form with explicit tau
        let p = QTriple::new(q, q, -0.4).unwrap();
        let tau = tau_from_z(z, &p).unwrap().tau.unwrap();
        let inf = |a: Complex64| qpoch(a, q, PochOrder::Infinite).unwrap();
        let direct = inf(q * tau * t) * inf(q * t / tau) / (inf(z * t) * inf(t / z));
        assert!((genfunc_closed_form(t, z, &p).unwrap() - direct).norm() < 1e-13);
        // |alpha| < q: generic 3phi2
        let p = QTriple::new(q, 0.35, 0.8).unwrap();
        let tau = tau_from_z(z, &p).unwrap().tau.unwrap();
        let s = phi_rs(&[c(q), q * tau * t, q * t / tau], &[q * z * t, q * t / z], q, c(0.35 / q), 1e-17).unwrap().value;
        let direct = (1.0 - 0.35 / q) / ((1.0 - z * t) * (1.0 - t / z)) * s;
        assert!((genfunc_closed_form(t, z, &p).unwrap() - direct).norm() < 1e-13);
    }

    proptest! {
        #[test]
        fn both_branches(q in 0.2f64..0.8, frac in -0.95f64..1.0, b in -1.5f64..0.9, zr in 0.3f64..0.9, za in 0.0f64..std::f64::consts::TAU, u in 0.0f64..0.6, ta in 0.0f64..std::f64::consts::TAU) {
            let alpha = if frac > 0.99 { q } else { frac * q };
            let p = QTriple::new(q, alpha, b).unwrap();
            let z = Complex64::from_polar(zr, za);
            let t = Complex64::from_polar(u * zr, ta);
            let r = genfunc_check(t, z, &p, 120).unwrap();
            prop_assert!(r.residual <= 1e-10 + r.tail_estimate, "{:?}", r);
        }
    }
}
