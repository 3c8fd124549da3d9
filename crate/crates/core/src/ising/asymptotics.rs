//! Large-`t` expansion of `q_n^{(k)}(t)` obtained from Watson's lemma.
//!
//! With `x = 1 - cos(theta)` the kernel integrand behaves like
//! `sqrt(2) C^4 P_n(0) P_k(0) x^{1/2} (1 + A x + B x^2 + ...)`, `C = (q;q)_inf/(-q;q)_inf`,
//! so `q_n^{(k)}(t) ~ lead * t^{-3/2} (1 + 3A/(2t) + 15B/(4t^2))`.

use super::kernel::kernel_p_derivs;
use super::ChainModel;

const SUM_TOL: f64 = 1e-16;

/// Which `x^2` coefficient of `|(q, q e^{2i theta};q)_inf / (-q, -q e^{2i theta};q)_inf|^2 / C^4` to use in `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BForm {
    /// Coefficient of the full Taylor expansion.
    #[default]
    Series,
    /// Closed polynomial in `phi1, phi2, phi3`; it does not match the Taylor coefficient.
    Polynomial,
}

/// Sums `f(j)` for `j >= 1` until terms fall below `SUM_TOL` relative.
fn lattice_sum<F: Fn(f64) -> f64>(q: f64, f: F) -> f64 {
    let mut s = 0.0;
    let mut qj = q;
    for _ in 0..100_000 {
        let t = f(qj);
        s += t;
        if t.abs() <= SUM_TOL * s.abs() {
            break;
        }
        qj *= q;
    }
    s
}

/// Constants and kernel derivatives entering the expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCoeffs {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    /// `sum_j q^{3j} (1 + q^{2j}) / (1 - q^{2j})^4`.
    pub phi4: f64,
    /// `P_n(0)`, `P_n''(0)`, `P_n''''(0)` for `n = 0..=n_max` (index 0 unused).
    pub p0: Vec<f64>,
    pub p2: Vec<f64>,
    pub p4: Vec<f64>,
}

/// Coefficients for sites up to `n_max`.
pub fn asymptotic_coeffs(n_max: usize, model: &ChainModel) -> AsymptoticCoeffs {
    let q = model.q;
    let phi1 = lattice_sum(q, |x| 2.0 * x / (1.0 - x * x));
    let phi2 = lattice_sum(q, |x| 2.0 * x.powi(3) / (1.0 - x * x).powi(2));
    let phi3 = 2.0 / 3.0 * lattice_sum(q, |x| x.powi(3) * (1.0 + 3.0 * x * x) / (1.0 - x * x).powi(3));
    let phi4 = lattice_sum(q, |x| x.powi(3) * (1.0 + x * x) / (1.0 - x * x).powi(4));
    let (mut p0, mut p2, mut p4) = (vec![0.0], vec![0.0], vec![0.0]);
    for n in 1..=n_max {
        let (a, b, c) = kernel_p_derivs(n, model);
        p0.push(a);
        p2.push(b);
        p4.push(c);
    }
    AsymptoticCoeffs { phi1, phi2, phi3, phi4, p0, p2, p4 }
}

impl AsymptoticCoeffs {
    /// `s = 8 phi1 + 16 phi2`, the `x` coefficient of the q-Pochhammer factor.
    pub fn s(&self) -> f64 {
        8.0 * self.phi1 + 16.0 * self.phi2
    }

    fn ratio2(&self, n: usize) -> f64 {
        self.p2[n] / self.p0[n]
    }

    fn ratio4(&self, n: usize) -> f64 {
        self.p4[n] / self.p0[n]
    }

    /// `x^2` coefficient of the q-Pochhammer factor.
    pub fn w2(&self, form: BForm) -> f64 {
        let (f1, f2, f3) = (self.phi1, self.phi2, self.phi3);
        match form {
            BForm::Series => {
                let s = self.s();
                0.5 * s * s - 0.5 * s - 256.0 * self.phi4
            }
            BForm::Polynomial => {
                -4.0 / 3.0
                    * (3.0 * f1 + 54.0 * f2 + 144.0 * f3 - 24.0 * f1 * f1 - 48.0 * f2 * f2 - 96.0 * f1 * (f2 - f3) - 48.0 * f1 * f1 * f2
                        + 4.0 * f1.powi(4))
            }
        }
    }

    /// `A_{n,k} = P_n''/P_n + P_k''/P_k + 8 phi1 + 16 phi2 - 1/4`.
    pub fn a(&self, n: usize, k: usize) -> f64 {
        self.ratio2(n) + self.ratio2(k) + self.s() - 0.25
    }

    /// `B_{n,k}` with the `x^2` coefficient selected by `form`.
    pub fn b(&self, n: usize, k: usize, form: BForm) -> f64 {
        let (rn, rk) = (self.ratio2(n), self.ratio2(k));
        rn * rk + (self.s() - 1.0 / 12.0) * (rn + rk) + (self.ratio4(n) + self.ratio4(k)) / 6.0 + self.w2(form)
            - self.s() / 4.0
            - 1.0 / 32.0
    }

    /// `R_{m,n} = P_m(0) P_n''(0) - P_m''(0) P_n(0)`.
    pub fn r(&self, m: usize, n: usize) -> f64 {
        self.p0[m] * self.p2[n] - self.p2[m] * self.p0[n]
    }
}

/// Leading `t^{-3/2}` term of `q_n^{(k)}(t)`.
pub fn magnetization_leading(n: usize, k: usize, t: f64, model: &ChainModel) -> f64 {
    let c = asymptotic_coeffs(n.max(k), model);
    let (gn, gk, g1) = (model.gamma(n), model.gamma(k), model.gamma(1));
    (2.0 / std::f64::consts::PI * gn / gk).sqrt() / g1 * model.gamma_product().powi(4) * c.p0[n] * c.p0[k] * t.powf(-1.5)
}

/// Expansion truncated after `order` terms: 1 gives the leading term, 2 adds `3A/(2t)`, 3 adds `15B/(4t^2)`.
pub fn magnetization_asymptotic(n: usize, k: usize, t: f64, model: &ChainModel, order: u8) -> f64 {
    let c = asymptotic_coeffs(n.max(k), model);
    let lead = magnetization_leading(n, k, t, model);
    let mut corr = 1.0;
    if order >= 2 {
        corr += 1.5 * c.a(n, k) / t;
    }
    if order >= 3 {
        corr += 3.75 * c.b(n, k, BForm::Series) / (t * t);
    }
    lead * corr
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::kernel::kernel_p;
    use crate::ising::magnetization::{magnetization_kernel, KERNEL_TOL};
    use crate::qseries::qpoch_inf;
    use num_complex::Complex64;

    #[test]
    fn phi_constants() {
        let m = ChainModel::new(0.5f64.ln() / -2.0).unwrap();
        assert!((m.q - 0.5).abs() < 1e-15);
        let c = asymptotic_coeffs(3, &m);
        let direct: f64 = (1..=50).map(|j| 2.0 * 0.5f64.powi(j) / (1.0 - 0.25f64.powi(j))).sum();
        assert!((c.phi1 - direct).abs() < 1e-14);
        assert!(c.phi1 > 0.0 && c.phi2 > 0.0 && c.phi3 > 0.0);
    }

    #[test]
    fn symmetries() {
        let m = ChainModel::new(0.7).unwrap();
        let c = asymptotic_coeffs(6, &m);
        for n in 1..=6 {
            assert_eq!(c.r(n, n), 0.0);
            for k in 1..=6 {
                assert_eq!(c.a(n, k), c.a(k, n));
                assert_eq!(c.r(n, k), -c.r(k, n));
            }
        }
    }

    /// `|(q, q e^{2i theta};q)_inf / (-q, -q e^{2i theta};q)_inf|^2 / C^4` at `x = 1 - cos theta`.
    fn pochhammer_factor(x: f64, m: &ChainModel) -> f64 {
        let th = (1.0 - x).acos();
        let w2 = Complex64::from_polar(1.0, 2.0 * th);
        let r = qpoch_inf(m.q * w2, m.q).unwrap().value / qpoch_inf(-m.q * w2, m.q).unwrap().value;
        r.norm_sqr() / m.gamma_product().powi(2)
    }

    #[test]
    fn exact_x2_coefficient() {
        for &kappa in &[0.6f64, 0.3f64.ln() / -2.0] {
            let m = ChainModel::new(kappa).unwrap();
            let c = asymptotic_coeffs(1, &m);
            // quadratic coefficient by Richardson on (f(x) - 1 - s x)/x^2
            let g = |x: f64| (pochhammer_factor(x, &m) - 1.0 - c.s() * x) / (x * x);
            let (h, h2) = (1e-3, 5e-4);
            let est = 2.0 * g(h2) - g(h);
            let exact = c.w2(BForm::Series);
            assert!((est - exact).abs() <= 1e-4 * exact.abs(), "{est} vs {exact}");
            let third = c.w2(BForm::Polynomial);
            assert!((third - exact).abs() > 1e-2 * exact.abs());
        }
        let m = ChainModel::new(0.3f64.ln() / -2.0).unwrap();
        let c = asymptotic_coeffs(1, &m);
        assert!((c.w2(BForm::Series) - 19.986).abs() < 1e-3);
        assert!((c.w2(BForm::Polynomial) - 16.877).abs() < 1e-3);
    }

    #[test]
    fn kernel_expansion_in_x() {
        // P_n(theta(x)) = P_n(0) + P_n'' x + (P_n'' + P_n'''')/6 x^2 + O(x^3)
        let m = ChainModel::new(0.5).unwrap();
        let c = asymptotic_coeffs(5, &m);
        let x: f64 = 1e-3;
        let th = (1.0 - x).acos();
        for n in 1..=5 {
            let approx = c.p0[n] + c.p2[n] * x + (c.p2[n] + c.p4[n]) / 6.0 * x * x;
            assert!((kernel_p(n, th, &m) - approx).abs() <= 1e-6 * c.p0[n]);
        }
    }

    #[test]
    fn leading_term_and_corrections() {
        let m = ChainModel::new(0.7).unwrap();
        let c = asymptotic_coeffs(1, &m);
        let t = 200.0;
        let v = magnetization_kernel(1, 1, t, &m, KERNEL_TOL).unwrap();
        let lead = magnetization_leading(1, 1, t, &m);
        assert!((v / lead - 1.0).abs() <= 2.0 * 1.5 * c.a(1, 1).abs() / t);
        let e1 = (v - magnetization_asymptotic(1, 1, t, &m, 1)).abs();
        let e2 = (v - magnetization_asymptotic(1, 1, t, &m, 2)).abs();
        let e3 = (v - magnetization_asymptotic(1, 1, t, &m, 3)).abs();
        assert!(e2 < e1 && e3 < e2, "{e1} {e2} {e3}");
    }
}
