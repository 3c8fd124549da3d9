//! The symmetric family `p_n^{(alpha,beta)}(x; q)` defined by
//! `p_{n+1} = x p_n - gt_{n-1} gt_n p_{n-1}` with `gt_n = (1 - alpha q^n)/(1 - beta q^n)`,
//! together with its spectral solutions, closed forms and generating functions.

pub mod alpha_q;
pub mod genfunc;
pub mod spectral;

pub use alpha_q::{continuous_dual_q_hahn, poly_alpha_q, poly_alpha_q_hyper2phi1, poly_alpha_q_hyper3phi2};
pub use genfunc::{genfunc_check, GenfuncCheck};
pub use spectral::{
    gauss_phi, gauss_phi_regularized, is_degenerate, joukowsky, poly_asymptotic, poly_spectral, psi, tau_from_z, wronskian,
    wronskian_direct, AsymptoticBranch, AsymptoticValue, Sign, SpectralPoint,
};

use crate::qseries::QTriple;
use num_complex::Complex64;

const CACHED: usize = 128;

/// `(1 - alpha q^n) / (1 - beta q^n)`.
pub fn gamma_tilde(n: usize, params: &QTriple) -> f64 {
    let qn = params.q.powi(n as i32);
    (1.0 - params.alpha * qn) / (1.0 - params.beta * qn)
}

/// Parameters plus precomputed `gt_n` for small `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFamily {
    pub params: QTriple,
    gammas: Vec<f64>,
}

impl PolyFamily {
    pub fn new(params: QTriple) -> Self {
        let gammas = (0..CACHED).map(|n| gamma_tilde(n, &params)).collect();
        Self { params, gammas }
    }

    pub fn gamma_tilde(&self, n: usize) -> f64 {
        self.gammas.get(n).copied().unwrap_or_else(|| gamma_tilde(n, &self.params))
    }

    /// Family with `(alpha, beta)` replaced by `(alpha q, beta q)`.
    pub fn shifted(&self) -> Self {
        Self::new(self.params.shifted())
    }

    /// `p_{-1}, p_0, ..., p_n` at `x`.
    pub fn values_upto(&self, n: usize, x: Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n + 2);
        out.push(Complex64::new(0.0, 0.0));
        out.push(Complex64::new(1.0, 0.0));
        for j in 0..n {
            let b = if j == 0 { 0.0 } else { self.gamma_tilde(j - 1) * self.gamma_tilde(j) };
            let next = x * out[j + 1] - b * out[j];
            out.push(next);
        }
        out
    }
}

/// Monic `p_n(x)` by forward recursion from `p_{-1} = 0`, `p_0 = 1`.
pub fn poly_recurrence(n: i64, x: Complex64, family: &PolyFamily) -> Complex64 {
    if n < 0 {
        return Complex64::new(0.0, 0.0);
    }
    let (mut prev, mut cur) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    for j in 0..n as usize {
        let b = if j == 0 { 0.0 } else { family.gamma_tilde(j - 1) * family.gamma_tilde(j) };
        let next = x * cur - b * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Second-kind polynomial `q_n = p_{n-1}` of the shifted family.
pub fn poly_second_kind(n: i64, x: Complex64, family: &PolyFamily) -> Complex64 {
    poly_recurrence(n - 1, x, &family.shifted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn gamma_examples() {
        let p = QTriple::new(0.5, 0.3, 0.3).unwrap();
        assert_eq!(gamma_tilde(4, &p), 1.0);
        let p = QTriple::new(0.5, 0.5, -0.5).unwrap();
        assert!((gamma_tilde(0, &p) - 1.0 / 3.0).abs() < 1e-16);
        let q = (-1.0f64).exp();
        let p = QTriple::new(q, q, -q).unwrap();
        assert!((gamma_tilde(0, &p) - 0.5f64.tanh()).abs() < 1e-15);
        assert!((gamma_tilde(0, &p) - 0.46211716).abs() < 1e-8);
    }

    #[test]
    fn recurrence_examples() {
        let fam = PolyFamily::new(QTriple::new(0.5, 0.5, -0.5).unwrap());
        assert_eq!(poly_recurrence(1, c(1.7), &fam), c(1.7));
        assert!((poly_recurrence(2, c(1.0), &fam) - c(0.8)).norm() < 1e-15);
        assert_eq!(poly_recurrence(5, c(0.0), &fam), c(0.0));
        assert_eq!(poly_recurrence(-1, c(3.0), &fam), c(0.0));
    }

    #[test]
    fn second_kind_examples() {
        let fam = PolyFamily::new(QTriple::new(0.5, 0.5, -0.5).unwrap());
        assert_eq!(poly_second_kind(0, c(2.0), &fam), c(0.0));
        assert_eq!(poly_second_kind(1, c(2.0), &fam), c(1.0));
        assert_eq!(poly_second_kind(3, c(2.0), &fam), poly_recurrence(2, c(2.0), &fam.shifted()));
    }

    #[test]
    fn values_upto_matches_single_evaluations() {
        let fam = PolyFamily::new(QTriple::new(0.4, -0.2, 0.7).unwrap());
        let x = Complex64::new(0.3, 1.1);
        let all = fam.values_upto(12, x);
        for n in 0..=12 {
            assert_eq!(all[n + 1], poly_recurrence(n as i64, x, &fam));
        }
    }

    proptest! {
        #[test]
        fn parity(n in 0i64..25, x in -4.0f64..4.0, y in -1.0f64..1.0, q in 0.1f64..0.9, a in -0.95f64..0.95, b in -3.0f64..0.95) {
            let fam = PolyFamily::new(QTriple::new(q, a, b).unwrap());
            let z = Complex64::new(x, y);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(poly_recurrence(n, -z, &fam), poly_recurrence(n, z, &fam) * sign);
        }

        #[test]
        fn gammas_bounded_when_beta_below_alpha(n in 0usize..60, q in 0.1f64..0.9, a in -0.95f64..0.95, d in 0.0f64..2.0) {
            let p = QTriple::new(q, a, a - d).unwrap();
            prop_assert!(gamma_tilde(n, &p).abs() <= 1.0 + 1e-15);
        }
    }
}
