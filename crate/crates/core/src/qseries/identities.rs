//! Classical summation and transformation formulas as residual checks.
//!
//! The series side always goes through [`phi_rs`]; the other side is built
//! from q-Pochhammer products or an explicit term-by-term sum so that the two
//! evaluations share no code beyond `qpoch`.

use super::{phi_rs, qpoch, PochOrder};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Identity to check, carrying its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Identity {
    /// `1phi0(a; -; q, z) = (az; q)_inf / (z; q)_inf`, `|z| < 1`.
    QBinomial { a: Complex64, z: Complex64 },
    /// `2phi1(q^-n, a; c; q, q) = (c/a; q)_n / (c; q)_n a^n`.
    QChuVandermonde { n: usize, a: Complex64, c: Complex64 },
    /// `2phi1(a, b; c; q, c/(ab)) = (c/a, c/b; q)_inf / (c, c/(ab); q)_inf`, `|c/(ab)| < 1`.
    QGaussSum { a: Complex64, b: Complex64, c: Complex64 },
    /// `2phi1(q^-n, b; c; q, z) = (c/b; q)_n / (c; q)_n
    ///   3phi2(q^-n, b, q^-n b z / c; q^{1-n} b / c, 0; q, q)`.
    JacksonTransform { n: usize, b: Complex64, c: Complex64, z: Complex64 },
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::QBinomial { .. } => "q_binomial",
            Identity::QChuVandermonde { .. } => "q_chu_vandermonde",
            Identity::QGaussSum { .. } => "q_gauss_sum",
            Identity::JacksonTransform { .. } => "jackson_transform",
        }
    }
}

fn inf(a: Complex64, q: f64) -> Result<Complex64> {
    qpoch(a, q, PochOrder::Infinite)
}

/// Explicit terminating sum of `3phi2(q^-n, a2, a3; b1, 0; q, q)` from products.
fn explicit_3phi2_terminating(n: usize, a2: Complex64, a3: Complex64, b1: Complex64, q: f64) -> Result<Complex64> {
    let qn = Complex64::new(q.powi(-(n as i32)), 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=n as i64 {
        let den = qpoch(b1, q, k)? * qpoch(Complex64::new(q, 0.0), q, k)?;
        if den.norm() == 0.0 {
            return Err(Error::Pole(format!("3phi2 denominator vanishes at k = {k}")));
        }
        let num = qpoch(qn, q, k)? * qpoch(a2, q, k)? * qpoch(a3, q, k)?;
        sum += num / den * q.powi(k as i32);
    }
    Ok(sum)
}

/// `|LHS - RHS|` of the chosen identity, each side evaluated independently.
pub fn identity_residual(kind: Identity, q: f64, tol: f64) -> Result<f64> {
    let qc = |e: i32| Complex64::new(q.powi(e), 0.0);
    let (lhs, rhs) = match kind {
        Identity::QBinomial { a, z } => {
            let lhs = phi_rs(&[a], &[], q, z, tol)?.value;
            let den = inf(z, q)?;
            if den.norm() == 0.0 {
                return Err(Error::Pole("(z;q)_inf vanishes".into()));
            }
            (lhs, inf(a * z, q)? / den)
        }
        Identity::QChuVandermonde { n, a, c } => {
            let lhs = phi_rs(&[qc(-(n as i32)), a], &[c], q, qc(1), tol)?.value;
            let rhs = qpoch(c / a, q, n as i64)? / qpoch(c, q, n as i64)? * a.powu(n as u32);
            (lhs, rhs)
        }
        Identity::QGaussSum { a, b, c } => {
            let z = c / (a * b);
            let lhs = phi_rs(&[a, b], &[c], q, z, tol)?.value;
            let rhs = inf(c / a, q)? * inf(c / b, q)? / (inf(c, q)? * inf(z, q)?);
            (lhs, rhs)
        }
        Identity::JacksonTransform { n, b, c, z } => {
            let qn = qc(-(n as i32));
            let lhs = phi_rs(&[qn, b], &[c], q, z, tol)?.value;
            let pre = qpoch(c / b, q, n as i64)? / qpoch(c, q, n as i64)?;
            let s = explicit_3phi2_terminating(n, b, qn * b * z / c, qc(1 - n as i32) * b / c, q)?;
            (lhs, pre * s)
        }
    };
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::Numerical(format!("{} produced a non-finite side", kind.name())));
    }
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    const TOL: f64 = 1e-16;

    #[test]
    fn examples() {
        let r = identity_residual(Identity::QBinomial { a: c(0.4), z: c(0.2) }, 0.5, TOL).unwrap();
        assert!(r <= 1e-12);
        let r = identity_residual(Identity::QChuVandermonde { n: 0, a: c(0.3), c: c(0.6) }, 0.5, TOL).unwrap();
        assert_eq!(r, 0.0);
        let r = identity_residual(Identity::QChuVandermonde { n: 1, a: c(0.3), c: c(0.6) }, 0.5, TOL).unwrap();
        assert!(r <= 1e-15);
        let r = identity_residual(Identity::JacksonTransform { n: 3, b: c(0.2), c: c(0.5), z: c(0.3) }, 0.5, TOL).unwrap();
        assert!(r <= 1e-12);
    }

    #[test]
    fn q_gauss_needs_convergent_argument() {
        // c/(ab) = 6.67 lies outside the unit disk
        let r = identity_residual(Identity::QGaussSum { a: c(0.3), b: c(0.2), c: c(0.4) }, 0.5, TOL);
        assert!(matches!(r, Err(Error::Divergence(_))));
        let r = identity_residual(Identity::QGaussSum { a: c(0.8), b: c(0.7), c: c(0.3) }, 0.5, TOL).unwrap();
        assert!(r <= 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(7), ..ProptestConfig::default() })]

        #[test]
        fn random_draws(q in 0.2f64..0.8, a in -0.9f64..0.9, z in -0.9f64..0.9, n in 0usize..4,
                        b in 0.3f64..0.9, cc in 0.2f64..0.9, u in 0.05f64..0.9) {
            let tol = 1e-16;
            let r = identity_residual(Identity::QBinomial { a: c(a), z: c(z) }, q, tol).unwrap();
            prop_assert!(r <= 10.0 * 1e-12);
            if let Ok(r) = identity_residual(Identity::QChuVandermonde { n, a: c(b), c: c(cc) }, q, tol) {
                prop_assert!(r <= 1e-11);
            }
            // |c| = u |ab| keeps the q-Gauss argument inside the disk
            let r = identity_residual(Identity::QGaussSum { a: c(b), b: c(-a.abs().max(0.3)), c: c(u * b * a.abs().max(0.3)) }, q, tol).unwrap();
            prop_assert!(r <= 1e-11);
            if let Ok(r) = identity_residual(Identity::JacksonTransform { n, b: c(b), c: c(cc), z: c(z) }, q, tol) {
                prop_assert!(r <= 1e-11);
            }
        }
    }
}
