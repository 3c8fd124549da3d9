//! The orthogonality measure of `p_n^{(alpha,beta)}`: absolutely continuous
//! density on `x = 2 cos(theta)`, finitely many symmetric atoms `+-x_k`
//! outside `[-2, 2]`, and the Cauchy transform tying them together.

pub mod zeros;

pub use zeros::{closed_form_zeros, find_zeros, scan_zeros, scan_zeros_psi, ZeroSet};

use crate::error::{Error, Result};
use crate::orthopoly::{gauss_phi, joukowsky, psi, PolyFamily, Sign};
use crate::qseries::{qpoch, qpoch_inf, QTriple};
use crate::quadrature::{integrate_many, QuadSettings};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A point mass at `+-x` (stored once, for `x > 2`) with weight `weight` on each side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    /// The zero `z_k` of `psi_{-1}^+` with `x = z_k + 1/z_k`.
    pub z: f64,
    pub x: f64,
    pub weight: f64,
}

/// Measure normalized to unit mass: `int_0^pi density + 2 sum_k w_k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoMeasure {
    pub params: QTriple,
    pub atoms: Vec<Atom>,
}

impl OrthoMeasure {
    pub fn new(params: QTriple) -> Result<Self> {
        Ok(Self { params, atoms: discrete_atoms(&params)? })
    }

    pub fn density(&self, theta: f64) -> Result<f64> {
        ac_density(theta, &self.params)
    }

    /// Atoms at both `+x_k` and `-x_k`.
    pub fn symmetric_atoms(&self) -> Vec<(f64, f64)> {
        self.atoms.iter().flat_map(|a| [(a.x, a.weight), (-a.x, a.weight)]).collect()
    }

    /// `int f dmu` for several `f` at once; `f(x, out)` fills every component.
    pub fn integrate_many<F>(&self, dim: usize, settings: QuadSettings, f: F) -> Result<Vec<f64>>
    where
        F: Fn(f64, &mut [f64]),
    {
        let params = self.params;
        let ac = integrate_many(0.0, PI, dim, settings, |theta, out| {
            let d = ac_density(theta, &params).unwrap_or(f64::NAN);
            f(2.0 * theta.cos(), out);
            out.iter_mut().for_each(|v| *v *= d);
        })?;
        let mut total = ac.values;
        let mut buf = vec![0.0; dim];
        for (x, w) in self.symmetric_atoms() {
            f(x, &mut buf);
            total.iter_mut().zip(&buf).for_each(|(t, v)| *t += w * v);
        }
        Ok(total)
    }

    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.integrate_many(1, QuadSettings::default(), |_, out| out[0] = 1.0)?[0])
    }

    /// `int dmu(x) / (v(z) - x)` by quadrature, for real `z` in `(0, 1)`.
    pub fn stieltjes(&self, z: f64) -> Result<f64> {
        let v = z + 1.0 / z;
        Ok(self.integrate_many(1, QuadSettings::default(), |x, out| out[0] = 1.0 / (v - x))?[0])
    }
}

/// `dmu_ac/dtheta = 2(1-beta)/(pi(1-alpha)) sin^2(theta) / |2phi1(e^{i theta} tau, e^{i theta}/tau; q e^{2 i theta}; q, alpha)|^2`.
///
/// For `alpha = q` the series is summed by the q-Gauss formula, leaving
/// `|(q e^{2i theta}, q; q)_inf|^2 / |(q e^{i theta} tau, q e^{i theta}/tau; q)_inf|^2`.
pub fn ac_density(theta: f64, params: &QTriple) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Domain(format!("theta must lie in (0, pi), got {theta}")));
    }
    let QTriple { q, alpha, beta } = *params;
    let w = Complex64::from_polar(1.0, theta);
    let s2 = theta.sin().powi(2);
    let pre = 2.0 * (1.0 - beta) / (PI * (1.0 - alpha));
    let d = if params.is_alpha_eq_q() {
        let num = qpoch_inf(q * w * w, q)?.value.norm() * qpoch_inf(Complex64::new(q, 0.0), q)?.value.norm();
        // (q w tau q^j)(q w q^j / tau) = 1 - beta v(w) w q^j + q^2 w^2 q^{2j}
        let bv = beta * joukowsky(w);
        let mut den = Complex64::new(1.0, 0.0);
        let mut qj = 1.0;
        while qj * (bv.norm() + q * q * qj) > 1e-18 {
            den *= 1.0 - bv * w * qj + q * q * w * w * qj * qj;
            qj *= q;
        }
        pre * s2 * (num / den.norm()).powi(2)
    } else {
        pre * s2 / gauss_phi(w, 0, params)?.value.norm_sqr()
    };
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::Numerical(format!("density {d} at theta = {theta}")));
    }
    Ok(d)
}

/// `C_mu(v(z)) = (1-beta)/(1-alpha) psi_0^+(z) / psi_{-1}^+(z)` for `0 < |z| < 1`.
pub fn cauchy_transform(z: Complex64, params: &QTriple) -> Result<Complex64> {
    if !(z.norm() > 0.0 && z.norm() < 1.0) {
        return Err(Error::Domain(format!("need 0 < |z| < 1, got |z| = {}", z.norm())));
    }
    let num = psi(Sign::Plus, 0, z, params)?;
    let den = psi(Sign::Plus, -1, z, params)?;
    if den.norm() <= 1e-14 * num.norm() {
        return Err(Error::Pole(format!("psi_-1^+ vanishes at z = {z}")));
    }
    Ok((1.0 - params.beta) / (1.0 - params.alpha) * num / den)
}

/// `d/dz psi_n^+(z)` at real `z` by a complex step; `psi` is analytic and real on the real axis,
/// so `Im psi(z + i h)/h` has no subtractive cancellation.
pub(crate) fn psi_derivative(n: i64, z: f64, params: &QTriple) -> Result<f64> {
    let h = 1e-30 * z.abs().max(1.0);
    Ok(psi(Sign::Plus, n, Complex64::new(z, h), params)?.im / h)
}

fn psi_real(n: i64, z: f64, params: &QTriple) -> Result<f64> {
    Ok(psi(Sign::Plus, n, Complex64::new(z, 0.0), params)?.re)
}

/// Atoms `x_k = z_k + 1/z_k`, `w_k = (1-beta)/(1-alpha) (z_k^2-1)/z_k^2 psi_0^+(z_k) / (psi_{-1}^+)'(z_k)`.
pub fn discrete_atoms(params: &QTriple) -> Result<Vec<Atom>> {
    let zs = find_zeros(params)?;
    let mut atoms = Vec::with_capacity(zs.count());
    for &z in zs.zeros.iter().rev() {
        let d = psi_derivative(-1, z, params)?;
        let weight = (1.0 - params.beta) / (1.0 - params.alpha) * (z * z - 1.0) / (z * z) * psi_real(0, z, params)? / d;
        if !(weight > 0.0) {
            return Err(Error::Numerical(format!("non-positive atom weight {weight} at z = {z}")));
        }
        atoms.push(Atom { z, x: z + 1.0 / z, weight });
    }
    Ok(atoms)
}

/// Right-hand side `(alpha;q)_n (alpha;q)_{n+1} / ((beta;q)_n (beta;q)_{n+1})` of the diagonal relation.
pub fn orthogonality_norm(n: usize, params: &QTriple) -> Result<f64> {
    let c = |a: f64, k: usize| qpoch(Complex64::new(a, 0.0), params.q, k as i64).map(|v| v.re);
    Ok(c(params.alpha, n)? * c(params.alpha, n + 1)? / (c(params.beta, n)? * c(params.beta, n + 1)?))
}

/// `(1-alpha)/(1-beta) int p_m p_n dmu` for all `m, n <= n_max`.
pub fn gram_matrix(n_max: usize, measure: &OrthoMeasure) -> Result<Vec<Vec<f64>>> {
    let fam = PolyFamily::new(measure.params);
    let dim = (n_max + 1) * (n_max + 1);
    let settings = QuadSettings { rel_tol: 1e-14, abs_tol: 1e-16, ..QuadSettings::default() };
    let flat = measure.integrate_many(dim, settings, |x, out| {
        let p = fam.values_upto(n_max, Complex64::new(x, 0.0));
        for m in 0..=n_max {
            for n in 0..=n_max {
                out[m * (n_max + 1) + n] = p[m + 1].re * p[n + 1].re;
            }
        }
    })?;
    let s = (1.0 - measure.params.alpha) / (1.0 - measure.params.beta);
    Ok(flat.chunks(n_max + 1).map(|row| row.iter().map(|v| s * v).collect()).collect())
}

/// `|LHS - RHS|` of the orthogonality relation for `p_m, p_n`.
pub fn orthogonality_residual(m: usize, n: usize, params: &QTriple) -> Result<f64> {
    let measure = OrthoMeasure::new(*params)?;
    let g = gram_matrix(m.max(n), &measure)?;
    let rhs = if m == n { orthogonality_norm(n, params)? } else { 0.0 };
    Ok((g[m][n] - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::poly_second_kind;

    #[test]
    fn density_symmetry_and_branches() {
        let p = QTriple::new(0.5, 0.4, 0.1).unwrap();
        assert!((ac_density(0.3, &p).unwrap() - ac_density(PI - 0.3, &p).unwrap()).abs() <= 1e-12);
        let p = QTriple::alpha_eq_q(0.5, -0.5).unwrap();
        let closed = ac_density(1.0, &p).unwrap();
        let general =
            2.0 * 1.5 / (PI * 0.5) * 1f64.sin().powi(2) / gauss_phi(Complex64::from_polar(1.0, 1.0), 0, &p).unwrap().value.norm_sqr();
        assert!((closed - general).abs() <= 1e-10);
        assert!(matches!(ac_density(0.0, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn normalization() {
        let m = OrthoMeasure::new(QTriple::new(0.5, 0.3, 0.2).unwrap()).unwrap();
        assert!(m.atoms.is_empty());
        assert!((m.total_mass().unwrap() - 1.0).abs() <= 1e-8);
        let m = OrthoMeasure::new(QTriple::alpha_eq_q(0.5, 0.9).unwrap()).unwrap();
        assert_eq!(m.atoms.len(), 1);
        assert!((m.atoms[0].x - 0.75 / 0.065f64.sqrt()).abs() < 1e-12);
        assert!((m.atoms[0].x - 2.9417420).abs() < 1e-6);
        assert!((m.total_mass().unwrap() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn orthogonality_examples() {
        let p = QTriple::new(0.5, 0.3, 0.2).unwrap();
        assert!(orthogonality_residual(0, 0, &p).unwrap() <= 1e-8);
        assert!(orthogonality_residual(3, 5, &p).unwrap() <= 1e-8);
        let p = QTriple::alpha_eq_q(0.5, 0.9).unwrap();
        assert!(orthogonality_residual(4, 4, &p).unwrap() <= 1e-7);
    }

    #[test]
    fn cauchy_transform_examples() {
        let p = QTriple::new(0.5, 0.3, 0.2).unwrap();
        let z = 0.4;
        let c = cauchy_transform(Complex64::new(z, 0.0), &p).unwrap();
        let fam = PolyFamily::new(p);
        let x = Complex64::new(z + 1.0 / z, 0.0);
        let markov = poly_second_kind(60, x, &fam) / crate::orthopoly::poly_recurrence(60, x, &fam);
        assert!((c - markov).norm() <= 1e-8, "{c} vs {markov}");
        let m = OrthoMeasure::new(p).unwrap();
        let s = m.stieltjes(0.35).unwrap();
        let c = cauchy_transform(Complex64::new(0.35, 0.0), &p).unwrap();
        assert!((c.re - s).abs() <= 1e-8, "{c} vs {s}");
        let small = cauchy_transform(Complex64::new(1e-4, 0.0), &p).unwrap();
        assert!((small.re / 1e-4 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn stieltjes_consistency_with_atoms() {
        let p = QTriple::alpha_eq_q(0.5, 0.9).unwrap();
        let m = OrthoMeasure::new(p).unwrap();
        let z1 = m.atoms[0].z;
        for i in 1..20 {
            let z = i as f64 / 20.0;
            if (z - z1).abs() < 0.02 {
                continue;
            }
            let c = cauchy_transform(Complex64::new(z, 0.0), &p).unwrap();
            let s = m.stieltjes(z).unwrap();
            assert!((c.re - s).abs() <= 1e-8 * c.norm().max(1.0), "z={z}: {c} vs {s}");
        }
    }

    #[test]
    fn complex_step_matches_difference_quotient() {
        let p = QTriple::alpha_eq_q(0.5, 0.9).unwrap();
        let z = 0.37;
        let h = 1e-6;
        let fd = (psi_real(-1, z + h, &p).unwrap() - psi_real(-1, z - h, &p).unwrap()) / (2.0 * h);
        assert!((psi_derivative(-1, z, &p).unwrap() - fd).abs() < 1e-8);
    }
}
