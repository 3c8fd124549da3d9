//! Spectral variables and the two solutions `psi^+`, `psi^-` of
//! `psi_{n-1} - v(z) (1 - beta q^n)/(1 - alpha q^n) psi_n + psi_{n+1} = 0`.
//!
//! All q-Gauss series here have the shape `2phi1(w tau, w/tau; q w^2; q, alpha q^m)`
//! and depend on `tau` only through `alpha (tau + 1/tau) = beta v(z)`. The term
//! ratio is therefore assembled from `alpha`, `beta` and `w` directly, which
//! also covers `alpha = 0` (where it reduces to `1phi1(0; q w^2; q, beta (1 + w^2) q^m)`)
//! and `beta = 0` without special casing.

use super::{poly_recurrence, PolyFamily};
use crate::dd::{Cdd, Dd};
use crate::error::{Error, Result};
use crate::qseries::{qpoch, qpoch_inf, PochOrder, QTriple, SeriesResult, DEFAULT_TOL};
use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_TERMS: usize = 100_000;
/// Distance to `+-q^{Z/2}` below which [`poly_spectral`] uses the recurrence.
pub const DEGENERATE_RADIUS: f64 = 1e-6;

/// Joukowsky map `z + 1/z`.
pub fn joukowsky(z: Complex64) -> Complex64 {
    z + z.inv()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Coupled spectral coordinates: `x = v(z)`, `alpha v(tau) = beta v(z)`, and
/// `theta` when `z = e^{i theta}` with `theta` in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub z: Complex64,
    /// Absent for `alpha = 0`, where the limit formulas apply.
    pub tau: Option<Complex64>,
    pub theta: Option<f64>,
}

impl SpectralPoint {
    pub fn from_z(z: Complex64, params: &QTriple) -> Result<Self> {
        tau_from_z(z, params)
    }

    pub fn from_theta(theta: f64, params: &QTriple) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("theta must lie in [0, pi], got {theta}")));
        }
        let mut p = tau_from_z(Complex64::from_polar(1.0, theta), params)?;
        p.theta = Some(theta);
        Ok(p)
    }

    /// The polynomial argument `v(z)`.
    pub fn x(&self) -> Complex64 {
        joukowsky(self.z)
    }
}

/// Solves `alpha tau^2 - beta v(z) tau + alpha = 0` for the root with `|tau| <= 1`
/// (ties broken towards `Im tau >= 0`).
pub fn tau_from_z(z: Complex64, params: &QTriple) -> Result<SpectralPoint> {
    if z.norm() == 0.0 || !z.is_finite() {
        return Err(Error::Domain("z must be finite and nonzero".into()));
    }
    let theta = if (z.norm() - 1.0).abs() <= 1e-14 && z.im >= 0.0 { Some(z.arg()) } else { None };
    if params.alpha == 0.0 {
        return Ok(SpectralPoint { z, tau: None, theta });
    }
    let b = params.beta * joukowsky(z);
    let d = (b * b - 4.0 * params.alpha * params.alpha).sqrt();
    // larger root without cancellation, then the reciprocal
    let big = if (b + d).norm() >= (b - d).norm() { b + d } else { b - d };
    let mut tau = 2.0 * params.alpha / big;
    if ((tau.norm() - 1.0).abs() <= 1e-13) && tau.im < 0.0 {
        tau = tau.inv();
    }
    Ok(SpectralPoint { z, tau: Some(tau), theta })
}

/// `2phi1(w tau, w/tau; q w^2; q, alpha q^m)` with a certified tail bound.
pub fn gauss_phi(w: Complex64, m: u32, params: &QTriple) -> Result<SeriesResult> {
    sum_from(w, m, params, 0, Complex64::new(1.0, 0.0))
}

/// Sums the q-Gauss series from index `k0` on, given the term at `k0`.
fn sum_from(w: Complex64, m: u32, params: &QTriple, k0: usize, first: Complex64) -> Result<SeriesResult> {
    let QTriple { q, alpha, beta } = *params;
    let qm = q.powi(m as i32);
    let w2 = w * w;
    let bw = beta * (1.0 + w2);
    let mut sum = first;
    let mut term = first;
    let mut max_term = first.norm();
    let mut abs_sum = first.norm();
    let mut qk = q.powi(k0 as i32);
    let mut small = 0;
    for k in k0..MAX_TERMS {
        let den = (1.0 - w2 * (qk * q)) * (1.0 - qk * q);
        if den.norm() <= 1e-14 {
            return Err(Error::Pole(format!("q w^2 = q^-{k} in the denominator (w = {w})")));
        }
        term *= qm * (alpha - bw * qk + alpha * w2 * (qk * qk)) / den;
        sum += term;
        abs_sum += term.norm();
        max_term = max_term.max(term.norm());
        qk *= q;
        let scale = sum.norm().max(f64::EPSILON * max_term);
        if term.norm() <= DEFAULT_TOL * scale {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 2 {
            let wq = w2.norm() * qk * q;
            if wq < 1.0 {
                let rho = qm * (alpha.abs() + bw.norm() * qk + alpha.abs() * w2.norm() * qk * qk) / ((1.0 - wq) * (1.0 - qk * q));
                if rho < 1.0 {
                    let tail = term.norm() * rho / (1.0 - rho);
                    if tail <= DEFAULT_TOL * scale || term.norm() == 0.0 {
                        return Ok(SeriesResult { value: sum, terms_used: k + 2 - k0, tail_bound: tail, abs_sum });
                    }
                }
            }
        }
    }
    Err(Error::Divergence("q-Gauss series did not converge".into()))
}

/// `(q w^2; q)_inf 2phi1(w tau, w/tau; q w^2; q, alpha q^m)`, which is entire in `w`.
///
/// When `q w^2 = q^-j` the product vanishes and the series has a pole; the
/// product is then folded into each term so that only `k > j` survives.
pub fn gauss_phi_regularized(w: Complex64, m: u32, params: &QTriple) -> Result<Complex64> {
    let q = params.q;
    let c = q * w * w;
    let j = (-(c.norm().ln()) / q.ln()).round();
    let pole = (0.0..4096.0).contains(&j) && (1.0 - c * q.powi(j as i32)).norm() <= 1e-13;
    if !pole {
        return Ok(qpoch_inf(c, q)?.value * gauss_phi(w, m, params)?.value);
    }
    let j = j as usize;
    let QTriple { alpha, beta, .. } = *params;
    let qm = q.powi(m as i32);
    let w2 = w * w;
    // k-th term without the (q w^2; q)_k denominator, at k = j + 1
    let mut u = Complex64::new(1.0, 0.0);
    let mut qi = 1.0;
    for _ in 0..=j {
        u *= qm * (alpha - beta * (1.0 + w2) * qi + alpha * w2 * qi * qi) / (1.0 - qi * q);
        qi *= q;
    }
    let first = u * qpoch_inf(c * qi, q)?.value;
    Ok(sum_from(w, m, params, j + 1, first)?.value)
}

/// `psi^+_n(z) = z^n (q z^2; q)_inf 2phi1(z tau, z/tau; q z^2; q, alpha q^{n+1})`,
/// and `psi^-_n(z) = psi^+_n(1/z)`.
pub fn psi(sign: Sign, n: i64, z: Complex64, params: &QTriple) -> Result<Complex64> {
    if n < -1 {
        return Err(Error::Domain(format!("psi is defined for n >= -1, got {n}")));
    }
    if z.norm() == 0.0 {
        return Err(Error::Domain("z must be nonzero".into()));
    }
    let w = match sign {
        Sign::Plus => z,
        Sign::Minus => z.inv(),
    };
    Ok(w.powi(n as i32) * gauss_phi_regularized(w, (n + 1) as u32, params)?)
}

/// Closed form `z^{-1} (z^2, q z^{-2}; q)_inf`.
pub fn wronskian(z: Complex64, params: &QTriple) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("z must be nonzero".into()));
    }
    let q = params.q;
    Ok(z.inv() * qpoch(z * z, q, PochOrder::Infinite)? * qpoch(q / (z * z), q, PochOrder::Infinite)?)
}

/// `psi^+_n psi^-_{n+1} - psi^+_{n+1} psi^-_n`.
pub fn wronskian_direct(n: i64, z: Complex64, params: &QTriple) -> Result<Complex64> {
    let p0 = psi(Sign::Plus, n, z, params)?;
    let p1 = psi(Sign::Plus, n + 1, z, params)?;
    let m0 = psi(Sign::Minus, n, z, params)?;
    let m1 = psi(Sign::Minus, n + 1, z, params)?;
    Ok(p0 * m1 - p1 * m0)
}

/// Whether `z` lies within [`DEGENERATE_RADIUS`] of `+-q^{j/2}` for some integer `j`.
pub fn is_degenerate(z: Complex64, q: f64) -> bool {
    let j = (2.0 * z.norm().ln() / q.ln()).round();
    if !j.is_finite() {
        return true;
    }
    let r = q.powf(j / 2.0);
    (z - r).norm() < DEGENERATE_RADIUS || (z + r).norm() < DEGENERATE_RADIUS
}

/// `p_n(v(z))` from the two-`phi` closed form, falling back to the recurrence
/// near `+-q^{Z/2}` where the closed form is a removable 0/0.
pub fn poly_spectral(n: i64, point: &SpectralPoint, params: &QTriple) -> Result<Complex64> {
    if n < 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let z = point.z;
    if is_degenerate(z, params.q) {
        return Ok(poly_recurrence(n, point.x(), &PolyFamily::new(*params)));
    }
    // The two products cancel by up to the size of 1/(q z^-2; q)_inf, so the
    // bracket is formed in double-double.
    let zd = Cdd::new(z);
    let zi = zd.inv();
    let m = (n + 1) as u32;
    let a = gauss_phi_dd(zd, 0, params)? * gauss_phi_dd(zi, m, params)?;
    let b = gauss_phi_dd(zi, 0, params)? * gauss_phi_dd(zd, m, params)?;
    let e = (n + 1) as i32;
    let bracket = (zi.powi(e) * a - zd.powi(e) * b) / (zi - zd);
    let ratio = qpoch(Complex64::new(params.alpha, 0.0), params.q, n)? / qpoch(Complex64::new(params.beta, 0.0), params.q, n)?;
    Ok(ratio * bracket.to_c64())
}

/// [`gauss_phi`] in double-double, truncated once terms drop below `1e-32` of the sum.
fn gauss_phi_dd(w: Cdd, m: u32, params: &QTriple) -> Result<Cdd> {
    let QTriple { q, alpha, beta } = *params;
    let qd = Dd::from_f64(q);
    let (al, be) = (Cdd::real(alpha), Cdd::real(beta));
    let one = Cdd::real(1.0);
    let mut qm = Dd::from_f64(1.0);
    for _ in 0..m {
        qm = qm * qd;
    }
    let w2 = w * w;
    let bw = be * (one + w2);
    let (mut sum, mut term) = (one, one);
    let mut qk = Dd::from_f64(1.0);
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let qk1 = qk * qd;
        let den = (one - w2.scale(qk1)) * (one - Cdd::real(1.0).scale(qk1));
        if den.norm() <= 1e-14 {
            return Err(Error::Pole(format!("q w^2 = q^-{k} in the denominator (w = {})", w.to_c64())));
        }
        let num = (al - bw.scale(qk) + (al * w2).scale(qk * qk)).scale(qm);
        term = term * num / den;
        sum = sum + term;
        qk = qk1;
        small = if term.norm() <= 1e-32 * sum.norm() { small + 1 } else { 0 };
        if small >= 2 && w2.norm() * qk.to_f64() < 0.5 {
            return Ok(sum);
        }
    }
    Err(Error::Divergence("q-Gauss series did not converge".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticBranch {
    /// `0 < |z| < 1`, error `O(max(|z|, q)^n)`.
    Interior,
    /// `z = e^{i theta}`, `0 < theta < pi`, error `O(q^n)`.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticValue {
    pub value: Complex64,
    pub branch: AsymptoticBranch,
}

/// Leading large-`n` behaviour of `p_n(v(z))`.
pub fn poly_asymptotic(n: i64, point: &SpectralPoint, params: &QTriple) -> Result<AsymptoticValue> {
    let q = params.q;
    let pre = qpoch_inf(Complex64::new(params.alpha, 0.0), q)?.value / qpoch_inf(Complex64::new(params.beta, 0.0), q)?.value;
    let z = point.z;
    if let Some(theta) = point.theta {
        if theta <= 0.0 || theta >= PI {
            return Err(Error::Domain("boundary asymptotics need theta in (0, pi)".into()));
        }
        let phi = gauss_phi(Complex64::from_polar(1.0, -theta), 0, params)?.value;
        let im = (Complex64::from_polar(1.0, (n + 1) as f64 * theta) * phi).im;
        return Ok(AsymptoticValue { value: pre * (im / theta.sin()), branch: AsymptoticBranch::Boundary });
    }
    let r = z.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("interior asymptotics need 0 < |z| < 1, got |z| = {r}")));
    }
    let phi = gauss_phi(z, 0, params)?.value;
    Ok(AsymptoticValue { value: pre / (z.inv() - z) * z.inv().powi((n + 1) as i32) * phi, branch: AsymptoticBranch::Interior })
}
