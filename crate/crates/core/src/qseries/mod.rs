//! q-Pochhammer symbols and basic hypergeometric series `r phi s`.
//!
//! Everything here works in complex double precision. Infinite products and
//! non-terminating series carry a certified absolute tail bound in
//! [`SeriesResult`].

mod identities;

pub use identities::{identity_residual, Identity};

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Relative truncation tolerance used by the convenience wrappers.
pub const DEFAULT_TOL: f64 = 1e-17;

/// Cut-off for infinite products: factors with `|a q^j| < 2^-60` are folded
/// into the tail bound.
const PRODUCT_CUTOFF: f64 = 8.673_617_379_884_035e-19; // 2^-60

const MAX_TERMS: usize = 200_000;

/// Parameter triple `(q, alpha, beta)` of the polynomial family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QTriple {
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl QTriple {
    /// Validates `0 < q < 1`, `|alpha| < 1`, `beta < 1`.
    pub fn new(q: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_q(q)?;
        if !(alpha.abs() < 1.0) {
            return Err(Error::Domain(format!("|alpha| must be < 1, got {alpha}")));
        }
        if !(beta < 1.0) || !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be < 1, got {beta}")));
        }
        Ok(Self { q, alpha, beta })
    }

    /// The `alpha = q` specialization.
    pub fn alpha_eq_q(q: f64, beta: f64) -> Result<Self> {
        Self::new(q, q, beta)
    }

    /// Whether `alpha` lies in `(-q, q]`, where the generating functions converge.
    pub fn in_genfunc_range(&self) -> bool {
        self.alpha > -self.q && self.alpha <= self.q
    }

    pub fn is_alpha_eq_q(&self) -> bool {
        self.alpha == self.q
    }

    /// The parameter-shifted triple `(q, alpha q, beta q)` of the second-kind family.
    pub fn shifted(&self) -> Self {
        Self { q: self.q, alpha: self.alpha * self.q, beta: self.beta * self.q }
    }
}

/// Value of a truncated product or series plus truncation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    pub terms_used: usize,
    /// Absolute bound on the neglected tail.
    pub tail_bound: f64,
    /// Sum of the absolute values of the terms; `abs_sum / |value|` is the
    /// condition number of the summation.
    pub abs_sum: f64,
}

/// Order of a q-shifted factorial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochOrder {
    Finite(i64),
    Infinite,
}

impl From<i64> for PochOrder {
    fn from(n: i64) -> Self {
        PochOrder::Finite(n)
    }
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("q must lie in (0,1), got {q}")))
    }
}

/// `(a; q)_n` for finite (possibly negative) `n` or `n = infinity`.
pub fn qpoch(a: Complex64, q: f64, n: impl Into<PochOrder>) -> Result<Complex64> {
    check_q(q)?;
    match n.into() {
        PochOrder::Finite(n) if n >= 0 => {
            let mut p = Complex64::new(1.0, 0.0);
            let mut qj = 1.0;
            for _ in 0..n {
                p *= 1.0 - a * qj;
                qj *= q;
            }
            Ok(p)
        }
        PochOrder::Finite(n) => {
            // (a;q)_{-m} = prod_{j=1}^{m} 1/(1 - a q^{-j})
            let mut p = Complex64::new(1.0, 0.0);
            let mut qj = 1.0;
            for j in 1..=(-n) {
                qj /= q;
                let f = 1.0 - a * qj;
                if f.norm() <= 1e-14 * (1.0 + (a * qj).norm()) {
                    return Err(Error::Pole(format!("(a;q)_{n}: a = q^{j} makes a factor vanish")));
                }
                p /= f;
            }
            Ok(p)
        }
        PochOrder::Infinite => Ok(qpoch_inf(a, q)?.value),
    }
}

/// `(a; q)_infinity` with the tail bound recorded.
pub fn qpoch_inf(a: Complex64, q: f64) -> Result<SeriesResult> {
    check_q(q)?;
    let mut p = Complex64::new(1.0, 0.0);
    let mut aqj = a;
    let mut terms = 0usize;
    while aqj.norm() >= PRODUCT_CUTOFF {
        p *= 1.0 - aqj;
        aqj *= q;
        terms += 1;
    }
    // |log prod_{j>=J} (1 - a q^j)| <= |a q^J| / ((1-q)(1-|a q^J|))
    let r = aqj.norm();
    let s = r / ((1.0 - q) * (1.0 - r));
    Ok(SeriesResult { value: p, terms_used: terms.max(1), tail_bound: p.norm() * s.exp_m1(), abs_sum: p.norm() })
}

/// Product `(a_1, ..., a_m; q)_n`.
pub fn qpoch_multi(params: &[Complex64], q: f64, n: impl Into<PochOrder> + Copy) -> Result<Complex64> {
    params.iter().try_fold(Complex64::new(1.0, 0.0), |acc, &a| Ok(acc * qpoch(a, q, n)?))
}

/// Real convenience wrapper for `(a; q)_infinity`.
pub fn qpoch_inf_real(a: f64, q: f64) -> f64 {
    let mut p = 1.0;
    let mut aqj = a;
    while aqj.abs() >= PRODUCT_CUTOFF {
        p *= 1.0 - aqj;
        aqj *= q;
    }
    p
}

/// If `a = q^{-n}` for some `n >= 0`, returns `n`.
pub(crate) fn terminating_degree(a: Complex64, q: f64) -> Option<usize> {
    if a.re <= 0.0 || a.im.abs() > 1e-14 * a.re {
        return None;
    }
    let n = (-(a.re.ln()) / q.ln()).round();
    if !(0.0..=1e6).contains(&n) {
        return None;
    }
    let n = n as i32;
    if (a.re * q.powi(n) - 1.0).abs() <= 1e-11 {
        Some(n as usize)
    } else {
        None
    }
}

/// Basic hypergeometric series
/// `r phi s (a_1..a_r; b_1..b_s; q, z) = sum_k (a;q)_k / (b;q)_k
/// ((-1)^k q^{k(k-1)/2})^{1+s-r} z^k / (q;q)_k`.
///
/// Terminating series (a numerator parameter equal to `q^{-n}`) are summed
/// exactly up to degree `n`. Otherwise the sum stops once two consecutive
/// terms fall below `tol * |partial sum|` and the geometric tail bound does too.
pub fn phi_rs(numerators: &[Complex64], denominators: &[Complex64], q: f64, z: Complex64, tol: f64) -> Result<SeriesResult> {
    check_q(q)?;
    let r = numerators.len() as i32;
    let s = denominators.len() as i32;
    let e = s - r + 1;
    let one = Complex64::new(1.0, 0.0);

    let degree = numerators.iter().filter_map(|&a| terminating_degree(a, q)).min();

    if z == Complex64::new(0.0, 0.0) {
        return Ok(SeriesResult { value: one, terms_used: 1, tail_bound: 0.0, abs_sum: 1.0 });
    }
    if degree.is_none() {
        if e < 0 {
            return Err(Error::Divergence(format!("{r}phi{s} with r > s+1 diverges for z != 0")));
        }
        if e == 0 && z.norm() >= 1.0 {
            return Err(Error::Divergence(format!("{r}phi{s} needs |z| < 1, got |z| = {}", z.norm())));
        }
    }

    let mut sum = one;
    let mut term = one;
    let mut max_term = 1.0f64;
    let mut abs_sum = 1.0;
    let mut qk = 1.0; // q^k
    let mut small_run = 0;
    let last = degree.unwrap_or(MAX_TERMS);

    for k in 0..last {
        // term_{k+1} / term_k
        let mut ratio = z / (1.0 - qk * q);
        for &a in numerators {
            ratio *= 1.0 - a * qk;
        }
        for &b in denominators {
            let f = 1.0 - b * qk;
            if f.norm() <= 1e-13 * (1.0 + (b * qk).norm()) {
                return Err(Error::Pole(format!("denominator parameter {b} hits q^-{k}")));
            }
            ratio /= f;
        }
        if e != 0 {
            ratio *= (-qk).powi(e);
        }
        term *= ratio;
        sum += term;
        abs_sum += term.norm();
        max_term = max_term.max(term.norm());
        qk *= q;

        if degree.is_some() {
            continue;
        }
        let scale = sum.norm().max(f64::EPSILON * max_term).max(f64::MIN_POSITIVE);
        if term.norm() <= tol * scale {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 2 {
            // ratio bound valid for all later terms once |b| q^{k+1} < 1
            let mut bound = z.norm() * qk.powi(e) / (1.0 - qk * q);
            let mut monotone = true;
            for &a in numerators {
                bound *= 1.0 + a.norm() * qk;
            }
            for &b in denominators {
                let bq = b.norm() * qk;
                if bq >= 1.0 {
                    monotone = false;
                }
                bound /= 1.0 - bq;
            }
            if monotone && bound < 1.0 {
                let tail = term.norm() * bound / (1.0 - bound);
                if tail <= tol * scale || term.norm() == 0.0 {
                    return Ok(SeriesResult { value: sum, terms_used: k + 2, tail_bound: tail, abs_sum });
                }
            }
        }
    }
    match degree {
        Some(n) => Ok(SeriesResult { value: sum, terms_used: n + 1, tail_bound: 0.0, abs_sum }),
        None => Err(Error::Divergence(format!("{r}phi{s} did not converge within {MAX_TERMS} terms"))),
    }
}

/// [`phi_rs`] value at [`DEFAULT_TOL`].
pub fn phi(numerators: &[Complex64], denominators: &[Complex64], q: f64, z: Complex64) -> Result<Complex64> {
    Ok(phi_rs(numerators, denominators, q, z, DEFAULT_TOL)?.value)
}

/// q-Gauss series `2 phi 1 (a, b; c; q, z)`.
pub fn phi21(a: Complex64, b: Complex64, c: Complex64, q: f64, z: Complex64) -> Result<Complex64> {
    phi(&[a, b], &[c], q, z)
}
