//! Positive zeros of `psi_{-1}^+` in `(0, 1)`; they carry the discrete part of the measure.

use crate::error::Result;
use crate::orthopoly::gauss_phi;
use crate::qseries::QTriple;
use num_complex::Complex64;

const BISECT_TOL: f64 = 1e-13;
/// Closest approach of the scan grid to `z = 1`.
const EDGE_GAP: f64 = 1e-10;
/// Smallest `z` the scan reaches.
const SCAN_FLOOR: f64 = 1e-8;

/// Ordered positive zeros `z_1 < z_2 < ...` of `psi_{-1}^+` in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroSet {
    pub zeros: Vec<f64>,
}

impl ZeroSet {
    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

/// Real function with the sign of `psi_{n}^+` on `(0, 1]`: the series factor
/// `2phi1(z tau, z/tau; q z^2; q, alpha q^{n+1})`, whose prefactor `z^n (q z^2;q)_inf` is positive there.
pub(crate) fn sign_function(z: f64, n: i64, params: &QTriple) -> Result<f64> {
    Ok(gauss_phi(Complex64::new(z, 0.0), (n + 1) as u32, params)?.value.re)
}

/// Scan grid on `(0, 1]`: `q^{j/8}` down to [`SCAN_FLOOR`], refined geometrically towards `z = 1`.
pub(crate) fn scan_grid(q: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut j = 1;
    loop {
        let z = q.powf(j as f64 / 8.0);
        if z < SCAN_FLOOR {
            break;
        }
        grid.push(z);
        j += 1;
    }
    let top = q.powf(0.125);
    let mut d = (1.0 - top) * 0.5;
    while d > EDGE_GAP {
        grid.push(1.0 - d);
        d *= 0.5;
    }
    grid.push(1.0);
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    grid
}

/// Zeros of `psi_n^+` in `(0, 1)` by sign-change scan and bisection.
pub fn scan_zeros_psi(n: i64, params: &QTriple) -> Result<ZeroSet> {
    let grid = scan_grid(params.q);
    let vals = grid.iter().map(|&z| sign_function(z, n, params)).collect::<Result<Vec<_>>>()?;
    let mut zeros = Vec::new();
    for i in 0..grid.len() - 1 {
        let (fa, fb) = (vals[i], vals[i + 1]);
        if fa == 0.0 {
            zeros.push(grid[i]);
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        let (mut a, mut b, mut sa) = (grid[i], grid[i + 1], fa.signum());
        while b - a > BISECT_TOL * b.max(1e-300) {
            let m = 0.5 * (a + b);
            let fm = sign_function(m, n, params)?;
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fm.signum() == sa {
                a = m;
                sa = fm.signum();
            } else {
                b = m;
            }
        }
        zeros.push(0.5 * (a + b));
    }
    Ok(ZeroSet { zeros })
}

/// Scan for the zeros of `psi_{-1}^+`.
pub fn scan_zeros(params: &QTriple) -> Result<ZeroSet> {
    scan_zeros_psi(-1, params)
}

/// `alpha = q` closed form `z_k = sqrt((q^{1-k} - beta)/(beta - q^{k+1}))`, `k = 1, 2, ...` while `z_k < 1`.
pub fn closed_form_zeros(q: f64, beta: f64) -> ZeroSet {
    let mut zeros = Vec::new();
    for k in 1..10_000 {
        let (a, b) = (q.powi(1 - k) - beta, beta - q.powi(k + 1));
        if b <= 0.0 || a >= b {
            break;
        }
        zeros.push((a / b).sqrt());
    }
    zeros.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ZeroSet { zeros }
}

/// All zeros of `psi_{-1}^+` in `(0, 1)`; the closed form when `alpha = q`.
pub fn find_zeros(params: &QTriple) -> Result<ZeroSet> {
    if params.is_alpha_eq_q() {
        return Ok(closed_form_zeros(params.q, params.beta));
    }
    scan_zeros(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::{psi, Sign};

    fn psi_re(n: i64, z: f64, p: &QTriple) -> f64 {
        psi(Sign::Plus, n, Complex64::new(z, 0.0), p).unwrap().re
    }

    fn deriv(n: i64, z: f64, p: &QTriple) -> f64 {
        crate::measure::psi_derivative(n, z, p).unwrap()
    }

    #[test]
    fn examples() {
        let p = QTriple::alpha_eq_q(0.5, 0.9).unwrap();
        let z = find_zeros(&p).unwrap();
        assert_eq!(z.count(), 1);
        assert!((z.zeros[0] - (0.1f64 / 0.65).sqrt()).abs() < 1e-15);
        assert!((z.zeros[0] - 0.3922323).abs() < 1e-7);
        assert!(find_zeros(&QTriple::alpha_eq_q(0.5, 0.6).unwrap()).unwrap().is_empty());
        assert!(find_zeros(&QTriple::new(0.5, 0.4, 0.1).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn scan_matches_closed_form() {
        for &(q, beta) in &[(0.5, 0.9), (0.3, 0.95), (0.7, 0.99), (0.5, 0.63)] {
            let p = QTriple::alpha_eq_q(q, beta).unwrap();
            let s = scan_zeros(&p).unwrap();
            let c = closed_form_zeros(q, beta);
            assert_eq!(s.count(), c.count(), "q={q} beta={beta}");
            for (a, b) in s.zeros.iter().zip(&c.zeros) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn interlacing() {
        for &(q, a, b) in &[(0.7, 0.7, 0.99), (0.5, 0.2, 0.97), (0.6, -0.3, 0.98)] {
            let p = QTriple::new(q, a, b).unwrap();
            for n in -1..=1 {
                let zn = scan_zeros_psi(n, &p).unwrap().zeros;
                let zn1 = scan_zeros_psi(n + 1, &p).unwrap().zeros;
                for w in zn.windows(2) {
                    let inside = zn1.iter().filter(|&&x| x > w[0] && x < w[1]).count();
                    assert_eq!(inside, 1, "n={n} between {w:?}");
                }
            }
        }
    }

    #[test]
    fn wronskian_type_combination_is_negative() {
        let p = QTriple::new(0.5, 0.3, 0.8).unwrap();
        for n in -1..=3 {
            for i in 1..40 {
                let x = i as f64 / 40.0;
                let v = deriv(n, x, &p) * psi_re(n + 1, x, &p) - psi_re(n, x, &p) * deriv(n + 1, x, &p);
                assert!(v < 0.0, "n={n} x={x} v={v}");
            }
        }
    }

    #[test]
    fn green_identity() {
        let p = QTriple::new(0.5, 0.3, 0.2).unwrap();
        let x: f64 = 0.6;
        for n in 0..3i64 {
            let sum: f64 = (n..=80)
                .map(|k| {
                    let qk = p.q.powi(k as i32);
                    (1.0 - p.beta * qk) / (1.0 - p.alpha * qk) * psi_re(k, x, &p).powi(2)
                })
                .sum();
            let rhs = x * x / (x * x - 1.0) * (deriv(n - 1, x, &p) * psi_re(n, x, &p) - psi_re(n - 1, x, &p) * deriv(n, x, &p));
            assert!((sum - rhs).abs() <= 1e-9 * sum.abs().max(1.0), "n={n}: {sum} vs {rhs}");
        }
    }
}
