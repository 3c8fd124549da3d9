//! Magnetization kernels `q_n^{(k)}(t)` and their superposition.

use super::kernel::{kernel_p_upto, spectral_weight};
use super::ChainModel;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_many, QuadSettings};
use std::f64::consts::PI;

/// Default relative tolerance of the kernel quadrature.
pub const KERNEL_TOL: f64 = 1e-13;
/// Past `t (1 - cos theta) = CUTOFF_EXPONENT` the factor `e^{-t(1 - cos theta)}` is below `1e-52`.
const CUTOFF_EXPONENT: f64 = 120.0;

/// Upper integration limit: the integrand is negligible beyond it, and the
/// interval shrinks like `t^{-1/2}` so a fixed order resolves the peak at any `t`.
fn theta_max(t: f64) -> f64 {
    if t * 2.0 <= CUTOFF_EXPONENT {
        PI
    } else {
        (1.0 - CUTOFF_EXPONENT / t).acos()
    }
}

/// `q_n^{(k)}(t)` for all `1 <= n <= n_max`, `1 <= k <= k_max` at once; result indexed `[n-1][k-1]`.
pub fn magnetization_kernels(n_max: usize, k_max: usize, t: f64, model: &ChainModel, tol: f64) -> Result<Vec<Vec<f64>>> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")));
    }
    if n_max == 0 || k_max == 0 {
        return Err(Error::Domain("site indices start at 1".into()));
    }
    let top = n_max.max(k_max);
    let dim = n_max * k_max;
    // one extra, smooth component bounds every |integrand| and sets the error scale
    let settings = QuadSettings { rel_tol: tol, abs_tol: 0.0, min_order: 32, max_order: 4096 };
    let quad = integrate_many(0.0, theta_max(t), dim + 1, settings, |th, out| {
        let p = kernel_p_upto(top, th, model);
        let w = (-t * (1.0 - th.cos())).exp() * spectral_weight(th, model);
        for n in 1..=n_max {
            for k in 1..=k_max {
                out[(n - 1) * k_max + k - 1] = w * p[n] * p[k];
            }
        }
        out[dim] = w * p[1..].iter().map(|v| v * v).sum::<f64>();
    })?;
    let g: Vec<f64> = (0..=top).map(|n| model.gamma(n)).collect();
    Ok((1..=n_max).map(|n| (1..=k_max).map(|k| (g[n] / g[k]).sqrt() * quad.values[(n - 1) * k_max + k - 1]).collect()).collect())
}

/// `q_n^{(k)}(t) = sqrt(gamma_n/gamma_k) int_0^pi e^{-t(1 - cos theta)} P_n P_k dmu(theta)`.
pub fn magnetization_kernel(n: usize, k: usize, t: f64, model: &ChainModel, tol: f64) -> Result<f64> {
    if n == 0 || k == 0 {
        return Err(Error::Domain("site indices start at 1".into()));
    }
    let settings = QuadSettings { rel_tol: tol, abs_tol: 0.0, min_order: 32, max_order: 4096 };
    let top = n.max(k);
    let quad = integrate_many(0.0, theta_max(t), 2, settings, |th, out| {
        let p = kernel_p_upto(top, th, model);
        let v = (-t * (1.0 - th.cos())).exp() * spectral_weight(th, model) * p[n] * p[k];
        out[0] = v;
        out[1] = 0.5 * (-t * (1.0 - th.cos())).exp() * spectral_weight(th, model) * (p[n] * p[n] + p[k] * p[k]);
    })?;
    Ok((model.gamma(n) / model.gamma(k)).sqrt() * quad.values[0])
}

/// Magnetizations `q_1(t), ..., q_{n_out}(t)` from a superposition over initial sites.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnetizationRow {
    pub t: f64,
    pub values: Vec<f64>,
    /// Number of initial sites summed.
    pub sites_used: usize,
    /// Tail estimate of the neglected sites.
    pub tail_estimate: f64,
}

const BLOCK: usize = 32;

/// `q_n(t) = sum_k q_n^{(k)}(t) q_{k,0}` for `n = 1..=n_out`, summing blocks of
/// sites until the last five contributions extrapolate to a tail below `tol`.
pub fn magnetization<F: Fn(usize) -> f64>(
    t: f64,
    initial: F,
    n_out: usize,
    model: &ChainModel,
    tol: f64,
    site_max: usize,
) -> Result<MagnetizationRow> {
    let mut values = vec![0.0; n_out];
    let mut recent: Vec<f64> = Vec::new();
    let mut k_done = 0;
    while k_done < site_max {
        let k_max = (k_done + BLOCK).min(site_max);
        // kernels for the whole prefix keep the quadrature consistent across blocks
        let ker = magnetization_kernels(n_out, k_max, t, model, KERNEL_TOL)?;
        for k in k_done + 1..=k_max {
            let q0 = initial(k);
            if !(q0.abs() <= 1.0) {
                return Err(Error::Domain(format!("initial magnetization at site {k} is {q0}, outside [-1, 1]")));
            }
            let mut biggest = 0.0f64;
            for n in 0..n_out {
                let c = ker[n][k - 1] * q0;
                values[n] += c;
                biggest = biggest.max(ker[n][k - 1].abs());
            }
            recent.push(biggest);
        }
        k_done = k_max;
        let last = &recent[recent.len().saturating_sub(5)..];
        let worst = last.iter().cloned().fold(0.0, f64::max);
        // crude polynomial-decay extrapolation: sum_{j > k} a (k/j)^2 ~ a k
        let tail = worst * k_done as f64;
        if recent.len() >= 5 && tail <= tol {
            return Ok(MagnetizationRow { t, values, sites_used: k_done, tail_estimate: tail });
        }
    }
    Err(Error::Truncation(format!("superposition tail not below {tol} within {site_max} sites")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_condition() {
        let m = ChainModel::new(0.5).unwrap();
        for n in 1..6 {
            for k in 1..6 {
                let v = magnetization_kernel(n, k, 0.0, &m, KERNEL_TOL).unwrap();
                let e = if n == k { 1.0 } else { 0.0 };
                assert!((v - e).abs() <= 1e-8, "n={n} k={k}: {v}");
            }
        }
    }

    #[test]
    fn weighted_symmetry() {
        let m = ChainModel::new(0.5).unwrap();
        let a = magnetization_kernel(2, 5, 1.0, &m, KERNEL_TOL).unwrap();
        let b = magnetization_kernel(5, 2, 1.0, &m, KERNEL_TOL).unwrap();
        let (g2, g5) = (m.gamma(2), m.gamma(5));
        assert!(((g5 / g2).sqrt() * a - (g2 / g5).sqrt() * b).abs() <= 1e-10);
    }

    #[test]
    fn batch_matches_single() {
        let m = ChainModel::new(0.3).unwrap();
        let all = magnetization_kernels(4, 6, 3.0, &m, KERNEL_TOL).unwrap();
        for n in 1..=4 {
            for k in 1..=6 {
                let v = magnetization_kernel(n, k, 3.0, &m, KERNEL_TOL).unwrap();
                assert!((all[n - 1][k - 1] - v).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn solves_the_ode() {
        let m = ChainModel::new(0.7).unwrap();
        let k = 2;
        for &t in &[0.5, 3.0, 10.0] {
            let h = 1e-3;
            let at = |s: f64| magnetization_kernels(5, k, s, &m, KERNEL_TOL).unwrap();
            let (p, c, mm) = (at(t + h), at(t), at(t - h));
            for n in 1..4 {
                let d = (p[n][k - 1] - mm[n][k - 1]) / (2.0 * h);
                let rhs = -c[n][k - 1] + m.gamma(n + 1) / 2.0 * (c[n - 1][k - 1] + c[n + 1][k - 1]);
                assert!((d - rhs).abs() <= 1e-6, "t={t} n={}", n + 1);
            }
        }
    }

    #[test]
    fn decays_fast_in_k() {
        let m = ChainModel::new(0.5).unwrap();
        let row = magnetization_kernels(1, 40, 1.0, &m, KERNEL_TOL).unwrap();
        let bound = (5..=40).map(|k| row[0][k - 1].abs() * (k as f64).powi(4)).fold(0.0, f64::max);
        assert!(bound.is_finite() && bound < 10.0, "{bound}");
    }

    #[test]
    fn superposition_basics() {
        let m = ChainModel::new(0.5).unwrap();
        let unit = magnetization(1.0, |k| if k == 3 { 1.0 } else { 0.0 }, 4, &m, 1e-12, 2000).unwrap();
        for n in 1..=4 {
            let v = magnetization_kernel(n, 3, 1.0, &m, KERNEL_TOL).unwrap();
            assert!((unit.values[n - 1] - v).abs() <= 1e-13);
        }
        let zero = magnetization(1.0, |_| 0.0, 3, &m, 1e-12, 2000).unwrap();
        assert!(zero.values.iter().all(|&v| v == 0.0));
        assert!(matches!(magnetization(1.0, |_| 2.0, 3, &m, 1e-12, 2000), Err(Error::Domain(_))));
    }
}
