//! Two-spin correlations: the vanishing-diagonal kernels `r^{(k,l)}_{m,n}(t)` and
//! the superposition around the stationary solution.

use super::asymptotics::asymptotic_coeffs;
use super::magnetization::{magnetization_kernels, KERNEL_TOL};
use super::stationary::{stationary_truncated, Stationary, MAX_GRID};
use super::ChainModel;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// `r^{(k,l)}_{m,n}(t) = q_m^{(k)} q_n^{(l)} - q_n^{(k)} q_m^{(l)}` for `m >= n`, symmetric in `(m, n)`.
pub fn twospin_kernel(m: usize, n: usize, k: usize, l: usize, t: f64, model: &ChainModel, tol: f64) -> Result<f64> {
    if !(k > l && l >= 1 && m >= 1 && n >= 1) {
        return Err(Error::Domain(format!("need k > l >= 1 and m, n >= 1, got m={m} n={n} k={k} l={l}")));
    }
    if m == n {
        return Ok(0.0);
    }
    let (hi, lo) = (m.max(n), m.min(n));
    let q = magnetization_kernels(hi, k, t, model, tol)?;
    Ok(q[hi - 1][k - 1] * q[lo - 1][l - 1] - q[lo - 1][k - 1] * q[hi - 1][l - 1])
}

/// Leading `t^{-5}` term `3/(pi gamma_1^2) C^8 sqrt(g_m g_n/(g_k g_l)) R_{k,l} R_{m,n} t^{-5}`, for `m >= n`.
pub fn twospin_asymptotic(m: usize, n: usize, k: usize, l: usize, t: f64, model: &ChainModel) -> f64 {
    let c = asymptotic_coeffs(m.max(n).max(k).max(l), model);
    let g = |i| model.gamma(i);
    3.0 / (PI * g(1) * g(1)) * model.gamma_product().powi(8) * (g(m) * g(n) / (g(k) * g(l))).sqrt() * c.r(k, l) * c.r(m, n) * t.powi(-5)
}

/// Correlations `r_{m,n}(t)` for `m, n <= n_out`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSpinRow {
    pub t: f64,
    pub values: DMatrix<f64>,
    /// Bound on the contribution of initial sites beyond the stationary window.
    pub tail_estimate: f64,
}

/// `r(t) = rho + sum_{k>l} (r_{k,l}(0) - rho_{k,l}) r^{(k,l)}(t)` summed over the window of `rho`.
///
/// With `Q_{m,k} = q_m^{(k)}(t)` and `C` antisymmetric, `C_{k,l} = r_{k,l}(0) - rho_{k,l}` for `k > l`,
/// the sum is `(Q C Q^T)_{m,n}` for `m >= n`.
pub fn twospin<F: Fn(usize, usize) -> f64>(
    t: f64,
    initial: F,
    rho: &Stationary,
    n_out: usize,
    model: &ChainModel,
    tol: f64,
) -> Result<TwoSpinRow> {
    let size = rho.size();
    if n_out == 0 || n_out > size {
        return Err(Error::Domain(format!("n_out must lie in 1..={size}, got {n_out}")));
    }
    let mut c = DMatrix::zeros(size, size);
    for k in 2..=size {
        for l in 1..k {
            let r0 = initial(k, l);
            if !(r0.abs() <= 1.0) {
                return Err(Error::Domain(format!("initial correlation at ({k}, {l}) is {r0}, outside [-1, 1]")));
            }
            let d = r0 - rho.get(k, l);
            c[(k - 1, l - 1)] = d;
            c[(l - 1, k - 1)] = -d;
        }
    }
    let ker = magnetization_kernels(n_out, size, t, model, KERNEL_TOL)?;
    let q = DMatrix::from_fn(n_out, size, |i, j| ker[i][j]);
    // a neglected site k pairs with every l through coefficients of size <= 2; the
    // kernels decay polynomially in k, so the tail is about k times the last column
    let last = (size.saturating_sub(5)..size).map(|j| q.column(j).amax()).fold(0.0, f64::max);
    let row_sum = q.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let tail = 2.0 * last * size as f64 * row_sum;
    if tail > tol {
        return Err(Error::Truncation(format!("two-spin tail {tail:.3e} exceeds {tol:.3e} with a {size}-site window")));
    }
    let s = &q * c * q.transpose();
    let values = DMatrix::from_fn(n_out, n_out, |i, j| {
        let (m, n) = (i.max(j), i.min(j));
        if m == n {
            1.0
        } else {
            rho.rho[(m, n)] + s[(m, n)]
        }
    });
    Ok(TwoSpinRow { t, values, tail_estimate: tail })
}

/// [`twospin`] on a time grid with the stationary solution kept on the first `window`
/// sites. The solve grid doubles from `2 window` until no output moves by more than
/// `tol`; returns the rows and the final grid.
pub fn twospin_converged<F: Fn(usize, usize) -> f64>(
    times: &[f64],
    initial: F,
    window: usize,
    n_out: usize,
    model: &ChainModel,
    tol: f64,
) -> Result<(Vec<TwoSpinRow>, usize)> {
    let rows_on = |grid: usize| -> Result<Vec<TwoSpinRow>> {
        let full = stationary_truncated(model, grid)?;
        let rho = Stationary { rho: full.rho.view((0, 0), (window, window)).into_owned(), grid, residual: full.residual };
        times.iter().map(|&t| twospin(t, &initial, &rho, n_out, model, tol)).collect()
    };
    let mut grid = (2 * window).max(16);
    let mut prev = rows_on(grid)?;
    let mut change = f64::INFINITY;
    while 2 * grid <= MAX_GRID {
        grid *= 2;
        let next = rows_on(grid)?;
        change = prev.iter().zip(&next).map(|(a, b)| (&a.values - &b.values).amax()).fold(0.0, f64::max);
        if change < tol {
            return Ok((next, grid));
        }
        prev = next;
    }
    Err(Error::Truncation(format!("correlations moved by {change:.3e} > {tol:.3e} at the {MAX_GRID} stationary grid")))
}
