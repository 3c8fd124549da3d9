//! Stationary two-spin correlation `rho_{m,n}`: the fixed point of
//! `(T x)_{m,n} = gamma_m/4 (x_{m+1,n} + x_{m-1,n}) + gamma_n/4 (x_{m,n+1} + x_{m,n-1})`, `(T x)_{m,m} = 1`.
//!
//! On the truncated grid `[1..M]^2` with zeros outside, the substitution
//! `rho_{m,n} = sqrt(gamma_m gamma_n) y_{m,n}` turns the off-diagonal equations into a
//! symmetric positive definite system on the triangle `m > n`, solved by conjugate gradients.

use super::ChainModel;
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Target for `max |T rho - rho|` in the truncated solve.
pub const FIXED_POINT_TOL: f64 = 1e-13;
pub const MAX_GRID: usize = 512;

/// Stationary correlations on `[1..size]^2`, stored 0-based (`rho[(m-1, n-1)]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Stationary {
    pub rho: DMatrix<f64>,
    /// Truncation size used for the solve.
    pub grid: usize,
    /// `max |T rho - rho|` on the solve grid.
    pub residual: f64,
}

impl Stationary {
    pub fn size(&self) -> usize {
        self.rho.nrows()
    }

    /// `rho_{m,n}` with 1-based sites; zero outside the stored window.
    pub fn get(&self, m: usize, n: usize) -> f64 {
        if m == 0 || n == 0 || m > self.size() || n > self.size() {
            0.0
        } else {
            self.rho[(m - 1, n - 1)]
        }
    }
}

/// `T x` on `[1..M]^2` with `x` zero outside, for any `M x M` matrix `x`.
pub fn apply_t(model: &ChainModel, x: &DMatrix<f64>) -> DMatrix<f64> {
    let size = x.nrows();
    assert_eq!(size, x.ncols(), "T acts on square grids");
    let g: Vec<f64> = (0..=size).map(|n| model.gamma(n)).collect();
    let at = |i: usize, j: usize| if i == 0 || j == 0 || i > size || j > size { 0.0 } else { x[(i - 1, j - 1)] };
    DMatrix::from_fn(size, size, |i, j| {
        let (m, n) = (i + 1, j + 1);
        if m == n {
            1.0
        } else {
            g[m] / 4.0 * (at(m + 1, n) + at(m - 1, n)) + g[n] / 4.0 * (at(m, n + 1) + at(m, n - 1))
        }
    })
}

/// `max |T rho - rho|` on the grid of `rho`.
pub fn stationary_residual(model: &ChainModel, rho: &DMatrix<f64>) -> f64 {
    (apply_t(model, rho) - rho).amax()
}

/// Observed Lipschitz ratio `|T x - T y|_inf / |x - y|_inf`.
pub fn contraction_ratio(model: &ChainModel, x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    let d = (x - y).amax();
    (apply_t(model, x) - apply_t(model, y)).amax() / d
}

/// Triangle `1 <= n < m <= size`, row-major in `m`.
struct Triangle {
    size: usize,
    /// `sqrt(gamma_m gamma_{m+1}) / 2` at index `m`.
    link: Vec<f64>,
    g: Vec<f64>,
}

impl Triangle {
    fn new(model: &ChainModel, size: usize) -> Self {
        let g: Vec<f64> = (0..=size + 1).map(|n| model.gamma(n)).collect();
        let link = (0..=size).map(|m| (g[m] * g[m + 1]).sqrt() / 2.0).collect();
        Self { size, link, g }
    }

    fn len(&self) -> usize {
        self.size * (self.size - 1) / 2
    }

    fn idx(m: usize, n: usize) -> usize {
        (m - 1) * (m - 2) / 2 + n - 1
    }

    /// `A y` with `A = 2 I - (nearest-neighbor links)` restricted to the triangle.
    fn apply(&self, y: &[f64], out: &mut [f64]) {
        for m in 2..=self.size {
            for n in 1..m {
                let mut s = 2.0 * y[Self::idx(m, n)];
                if m < self.size {
                    s -= self.link[m] * y[Self::idx(m + 1, n)];
                }
                if m - 1 > n {
                    s -= self.link[m - 1] * y[Self::idx(m - 1, n)];
                }
                if n + 1 < m {
                    s -= self.link[n] * y[Self::idx(m, n + 1)];
                }
                if n > 1 {
                    s -= self.link[n - 1] * y[Self::idx(m, n - 1)];
                }
                out[Self::idx(m, n)] = s;
            }
        }
    }

    /// Source from the pinned diagonal `y_{m,m} = 1/gamma_m`, present only next to it.
    fn source(&self) -> Vec<f64> {
        let mut b = vec![0.0; self.len()];
        for n in 1..self.size {
            b[Self::idx(n + 1, n)] = self.link[n] * (1.0 / self.g[n] + 1.0 / self.g[n + 1]);
        }
        b
    }

    /// `max |T rho - rho|` from a residual `b - A y`: `T rho - rho = sqrt(gamma_m gamma_n) r / 2`.
    fn fixed_point_gap(&self, r: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for m in 2..=self.size {
            for n in 1..m {
                worst = worst.max((self.g[m] * self.g[n]).sqrt() / 2.0 * r[Self::idx(m, n)].abs());
            }
        }
        worst
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact stationary solution of the problem truncated to `[1..size]^2` with zeros outside.
pub fn stationary_truncated(model: &ChainModel, size: usize) -> Result<Stationary> {
    if size < 2 {
        return Err(Error::Domain(format!("grid size must be at least 2, got {size}")));
    }
    let tri = Triangle::new(model, size);
    let len = tri.len();
    let mut y = vec![0.0; len];
    let b = tri.source();
    let mut r = b.clone();
    let mut p = r.clone();
    let mut ap = vec![0.0; len];
    let mut rr = dot(&r, &r);
    let max_iter = 50 * len.max(100);
    let mut iter = 0;
    loop {
        // confirm with the true residual so rounding drift cannot fake convergence
        if iter % 200 == 0 || tri.fixed_point_gap(&r) <= 0.5 * FIXED_POINT_TOL {
            tri.apply(&y, &mut ap);
            r = b.iter().zip(&ap).map(|(b, a)| b - a).collect();
            if tri.fixed_point_gap(&r) <= FIXED_POINT_TOL {
                break;
            }
            rr = dot(&r, &r);
            p = r.clone();
        }
        if iter >= max_iter {
            return Err(Error::Numerical(format!("conjugate gradients stalled on a {size}x{size} grid")));
        }
        tri.apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for i in 0..len {
            y[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..len {
            p[i] = r[i] + beta * p[i];
        }
        iter += 1;
    }
    let rho = DMatrix::from_fn(size, size, |i, j| {
        let (m, n) = (i.max(j) + 1, i.min(j) + 1);
        if m == n {
            1.0
        } else {
            (tri.g[m] * tri.g[n]).sqrt() * y[Triangle::idx(m, n)]
        }
    });
    let residual = stationary_residual(model, &rho);
    Ok(Stationary { rho, grid: size, residual })
}

/// Stationary correlations on `[1..site_max]^2`: the truncation grid is doubled until
/// the window changes by less than `tol`.
pub fn stationary(model: &ChainModel, site_max: usize, tol: f64) -> Result<Stationary> {
    if site_max < 2 {
        return Err(Error::Domain(format!("site_max must be at least 2, got {site_max}")));
    }
    let mut grid = (2 * site_max).max(16);
    let mut prev = stationary_truncated(model, grid)?;
    while 2 * grid <= MAX_GRID {
        grid *= 2;
        let next = stationary_truncated(model, grid)?;
        let w = site_max;
        let change = (next.rho.view((0, 0), (w, w)) - prev.rho.view((0, 0), (w, w))).amax();
        if change < tol {
            return Ok(Stationary { rho: next.rho.view((0, 0), (w, w)).into_owned(), grid, residual: next.residual });
        }
        prev = next;
    }
    Err(Error::Truncation(format!("stationary window [1..{site_max}] not settled to {tol} on a {MAX_GRID} grid")))
}
