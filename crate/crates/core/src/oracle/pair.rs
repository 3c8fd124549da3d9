//! Pair-correlation ODE on a finite chain, with the diagonal pinned at 1 and zero boundaries.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Taylor step length; `|h A| <= 4 h` keeps the series short.
const STEP: f64 = 0.5;
const TERM_TOL: f64 = 1e-17;

fn check(gamma: &[f64], r: &DMatrix<f64>) -> Result<()> {
    let n = gamma.len();
    if n == 0 || r.nrows() != n || r.ncols() != n {
        return Err(Error::Domain(format!("need an {n}x{n} correlation matrix")));
    }
    Ok(())
}

/// Linear part `L r`: `-2 r_{m,n} + gamma_m/2 (r_{m+1,n} + r_{m-1,n}) + gamma_n/2 (r_{m,n+1} + r_{m,n-1})`,
/// zero on the diagonal.
fn linear(gamma: &[f64], r: &DMatrix<f64>, pinned_diag: bool) -> DMatrix<f64> {
    let n = gamma.len();
    let at = |i: isize, j: isize| {
        if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
            0.0
        } else if i == j {
            if pinned_diag {
                1.0
            } else {
                0.0
            }
        } else {
            r[(i as usize, j as usize)]
        }
    };
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            return 0.0;
        }
        let (a, b) = (i as isize, j as isize);
        -2.0 * at(a, b) + gamma[i] / 2.0 * (at(a + 1, b) + at(a - 1, b)) + gamma[j] / 2.0 * (at(a, b + 1) + at(a, b - 1))
    })
}

/// `dr/dt` at `r` (off-diagonal right-hand side; zero on the diagonal).
pub fn pair_derivative(gamma: &[f64], r: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check(gamma, r)?;
    Ok(linear(gamma, r, true))
}

/// `r(t)` from a symmetric `r(0)` with unit diagonal, by exact Taylor steps of the affine system.
pub fn pair_ode_oracle(gamma: &[f64], r0: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    check(gamma, r0)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")));
    }
    let n = gamma.len();
    for i in 0..n {
        if r0[(i, i)] != 1.0 {
            return Err(Error::Domain(format!("diagonal entry {} is {}, expected 1", i + 1, r0[(i, i)])));
        }
        for j in 0..i {
            if r0[(i, j)] != r0[(j, i)] {
                return Err(Error::Domain("initial correlations must be symmetric".into()));
            }
        }
    }
    let steps = (t / STEP).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut r = r0.clone();
    for _ in 0..steps {
        // r(t+h) = r + sum_{k>=1} h^k/k! z_k, z_1 = dr/dt, z_{k+1} = L z_k with a free diagonal
        let mut z = linear(gamma, &r, true);
        let mut next = r.clone();
        let mut coef = 1.0;
        let scale = r.amax().max(1.0);
        for k in 1..200 {
            coef *= h / k as f64;
            let term = &z * coef;
            next += &term;
            if term.amax() <= TERM_TOL * scale {
                break;
            }
            z = linear(gamma, &z, false);
        }
        r = next;
    }
    for i in 0..n {
        r[(i, i)] = 1.0;
    }
    Ok(r)
}
