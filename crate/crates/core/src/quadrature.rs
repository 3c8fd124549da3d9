//! Gauss-Legendre quadrature with order doubling.
//!
//! Rules are cached per order. Integrands over `[0, pi]` in this crate are
//! analytic in a strip around the interval, so doubling converges spectrally
//! and the difference of successive estimates is a reliable error proxy.

use crate::error::{Error, Result};
use gauss_quad::GaussLegendre;
use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

type Rule = Arc<Vec<(f64, f64)>>;

fn cache() -> &'static Mutex<HashMap<usize, Rule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Nodes and weights on `[-1, 1]` for the given order.
pub fn rule(order: usize) -> Rule {
    if let Some(r) = cache().lock().unwrap().get(&order) {
        return r.clone();
    }
    let n = NonZeroUsize::new(order.max(1)).unwrap();
    let r: Rule = Arc::new(GaussLegendre::new(n).as_node_weight_pairs().to_vec());
    cache().lock().unwrap().entry(order).or_insert(r).clone()
}

/// Fixed-order Gauss-Legendre estimate of `int_a^b f`.
pub fn fixed<F: FnMut(f64) -> f64>(a: f64, b: f64, order: usize, mut f: F) -> f64 {
    let (h, m) = (0.5 * (b - a), 0.5 * (b + a));
    rule(order).iter().map(|&(x, w)| w * f(m + h * x)).sum::<f64>() * h
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub values: Vec<f64>,
    /// Order of the accepted rule.
    pub order: usize,
    /// Max difference to the previous order's estimate.
    pub error_estimate: f64,
}

/// Settings for [`integrate_many`].
#[derive(Debug, Clone, Copy)]
pub struct QuadSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub min_order: usize,
    pub max_order: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-13, abs_tol: 1e-15, min_order: 16, max_order: 1024 }
    }
}

/// Integrates `dim` functions at once; `f(x, out)` fills all components at `x`.
///
/// Stops when every component changes by less than
/// `rel_tol * max|value| + abs_tol` between successive orders.
pub fn integrate_many<F>(a: f64, b: f64, dim: usize, settings: QuadSettings, f: F) -> Result<Quadrature>
where
    F: Fn(f64, &mut [f64]),
{
    let (h, m) = (0.5 * (b - a), 0.5 * (b + a));
    let mut buf = vec![0.0; dim];
    let mut eval = |order: usize| {
        let mut acc = vec![0.0; dim];
        for &(x, w) in rule(order).iter() {
            f(m + h * x, &mut buf);
            for (s, v) in acc.iter_mut().zip(&buf) {
                *s += w * v;
            }
        }
        acc.iter_mut().for_each(|s| *s *= h);
        acc
    };
    let mut order = settings.min_order.max(2);
    let mut prev = eval(order);
    let mut last_err = f64::INFINITY;
    while order < settings.max_order {
        order *= 2;
        let cur = eval(order);
        let scale = cur.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let err = cur.iter().zip(&prev).fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
        if !err.is_finite() {
            return Err(Error::Quadrature("non-finite integrand".into()));
        }
        if err <= settings.rel_tol * scale + settings.abs_tol {
            return Ok(Quadrature { values: cur, order, error_estimate: err });
        }
        prev = cur;
        last_err = err;
    }
    Err(Error::Quadrature(format!("no convergence up to order {} (last change {last_err:.3e})", settings.max_order)))
}

/// Scalar version of [`integrate_many`].
pub fn integrate<F: Fn(f64) -> f64>(a: f64, b: f64, settings: QuadSettings, f: F) -> Result<(f64, f64)> {
    let r = integrate_many(a, b, 1, settings, |x, out| out[0] = f(x))?;
    Ok((r.values[0], r.error_estimate))
}
