//! Constant coupling baseline `gamma_n = gamma`, solved by modified Bessel functions.

use crate::bessel::bessel_i_scaled;
use crate::error::{Error, Result};

/// `q_n^{(k)}(t) = e^{-t} (I_{n-k}(gamma t) - I_{n+k}(gamma t))`.
pub fn constant_t_kernel(n: usize, k: usize, t: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if n == 0 || k == 0 || !(t >= 0.0) {
        return Err(Error::Domain("need n, k >= 1 and t >= 0".into()));
    }
    let x = gamma * t;
    let (n, k) = (n as i64, k as i64);
    // scaled Bessel functions keep e^{-t(1-gamma)} as the only exponential
    Ok((-t * (1.0 - gamma)).exp() * (bessel_i_scaled(n - k, x) - bessel_i_scaled(n + k, x)))
}

/// Leading large-`t` behavior `sqrt(2/pi) e^{-t(1-gamma)} n k / (gamma t)^{3/2}`.
pub fn constant_t_asymptotic(n: usize, k: usize, t: f64, gamma: f64) -> f64 {
    (2.0 / std::f64::consts::PI).sqrt() * (-t * (1.0 - gamma)).exp() * (n * k) as f64 / (gamma * t).powf(1.5)
}
