//! Modified Bessel functions `I_n(x)` of integer order and real `x >= 0`,
//! returned scaled by `e^{-x}`.

/// Below this argument the power series is used.
const SERIES_LIMIT: f64 = 30.0;

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `e^{-x} sum_k (x/2)^{2k+n} / (k! (k+n)!)`, summed in log-scaled form.
fn scaled_series(n: u64, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let h = 0.5 * x;
    let mut term = (n as f64 * h.ln() - ln_factorial(n) - x).exp();
    let mut sum = term;
    let mut k = 0u64;
    loop {
        k += 1;
        term *= h * h / (k as f64 * (k + n) as f64);
        sum += term;
        if term <= 1e-17 * sum && (k as f64) > h {
            return sum;
        }
    }
}

/// Large-argument expansion `sum_k (-1)^k a_k(n) / x^k / sqrt(2 pi x)`,
/// or `None` if its terms do not get small enough before diverging.
fn scaled_asymptotic(n: u64, x: f64) -> Option<f64> {
    let mu = 4.0 * (n as f64).powi(2);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            return Some(sum / (2.0 * std::f64::consts::PI * x).sqrt());
        }
    }
    None
}

/// `e^{-x} I_n(x)` for integer `n` (`I_{-n} = I_n`) and `x >= 0`.
pub fn bessel_i_scaled(n: i64, x: f64) -> f64 {
    assert!(x >= 0.0, "bessel_i_scaled needs x >= 0, got {x}");
    let n = n.unsigned_abs();
    if x < SERIES_LIMIT {
        return scaled_series(n, x);
    }
    scaled_asymptotic(n, x).unwrap_or_else(|| scaled_series(n, x))
}

/// `I_n(x)` (may overflow for large `x`).
pub fn bessel_i(n: i64, x: f64) -> f64 {
    bessel_i_scaled(n, x) * x.exp()
}
