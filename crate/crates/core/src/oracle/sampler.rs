//! Stochastic Glauber dynamics by exact event-driven (Gillespie) simulation.
//!
//! Trajectory `j` draws from ChaCha8 stream `j` of the given seed and all tallies
//! are integers, so results do not depend on thread scheduling.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Sample means and standard errors of `q_n(t)` and `r_{m,n}(t)` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStats {
    pub times: Vec<f64>,
    pub trajectories: usize,
    /// `mean_q[i][n-1]` at `times[i]`.
    pub mean_q: Vec<Vec<f64>>,
    pub se_q: Vec<Vec<f64>>,
    /// `mean_r[i][(m-1, n-1)]` at `times[i]`.
    pub mean_r: Vec<DMatrix<f64>>,
    pub se_r: Vec<DMatrix<f64>>,
}

fn rate(gamma: &[f64], s: &[i8], i: usize) -> f64 {
    let left = if i > 0 { s[i - 1] } else { 0 };
    let right = if i + 1 < s.len() { s[i + 1] } else { 0 };
    0.5 - 0.25 * gamma[i] * f64::from(s[i] * (left + right))
}

/// Tallies of `sum sigma_n` and `sum sigma_m sigma_n` (`m < n`) at each time.
fn tally_len(n: usize) -> usize {
    n + n * (n - 1) / 2
}

fn record(s: &[i8], out: &mut [i64]) {
    let n = s.len();
    for i in 0..n {
        out[i] += i64::from(s[i]);
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            out[k] += i64::from(s[i] * s[j]);
            k += 1;
        }
    }
}

fn trajectory(gamma: &[f64], initial: &[i8], times: &[f64], seed: u64, stream: u64) -> Vec<i64> {
    let n = gamma.len();
    let width = tally_len(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut s = initial.to_vec();
    let mut out = vec![0i64; width * times.len()];
    let mut rates: Vec<f64> = (0..n).map(|i| rate(gamma, &s, i)).collect();
    let mut clock = 0.0;
    for (ti, &t) in times.iter().enumerate() {
        loop {
            let total: f64 = rates.iter().sum();
            // 1 - U lies in (0, 1], so the logarithm is finite
            let wait = -(1.0 - rng.random::<f64>()).ln() / total;
            if clock + wait > t {
                break;
            }
            clock += wait;
            let mut pick = rng.random::<f64>() * total;
            let mut site = n - 1;
            for (i, r) in rates.iter().enumerate() {
                if pick < *r {
                    site = i;
                    break;
                }
                pick -= r;
            }
            s[site] = -s[site];
            for j in site.saturating_sub(1)..(site + 2).min(n) {
                rates[j] = rate(gamma, &s, j);
            }
        }
        // memorylessness: restarting the clock at a grid time leaves the law unchanged
        clock = t;
        record(&s, &mut out[ti * width..(ti + 1) * width]);
    }
    out
}

/// Runs `n_trajectories` independent chains from the spin configuration `initial`.
pub fn glauber_sampler(gamma: &[f64], initial: &[i8], times: &[f64], n_trajectories: usize, seed: u64) -> Result<SampleStats> {
    let n = gamma.len();
    if n == 0 || initial.len() != n {
        return Err(Error::Domain(format!("need {n} initial spins, got {}", initial.len())));
    }
    if initial.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::Domain("initial spins must be +1 or -1".into()));
    }
    if gamma.iter().any(|g| !(g.abs() <= 1.0)) {
        return Err(Error::Domain("couplings must lie in [-1, 1]".into()));
    }
    if n_trajectories < 2 {
        return Err(Error::Domain("need at least two trajectories".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::Domain("times must be ascending and >= 0".into()));
    }
    let width = tally_len(n);
    let totals = (0..n_trajectories as u64).into_par_iter().map(|j| trajectory(gamma, initial, times, seed, j)).reduce(
        || vec![0i64; width * times.len()],
        |mut a, b| {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            a
        },
    );
    let count = n_trajectories as f64;
    // every observable is +-1, so the sample variance is (1 - mean^2) n/(n-1)
    let stats = |sum: i64| {
        let mean = sum as f64 / count;
        (mean, ((1.0 - mean * mean).max(0.0) / (count - 1.0)).sqrt())
    };
    let (mut mean_q, mut se_q, mut mean_r, mut se_r) = (vec![], vec![], vec![], vec![]);
    for ti in 0..times.len() {
        let row = &totals[ti * width..(ti + 1) * width];
        let (mq, sq): (Vec<f64>, Vec<f64>) = row[..n].iter().map(|&v| stats(v)).unzip();
        let mut mr = DMatrix::identity(n, n);
        let mut sr = DMatrix::zeros(n, n);
        let mut k = n;
        for i in 0..n {
            for j in i + 1..n {
                let (m, s) = stats(row[k]);
                mr[(i, j)] = m;
                mr[(j, i)] = m;
                sr[(i, j)] = s;
                sr[(j, i)] = s;
                k += 1;
            }
        }
        mean_q.push(mq);
        se_q.push(sq);
        mean_r.push(mr);
        se_r.push(sr);
    }
    Ok(SampleStats { times: times.to_vec(), trajectories: n_trajectories, mean_q, se_q, mean_r, se_r })
}
