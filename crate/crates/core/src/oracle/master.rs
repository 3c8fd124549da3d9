//! Full master equation on `{-1, +1}^N` with Glauber rates, integrated by uniformization.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Largest chain the exact oracle accepts (`2^12` configurations).
pub const MAX_MASTER_SITES: usize = 12;
/// Largest `Lambda h` per uniformization step; keeps Poisson weights well inside `f64` range.
const MAX_STEP_RATE: f64 = 20.0;
const POISSON_TAIL: f64 = 1e-17;

/// Distribution over configurations; bit `i` of the index is `(sigma_{i+1} + 1)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterState {
    pub sites: usize,
    pub p: Vec<f64>,
}

fn check_sites(sites: usize) -> Result<()> {
    if sites == 0 || sites > MAX_MASTER_SITES {
        return Err(Error::Size(format!("master equation supports 1..={MAX_MASTER_SITES} sites, got {sites}")));
    }
    Ok(())
}

fn spin(config: usize, i: usize) -> f64 {
    if config >> i & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

impl MasterState {
    pub fn uniform(sites: usize) -> Result<Self> {
        check_sites(sites)?;
        let len = 1 << sites;
        Ok(Self { sites, p: vec![1.0 / len as f64; len] })
    }

    /// Point mass on one configuration of `+-1` spins.
    pub fn point(spins: &[i8]) -> Result<Self> {
        check_sites(spins.len())?;
        let mut idx = 0;
        for (i, &s) in spins.iter().enumerate() {
            match s {
                1 => idx |= 1 << i,
                -1 => {}
                _ => return Err(Error::Domain(format!("spins must be +1 or -1, got {s}"))),
            }
        }
        let mut p = vec![0.0; 1 << spins.len()];
        p[idx] = 1.0;
        Ok(Self { sites: spins.len(), p })
    }

    /// Independent spins with the given magnetizations.
    pub fn product(mags: &[f64]) -> Result<Self> {
        check_sites(mags.len())?;
        if let Some(m) = mags.iter().find(|m| !(m.abs() <= 1.0)) {
            return Err(Error::Domain(format!("magnetizations must lie in [-1, 1], got {m}")));
        }
        let p = (0..1usize << mags.len()).map(|c| mags.iter().enumerate().map(|(i, m)| (1.0 + m * spin(c, i)) / 2.0).product()).collect();
        Ok(Self { sites: mags.len(), p })
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    /// `q_n = <sigma_n>`.
    pub fn magnetization(&self) -> Vec<f64> {
        (0..self.sites).map(|i| self.p.iter().enumerate().map(|(c, p)| spin(c, i) * p).sum()).collect()
    }

    /// `r_{m,n} = <sigma_m sigma_n>`, indexed `(m-1, n-1)`.
    pub fn correlation(&self) -> DMatrix<f64> {
        let n = self.sites;
        let mut r = DMatrix::zeros(n, n);
        for (c, &p) in self.p.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    r[(i, j)] += spin(c, i) * spin(c, j) * p;
                }
            }
        }
        r
    }
}

/// `w_n(sigma) = 1/2 - gamma_n sigma_n (sigma_{n-1} + sigma_{n+1}) / 4` with open ends.
fn flip_rate(gamma: &[f64], config: usize, i: usize) -> f64 {
    let n = gamma.len();
    let left = if i > 0 { spin(config, i - 1) } else { 0.0 };
    let right = if i + 1 < n { spin(config, i + 1) } else { 0.0 };
    0.5 - 0.25 * gamma[i] * spin(config, i) * (left + right)
}

/// `out = p + G p / Lambda` for the generator `G`.
fn uniformized_step(gamma: &[f64], rates: &[Vec<f64>], lambda: f64, p: &[f64], out: &mut [f64]) {
    for (c, o) in out.iter_mut().enumerate() {
        let mut v = p[c] * (1.0 - rates[c].iter().sum::<f64>() / lambda);
        for i in 0..gamma.len() {
            let from = c ^ (1 << i);
            v += rates[from][i] / lambda * p[from];
        }
        *o = v;
    }
}

/// Distribution at time `t` starting from `initial`, for couplings `gamma_1..gamma_N`.
pub fn master_equation(gamma: &[f64], initial: &MasterState, t: f64) -> Result<MasterState> {
    check_sites(gamma.len())?;
    if initial.sites != gamma.len() {
        return Err(Error::Domain(format!("state has {} sites, couplings {}", initial.sites, gamma.len())));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")));
    }
    let len = 1usize << gamma.len();
    let rates: Vec<Vec<f64>> = (0..len).map(|c| (0..gamma.len()).map(|i| flip_rate(gamma, c, i)).collect()).collect();
    let lambda = rates.iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max).max(1e-300);
    let steps = (lambda * t / MAX_STEP_RATE).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut p = initial.p.clone();
    let mut power = vec![0.0; len];
    let mut next = vec![0.0; len];
    for _ in 0..steps {
        // p(t + h) = sum_k Poisson(k; Lambda h) (I + G/Lambda)^k p(t)
        let mu = lambda * h;
        let mut weight = (-mu).exp();
        let mut acc: Vec<f64> = p.iter().map(|v| weight * v).collect();
        power.copy_from_slice(&p);
        let mut used = weight;
        let mut k = 0;
        while 1.0 - used > POISSON_TAIL && k < 10_000 {
            k += 1;
            uniformized_step(gamma, &rates, lambda, &power, &mut next);
            std::mem::swap(&mut power, &mut next);
            weight *= mu / k as f64;
            used += weight;
            for (a, v) in acc.iter_mut().zip(&power) {
                *a += weight * v;
            }
            if weight < POISSON_TAIL && k as f64 > mu {
                break;
            }
        }
        p = acc;
    }
    Ok(MasterState { sites: gamma.len(), p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::ChainModel;
    use crate::oracle::{chain_gammas, jacobi_expm_magnetization};

    #[test]
    fn conserves_probability() {
        let g = chain_gammas(&ChainModel::new(0.5).unwrap(), 6);
        let s = master_equation(&g, &MasterState::uniform(6).unwrap(), 5.0).unwrap();
        assert!((s.total() - 1.0).abs() <= 1e-12);
        assert!(s.p.iter().all(|&v| v >= -1e-15));
    }

    #[test]
    fn generator_columns_sum_to_zero() {
        let g = chain_gammas(&ChainModel::new(0.5).unwrap(), 4);
        let len = 16;
        let rates: Vec<Vec<f64>> = (0..len).map(|c| (0..4).map(|i| flip_rate(&g, c, i)).collect()).collect();
        for c in 0..len {
            let mut e = vec![0.0; len];
            e[c] = 1.0;
            let mut out = vec![0.0; len];
            uniformized_step(&g, &rates, 4.0, &e, &mut out);
            assert!((out.iter().sum::<f64>() - 1.0).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn single_free_spin_relaxes() {
        let s = master_equation(&[0.3], &MasterState::point(&[1]).unwrap(), 2.0).unwrap();
        assert!((s.magnetization()[0] - (-2.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn marginals_follow_the_jacobi_flow() {
        let g = chain_gammas(&ChainModel::new(0.5).unwrap(), 2);
        let init = MasterState::product(&[0.6, -0.2]).unwrap();
        let s = master_equation(&g, &init, 1.5).unwrap();
        let q = jacobi_expm_magnetization(&g, 1.5, &[0.6, -0.2]).unwrap();
        for (a, b) in s.magnetization().iter().zip(&q) {
            assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn size_limit() {
        assert!(matches!(MasterState::uniform(13), Err(Error::Size(_))));
        assert!(matches!(master_equation(&[0.5; 13], &MasterState::uniform(1).unwrap(), 1.0), Err(Error::Size(_))));
    }
}
