//! Truncated magnetization dynamics `q(t) = Gamma exp(t J) Gamma^{-1} q(0)`.

use crate::error::{Error, Result};
use crate::tridiag::TridiagEigen;
use nalgebra::{DMatrix, DVector};

/// `J` with diagonal `-1` and off-diagonal `sqrt(gamma_n gamma_{n+1})/2`, plus `Gamma = diag(sqrt(gamma_n))`.
#[derive(Debug, Clone)]
pub struct FiniteJacobi {
    pub gamma: Vec<f64>,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    eigen: TridiagEigen,
}

impl FiniteJacobi {
    pub fn new(gamma: &[f64]) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::Domain("need at least one site".into()));
        }
        if let Some(g) = gamma.iter().find(|g| !(**g > 0.0 && **g <= 1.0)) {
            return Err(Error::Domain(format!("couplings must lie in (0, 1], got {g}")));
        }
        let diag = vec![-1.0; gamma.len()];
        let offdiag: Vec<f64> = gamma.windows(2).map(|w| (w[0] * w[1]).sqrt() / 2.0).collect();
        let eigen = TridiagEigen::new(&diag, &offdiag);
        Ok(Self { gamma: gamma.to_vec(), diag, offdiag, eigen })
    }

    pub fn size(&self) -> usize {
        self.gamma.len()
    }

    /// `q(t)` from `q(0)`.
    pub fn evolve(&self, t: f64, q0: &[f64]) -> Result<Vec<f64>> {
        if q0.len() != self.size() {
            return Err(Error::Domain(format!("initial vector has {} entries, chain has {}", q0.len(), self.size())));
        }
        let u0 = DVector::from_iterator(self.size(), q0.iter().zip(&self.gamma).map(|(q, g)| q / g.sqrt()));
        let u = self.eigen.expm_apply(t, &u0);
        Ok(u.iter().zip(&self.gamma).map(|(u, g)| u * g.sqrt()).collect())
    }

    /// Kernel matrix `q_n^{(k)}(t) = sqrt(gamma_n/gamma_k) exp(t J)_{n,k}`, indexed `(n-1, k-1)`.
    pub fn kernels(&self, t: f64) -> DMatrix<f64> {
        let e = self.eigen.expm(t);
        DMatrix::from_fn(self.size(), self.size(), |i, j| (self.gamma[i] / self.gamma[j]).sqrt() * e[(i, j)])
    }
}

/// `q(t)` for couplings `gamma` and initial magnetizations `q0`.
pub fn jacobi_expm_magnetization(gamma: &[f64], t: f64, q0: &[f64]) -> Result<Vec<f64>> {
    FiniteJacobi::new(gamma)?.evolve(t, q0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::ChainModel;
    use crate::oracle::chain_gammas;

    #[test]
    fn single_site() {
        let q = jacobi_expm_magnetization(&[0.4], 1.3, &[0.8]).unwrap();
        assert!((q[0] - 0.8 * (-1.3f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn identity_at_zero() {
        let g = chain_gammas(&ChainModel::new(0.5).unwrap(), 10);
        let q0: Vec<f64> = (0..10).map(|i| (i as f64 * 0.37).sin()).collect();
        let q = jacobi_expm_magnetization(&g, 0.0, &q0).unwrap();
        for (a, b) in q.iter().zip(&q0) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn solves_the_ode() {
        let g = chain_gammas(&ChainModel::new(0.7).unwrap(), 12);
        let j = FiniteJacobi::new(&g).unwrap();
        let q0 = vec![1.0; 12];
        let (t, h) = (0.8, 1e-4);
        let (p, c, m) = (j.evolve(t + h, &q0).unwrap(), j.evolve(t, &q0).unwrap(), j.evolve(t - h, &q0).unwrap());
        for n in 0..12 {
            let left = if n > 0 { c[n - 1] } else { 0.0 };
            let right = if n + 1 < 12 { c[n + 1] } else { 0.0 };
            let rhs = -c[n] + g[n] / 2.0 * (left + right);
            assert!(((p[n] - m[n]) / (2.0 * h) - rhs).abs() < 1e-8);
        }
    }

    #[test]
    fn similarity_is_consistent() {
        // columns of the kernel matrix are the evolutions of unit vectors
        let g = chain_gammas(&ChainModel::new(0.3).unwrap(), 8);
        let j = FiniteJacobi::new(&g).unwrap();
        let k = j.kernels(1.7);
        let mut e = vec![0.0; 8];
        e[3] = 1.0;
        let col = j.evolve(1.7, &e).unwrap();
        for n in 0..8 {
            assert!((k[(n, 3)] - col[n]).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_couplings() {
        assert!(FiniteJacobi::new(&[]).is_err());
        assert!(FiniteJacobi::new(&[0.5, 1.5]).is_err());
    }
}
