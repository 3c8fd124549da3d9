//! Semi-infinite kinetic Ising chain with couplings `gamma_n = tanh(kappa n)`,
//! i.e. the `alpha = q = e^{-2 kappa}`, `beta = -q` member of the polynomial family.

pub mod asymptotics;
pub mod constant;
pub mod kernel;
pub mod magnetization;
pub mod stationary;
pub mod twospin;

pub use asymptotics::{asymptotic_coeffs, magnetization_asymptotic, magnetization_leading, AsymptoticCoeffs, BForm};
pub use constant::{constant_t_asymptotic, constant_t_kernel};
pub use kernel::{kernel_p, kernel_p_derivs, kernel_p_upto, spectral_weight};
pub use magnetization::{magnetization, magnetization_kernel, magnetization_kernels, MagnetizationRow};
pub use stationary::{apply_t, contraction_ratio, stationary, stationary_residual, stationary_truncated, Stationary, MAX_GRID};
pub use twospin::{twospin, twospin_asymptotic, twospin_converged, twospin_kernel, TwoSpinRow};

use crate::error::{Error, Result};
use crate::qseries::{qpoch_inf_real, QTriple};

/// Chain with `gamma_n = tanh(kappa n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainModel {
    pub kappa: f64,
    pub q: f64,
    pub params: QTriple,
}

impl ChainModel {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
        }
        let q = (-2.0 * kappa).exp();
        Ok(Self { kappa, q, params: QTriple::new(q, q, -q)? })
    }

    /// `gamma_n = tanh(kappa n)`; `gamma_0 = 0`.
    pub fn gamma(&self, n: usize) -> f64 {
        (self.kappa * n as f64).tanh()
    }

    /// `(q;q)_inf / (-q;q)_inf`, which equals `prod_k gamma_k`.
    pub fn gamma_product(&self) -> f64 {
        qpoch_inf_real(self.q, self.q) / qpoch_inf_real(-self.q, self.q)
    }
}
