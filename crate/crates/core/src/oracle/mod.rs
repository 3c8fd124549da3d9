//! Exact finite-chain ground truth for the semi-infinite formulas.
//!
//! Every oracle takes the couplings `gamma_1, ..., gamma_N` explicitly, so the
//! hyperbolic chain and the constant-coupling baseline share one code path.

pub mod jacobi;
pub mod master;
pub mod pair;
pub mod sampler;

pub use jacobi::{jacobi_expm_magnetization, FiniteJacobi};
pub use master::{master_equation, MasterState, MAX_MASTER_SITES};
pub use pair::{pair_derivative, pair_ode_oracle};
pub use sampler::{glauber_sampler, SampleStats};

use crate::ising::ChainModel;

/// `gamma_1, ..., gamma_n` of the chain.
pub fn chain_gammas(model: &ChainModel, n: usize) -> Vec<f64> {
    (1..=n).map(|k| model.gamma(k)).collect()
}
