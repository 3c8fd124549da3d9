//! Numerical toolkit for the kinetic Ising chain whose local coupling is
//! `gamma_n = tanh(kappa * n)`.
//!
//! The crate is layered bottom-up:
//!
//! - [`qseries`]: q-Pochhammer symbols, basic hypergeometric series and
//!   residual checks for the classical summation/transformation identities.
//! - [`orthopoly`]: the symmetric polynomial family `p_n^{(alpha,beta)}(x;q)`
//!   with its second-kind companion, the `psi^{+-}` solutions of the
//!   associated difference equation, closed forms, asymptotics and generating
//!   functions.
//! - [`measure`]: the orthogonality measure (density, atoms, Cauchy transform)
//!   and the zeros of `psi_{-1}^+` that carry its discrete part.
//! - [`ising`]: the chain itself: orthonormal kernel `P_n(theta)`,
//!   magnetization and two-spin correlation dynamics, the stationary
//!   correlation and large-time expansions.
//! - [`oracle`]: exact finite-chain ground truth (tridiagonal exponentials,
//!   the full master equation, the pair ODE, a stochastic sampler).
//! - [`verify`]: the acceptance checks, shared by the test suite and the CLI.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// index loops mirror the recurrences they implement
#![allow(clippy::needless_range_loop)]

pub mod bessel;
mod dd;
pub mod error;
pub mod ising;
pub mod measure;
pub mod oracle;
pub mod orthopoly;
pub mod qseries;
pub mod quadrature;
pub mod tridiag;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use qseries::QTriple;
