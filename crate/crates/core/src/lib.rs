//! Certification and verification toolkit for exponential ergodicity of
//! regime-switching diffusions in Wasserstein distances.
//!
//! A regime-switching diffusion is a pair `(X_t, Λ_t)` where `X_t` solves an
//! SDE whose drift and diffusion coefficients depend on a continuous-time
//! Markov chain `Λ_t`. This crate computes algebraic certificates that such a
//! process contracts in a Wasserstein distance built from a composite cost
//! `√(1_{i≠j} + ρ(|x−y|))`, and validates those certificates against coupled
//! Monte Carlo simulation of the process itself.
//!
//! The certificate machinery covers:
//!
//! * nonsingular M-matrix tests with three independent decision routes
//!   ([`spectra::is_nonsingular_mmatrix`]),
//! * the ξ-vector linear feasibility problem ([`spectra::find_xi`]),
//! * the principal Dirichlet eigenvalue for reversible switching
//!   ([`spectra::dirichlet_lambda0`]),
//! * Perron–Frobenius p-power certificates ([`spectra::perron_eta`]),
//! * the finite-partition reduction of a countable regime set
//!   ([`partition`]), and
//! * moment-boundedness certificates for state-dependent switching
//!   ([`certificates::certify_bt4`]).
//!
//! The simulation side ([`dynamics`], [`chains`], [`wasserstein`]) provides
//! Euler–Maruyama integration with thinned switching, classical chain
//! coupling, 1-d reflection coupling, exact small-support optimal transport,
//! and decay-rate fitting, so every certified bound can be checked against an
//! empirical coupling curve.

pub mod certificates;
pub mod chains;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod rho;
pub mod simplex;
pub mod spectra;
pub mod transport;
pub mod wasserstein;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Tolerance for algebraic residuals (linear solves, eigen-identities that
/// are exact up to rounding).
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Tolerance for eigenvalue identities obtained by iterative refinement.
pub const EIGEN_TOL: f64 = 1e-10;

/// Monte Carlo assertions allow three standard errors of slack.
pub const MC_SIGMA: f64 = 3.0;
