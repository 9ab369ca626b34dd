//! Crate error type.
//!
//! Variants mirror the failure modes of the individual operations so callers
//! can branch on the exact diagnostic instead of parsing strings.

use thiserror::Error;

/// Every fallible operation in this crate returns one of these.
#[derive(Debug, Clone, Error)]
pub enum Error {
    // ---- generator validation -------------------------------------------
    #[error("rate matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("row {row} sums to {sum:e}, exceeding the conservativity tolerance")]
    NonConservative { row: usize, sum: f64 },
    #[error("negative off-diagonal rate q[{row}][{col}] = {value}")]
    NegativeRate { row: usize, col: usize, value: f64 },
    #[error("generator is reducible: state {state} does not communicate")]
    Reducible { state: usize },

    // ---- linear algebra ---------------------------------------------------
    #[error("linear system is singular to tolerance (pivot {pivot:e} at step {step})")]
    SingularSystem { step: usize, pivot: f64 },
    #[error("eigenvalue iteration failed to converge after {iters} iterations")]
    EigenNoConvergence { iters: usize },
    #[error("peripheral eigenvalue is not simple: {count} eigenvalues within {tol:e} of the spectral abscissa")]
    NonSimplePeripheralEigenvalue { count: usize, tol: f64 },

    // ---- chains ------------------------------------------------------------
    #[error("off-diagonal state ({k},{l}) cannot reach the diagonal")]
    NotAbsorbable { k: usize, l: usize },
    #[error("series for g diverges at truncation: {detail}")]
    DivergentSeries { detail: String },

    // ---- M-matrix / feasibility -------------------------------------------
    #[error("matrix has positive off-diagonal entry at ({row},{col}): not a Z-pattern")]
    NotZPattern { row: usize, col: usize },
    #[error("internal consistency failure: minors={minors}, eigen={eigen}, lp={lp}")]
    RouteDisagreement { minors: bool, eigen: bool, lp: bool },
    #[error("feasibility problem is infeasible: {diagnostic}")]
    Infeasible { diagnostic: String },

    // ---- spectra -------------------------------------------------------------
    #[error("chain is not reversible for the supplied measure: detail {detail}")]
    NotReversible { detail: String },
    #[error("mean condition violated: sum_i mu_i beta_i = {value} >= 0")]
    MeanConditionViolated { value: f64 },

    // ---- partition ------------------------------------------------------------
    #[error("block {block} is truncated without a tail bound")]
    UncertifiedTail { block: usize },
    #[error("block map is not a refinement: {detail}")]
    MapNotRefinement { detail: String },
    #[error("rate bound exceeds declared global bound: sup {observed} > {declared}")]
    UnboundedRates { observed: f64, declared: f64 },

    // ---- dynamics ----------------------------------------------------------
    #[error("time step too coarse: delta * sup q = {product} >= 0.1")]
    StepTooCoarse { product: f64 },
    #[error("reflection coupling requested in dimension {dim} > 1")]
    UnsupportedCouplingDimension { dim: usize },
    #[error("|x - y| = {dist:e} is below the smoothing floor")]
    CoincidencePoint { dist: f64 },
    #[error("diffusion coefficient must be positive, got {value}")]
    NonPositiveDiffusion { value: f64 },
    #[error("model validation failed: {detail}")]
    ModelInvalid { detail: String },

    // ---- wasserstein -----------------------------------------------------------
    #[error("marginal weights do not form probability vectors: {detail}")]
    InfeasibleMarginals { detail: String },
    #[error("decay curve too noisy: only {usable} usable points (need {needed})")]
    CurveTooNoisy { usable: usize, needed: usize },

    // ---- certificates -------------------------------------------------------
    #[error("no xi-vector certificate exists: {diagnostic}")]
    XiInfeasible { diagnostic: String },
    #[error("coupling inequality (A1) failed for regime {regime}: observed beta {observed} > declared {declared}")]
    A1Failed {
        regime: usize,
        observed: f64,
        declared: f64,
    },
    #[error("principal eigenvalue is not positive: lambda0 = {lambda0}")]
    Lambda0NonPositive { lambda0: f64 },
    #[error("moment drift condition (H) failed for regime {regime}: {detail}")]
    HFailed { regime: usize, detail: String },
    #[error("partition certificate infeasible: {diagnostic}")]
    PartitionInfeasible { diagnostic: String },
    #[error("coupling-drift evidence for the switching chain is missing or failed: {detail}")]
    A3Unverified { detail: String },

    // ---- config / io ---------------------------------------------------------
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
