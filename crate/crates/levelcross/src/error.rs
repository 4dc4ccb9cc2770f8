use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("unsupported Bessel order {0}: only half-integers up to |p| = 5/2")]
    UnsupportedOrder(f64),

    #[error("quadrature did not converge: estimated error {error:.3e} after {subdivisions} subdivisions")]
    QuadratureFailed { error: f64, subdivisions: usize },

    #[error("bracketing failed: no sign change on [{lo}, {hi}] (f(lo)={flo:.6e}, f(hi)={fhi:.6e})")]
    BracketFailure { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("root solver failed: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    SolverFailed { residual: f64, tol: f64 },

    #[error("implicit function is singular: dF/dy = {0:.3e} at the evaluation point")]
    SingularImplicit(f64),

    #[error("argument {x} lies beyond the tabulated window [0, {window}]")]
    WindowExceeded { x: f64, window: f64 },

    #[error("series truncation too severe: neglected mass {neglected:.3e} exceeds budget {budget:.3e} at x = {x}")]
    Truncation { neglected: f64, budget: f64, x: f64 },

    #[error("table size {requested} exceeds the configured budget {budget}")]
    TableBudget { requested: usize, budget: usize },

    #[error("regime mismatch: {0}")]
    Regime(String),

    #[error("near-critical rate: |1 - cM| = {gap:.3e} is within the switch band {band:.3e}; use the c* limit or quadrature")]
    NearCritical { gap: f64, band: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
