use thiserror::Error;

/// Errors raised across the crate.
///
/// Numeric payloads are carried as `f64` so the type stays independent of
/// the scalar a computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root bracket failure on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("no root found on the scan grid ({} points scanned)", profile.len())]
    NoRoot { profile: Vec<(f64, f64)> },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("regime is at or above the recovery characterization: {0}")]
    AboveCharacterization(String),

    #[error("infeasible regime: alpha = {alpha} does not exceed the weak threshold {alpha_w}")]
    InfeasibleRegime { alpha: f64, alpha_w: f64 },

    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("problem is infeasible: {0}")]
    Infeasible(String),

    #[error("aggregate failure: {failed} of {total} trials failed ({reason})")]
    Aggregate { failed: usize, total: usize, reason: String },

    #[error("empty report: no trials requested")]
    EmptyReport,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
