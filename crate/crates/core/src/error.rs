use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input lies at (or within the guard distance of) a pole.
    #[error("pole: {0}")]
    Pole(String),

    /// The requested evaluation regime cannot deliver the requested accuracy.
    #[error("regime: {0}")]
    Regime(String),

    /// Argument outside the operation's domain.
    #[error("domain: {0}")]
    Domain(String),

    /// A root or ratio bracket does not contain a sign change.
    #[error("bracket: {0}")]
    Bracket(String),

    /// Snapshot pair rejected because it fails the compatibility condition.
    #[error("incompatible snapshots: residual {residual:e} exceeds tolerance {tolerance:e}")]
    Incompatible { residual: f64, tolerance: f64 },

    /// A Liouville chain would need more precision than the configured budget.
    #[error("chain depth {depth} infeasible: needs about {required_bits} bits of precision (budget {budget_bits})")]
    DepthInfeasible {
        depth: usize,
        required_bits: u64,
        budget_bits: u64,
    },

    /// Parameter validation failure.
    #[error("invalid parameter: {0}")]
    Invalid(String),

    /// Malformed grid or report file.
    #[error("format: {0}")]
    Format(String),

    #[error("internal: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures of the numerical regime (inadmissible orders, precision
    /// limits) as opposed to malformed input.
    pub fn is_numeric_regime(&self) -> bool {
        matches!(
            self,
            Error::Pole(_) | Error::Regime(_) | Error::DepthInfeasible { .. } | Error::Incompatible { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
