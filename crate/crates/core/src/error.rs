use thiserror::Error;

use crate::algebra::StructureTuple;

/// Errors raised by the library operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Shapes do not fit together (matrix sizes, tuple lengths, vector lengths).
    #[error("structural error: {0}")]
    Structural(String),

    /// A group element is singular or otherwise unusable.
    #[error("invalid group element: {0}")]
    InvalidElement(String),

    /// The operation is undefined at this input (typically the zero tuple).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("unknown name: {0}")]
    Lookup(String),

    /// Parameter search finished without a sub-tolerance residual.
    #[error("no parameter in [{lo}, {hi}] reaches tolerance {tol:e}; best value {best_value} has residual {best_residual:e}")]
    NotFound {
        lo: f64,
        hi: f64,
        tol: f64,
        best_value: f64,
        best_residual: f64,
    },

    /// The flow integrator could not continue. The last accepted state is attached.
    #[error("integrator failure at step {step}: {reason}")]
    IntegratorFailure {
        step: usize,
        reason: String,
        last_good: Box<StructureTuple>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
