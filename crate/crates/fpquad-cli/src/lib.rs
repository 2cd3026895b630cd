//! Harness library behind the `fpquad` binary: builtin integrand registry,
//! experiment configuration, sweep execution, and CSV/JSON emission.

// validation guards are written as `!(x < y)` so that NaN inputs fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod output;
pub mod registry;

use thiserror::Error;

/// Harness errors, split by the exit code they map to: validation problems
/// exit with 1, numerical failures with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<fpquad::Error> for CliError {
    fn from(err: fpquad::Error) -> Self {
        use fpquad::Error::*;
        match err {
            SingularityOutsideInterval { .. }
            | LayoutConstraint { .. }
            | InvalidParameter(_)
            | EnumerationGuard { .. }
            | UnsupportedWeight(_)
            | DuplicateNodes(_)
            | UnsupportedReference(_) => CliError::Validation(err.to_string()),
            NodeAtSingularity { .. } | EigenNoConvergence | ComplexEvaluation { .. } | EiPole => {
                CliError::Numerical(err.to_string())
            }
        }
    }
}
