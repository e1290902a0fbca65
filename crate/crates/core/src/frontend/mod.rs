//! Text formats, the process-term compiler, exhaustive sweeps and the command line.

pub mod cli;
pub mod formula_parser;
pub mod pes_format;
pub mod report;
pub mod suites;
pub mod sweep;
pub mod term;

use thiserror::Error;

use crate::pes::PesError;

pub use formula_parser::parse_formula;
pub use pes_format::{parse_pes, print_pes};
pub use sweep::{sweep_small_pes, SweepSpec};
pub use term::{compile_term, parse_term, ProcessTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}{source}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invalid {
        line: Option<usize>,
        source: PesError,
    },
    #[error("proposition {name} expects {expected} argument(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("sweep bounds exceeded: {0}")]
    BoundsExceeded(String),
}

impl FrontendError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        FrontendError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(line: usize, source: PesError) -> Self {
        FrontendError::Invalid {
            line: Some(line),
            source,
        }
    }
}
