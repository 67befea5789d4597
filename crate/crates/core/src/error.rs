use thiserror::Error;

use crate::lattice::{DivisorClass, SurfaceModel};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("divisor classes live on different surfaces ({0} vs {1})")]
    ModelMismatch(SurfaceModel, SurfaceModel),

    #[error("invalid surface model: {0}")]
    InvalidModel(String),

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("expected {expected} coefficients, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("class {0} is not effective")]
    NotEffective(Box<DivisorClass>),

    #[error("class {class} has fixed components along {}", fmt_lines(.lines))]
    HasFixedPart {
        class: Box<DivisorClass>,
        lines: Vec<DivisorClass>,
    },

    #[error("class {0} has C^2 <= 0 and is neither a line nor a conic; no smooth connected member")]
    NotIrreducibleCriterion(Box<DivisorClass>),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("invalid threefold context: {0}")]
    InvalidContext(String),

    /// A computed quantity violated an identity that must hold on these
    /// lattices. Never caused by user input.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

fn fmt_lines(lines: &[DivisorClass]) -> String {
    lines
        .iter()
        .map(|l| format!("[{l}]"))
        .collect::<Vec<_>>()
        .join(" ")
}
