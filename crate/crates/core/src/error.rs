use thiserror::Error;

/// Broad failure category, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Budget,
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomials live over different variable registries")]
    RegistryMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("negative exponent in `{0}` where a polynomial is required")]
    NotPolynomial(String),
    #[error("invalid triangulation: {0}")]
    Triangulation(String),
    #[error("inconsistent identification cycle at tetrahedron {tet}, point {point:?}: {detail}")]
    CycleInconsistency {
        tet: usize,
        point: [u32; 4],
        detail: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("Groebner budget exceeded ({limit}): {steps} reduction steps, basis size {basis}, largest polynomial {max_terms} terms")]
    BudgetExceeded {
        limit: &'static str,
        steps: u64,
        basis: usize,
        max_terms: usize,
    },
    #[error("system is positive-dimensional after pinning: {0}")]
    PositiveDimensional(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::BudgetExceeded { .. } => ErrorKind::Budget,
            Error::PositiveDimensional(_) | Error::Numeric(_) => ErrorKind::Numeric,
            _ => ErrorKind::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
