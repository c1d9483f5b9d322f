use alloc::string::String;
use alloc::vec::Vec;

/// Errors produced by the hypercomplex core.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 1")]
    InvalidDimension,

    #[error("system `{system}`, cell (e{row}, e{col}): {reason}")]
    InvalidTable {
        system: String,
        /// 1-based row of the offending Cayley cell.
        row: usize,
        /// 1-based column of the offending Cayley cell.
        col: usize,
        reason: String,
    },

    #[error("system `{system}`: {reason}")]
    UnitMismatch { system: String, reason: String },

    #[error("system `{system}` has no unit element")]
    NoUnit { system: String },

    #[error("operands belong to different systems (`{left}` and `{right}`)")]
    SystemMismatch { left: String, right: String },

    #[error("expected {expected} coefficients, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{unpaired} non-real eigenvalue(s) could not be matched into conjugate pairs")]
    SpectralPairing { unpaired: usize },

    #[error("spectrum classification failed: {0}")]
    Classification(String),

    #[error("power series did not reach tolerance within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("method requires {expected}, got system `{found}`")]
    WrongSystem {
        expected: &'static str,
        found: String,
    },

    #[error("imaginary residue {residue:e} exceeds the consistency threshold")]
    ImaginaryResidue { residue: f64 },

    #[error("no system named `{name}`; available: {}", available.join(", "))]
    NotFound {
        name: String,
        available: Vec<String>,
    },

    #[error("duplicate system name `{0}`")]
    DuplicateName(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
