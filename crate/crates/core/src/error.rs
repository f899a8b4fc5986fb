use serde_json::Value;
use thiserror::Error;

/// Every failure the engine can report.
///
/// Variants are grouped by how a caller should react: malformed input,
/// configurations outside what the engine knows how to evaluate, negative
/// verdicts, and internal consistency failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid expression: {0}")]
    InvalidExpression(String),

    #[error("{0} is out of range")]
    OutOfRange(String),

    #[error("extended-catalog summand present: {0}")]
    ExtendedCatalog(String),

    #[error("Euler class is not primitive (divisibility {content})")]
    NotPrimitive { content: String },

    /// The total space would not be simply-connected; carries the cokernel
    /// `Z^k / im(E)` that computes its fundamental group.
    #[error("Euler classes do not extend to a basis (fundamental group Z^{free_rank} + torsion {torsion:?})")]
    NotBasis { free_rank: usize, torsion: Vec<String> },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("connected-sum side condition d1 = ±1 mod d2 not met (d1 = {d1}, d2 = {d2})")]
    SideCondition { d1: String, d2: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("catalog defect: {0}")]
    CatalogDefect(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::InvalidProfile(_) => "invalid_profile",
            Error::InvalidExpression(_) => "invalid_expression",
            Error::OutOfRange(_) => "out_of_range",
            Error::ExtendedCatalog(_) => "extended_catalog",
            Error::NotPrimitive { .. } => "not_primitive",
            Error::NotBasis { .. } => "not_basis",
            Error::Unsupported(_) => "unsupported",
            Error::SideCondition { .. } => "side_condition",
            Error::Infeasible(_) => "infeasible",
            Error::CatalogDefect(_) => "catalog_defect",
        }
    }

    /// Structured detail for error objects; `Null` when the message says it all.
    pub fn diagnostics(&self) -> Value {
        match self {
            Error::LengthMismatch { expected, actual } => {
                serde_json::json!({ "expected": expected, "actual": actual })
            }
            Error::NotPrimitive { content } => serde_json::json!({ "divisibility": content }),
            Error::NotBasis { free_rank, torsion } => serde_json::json!({
                "fundamental_group": { "free_rank": free_rank, "torsion": torsion }
            }),
            Error::SideCondition { d1, d2 } => serde_json::json!({ "d1": d1, "d2": d2 }),
            _ => Value::Null,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
