//! Error type shared by every module of the engine.

use alloc::string::String;
use core::fmt;

use crate::k0::K0Vector;

/// Everything that can go wrong while building or evaluating expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The expression text does not follow the grammar.
    Syntax { position: usize, message: String },
    /// A variety name or dimension is not supported.
    InvalidVariety(String),
    /// The atom exists in the grammar but not in this variety's catalog.
    NotInCatalog(String),
    /// A twist or multiplicity is outside the supported range.
    Overflow(String),
    /// Two expressions live on different varieties.
    VarietyMismatch,
    /// An empty interval intersection or failed cross-check: a rule bug.
    InternalInconsistency(String),
    /// A recursion exceeded its depth cap.
    RecursionCap,
    /// The pair is not exceptional in the strict-helix sheaf regime.
    NotExceptionalPair(String),
    /// The mutation result is not an atom of the catalog; carries its class.
    NotRepresentable { class: K0Vector, detail: String },
    /// Interval ranks prevented a verdict.
    Indeterminate(String),
    /// A dual basis failed its orthogonality check.
    OrthogonalityCheckFailed(String),
    /// The sheaf is not m-regular for the requested m.
    NotMRegular(i64),
    /// The regularity search found no regular value within the width.
    SearchExhausted { from: i64, to: i64 },
    /// The operation needs a different kind of variety.
    WrongVariety(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax { position, message } => {
                write!(f, "syntax error at position {}: {}", position, message)
            }
            Error::InvalidVariety(s) => write!(f, "invalid variety: {}", s),
            Error::NotInCatalog(s) => write!(f, "not in the catalog: {}", s),
            Error::Overflow(s) => write!(f, "out of range: {}", s),
            Error::VarietyMismatch => write!(f, "expressions live on different varieties"),
            Error::InternalInconsistency(s) => write!(f, "internal inconsistency: {}", s),
            Error::RecursionCap => write!(f, "recursion depth cap exceeded"),
            Error::NotExceptionalPair(s) => write!(f, "not an exceptional pair: {}", s),
            Error::NotRepresentable { class, detail } => {
                write!(f, "result not representable in the catalog ({}); class {}", detail, class)
            }
            Error::Indeterminate(s) => write!(f, "indeterminate: {}", s),
            Error::OrthogonalityCheckFailed(s) => write!(f, "orthogonality check failed: {}", s),
            Error::NotMRegular(m) => write!(f, "sheaf is not {}-regular", m),
            Error::SearchExhausted { from, to } => {
                write!(f, "no regular value found in [{}, {}]", from, to)
            }
            Error::WrongVariety(s) => write!(f, "wrong variety: {}", s),
        }
    }
}

impl core::error::Error for Error {}
