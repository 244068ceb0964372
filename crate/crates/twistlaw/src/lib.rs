//! Lawfulness of elliptic curves under quadratic twist.
//!
//! A curve E/K is lawful when its root number is +1 over every quadratic
//! extension of K. Lawfulness is local: this crate decides it place by place
//! and combines the local answers into a global verdict.

pub mod arith;
pub mod classify;
pub mod corpus;
pub mod localfield;
pub mod numberfield;
pub mod ratpoly;
pub mod residue;
pub mod tate;
pub mod weierstrass;

use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    #[error("not a prime: {0}")]
    CompositeP(String),
    #[error("precision {got} below the floor {floor}")]
    PrecisionTooLow { got: i64, floor: i64 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("residue characteristic is 2")]
    EvenResidueChar,
    #[error("argument is not a unit")]
    NonUnit,
    #[error("splitting tower degree {0} exceeds the cap")]
    DegreeOverflow(usize),
    #[error("norm subgroup index {index} differs from the extension degree {degree}")]
    NotAbelianSuspected { index: u64, degree: u64 },
    #[error("singular model (discriminant is zero)")]
    SingularModel,
    #[error("u is not invertible")]
    NonInvertibleU,
    #[error("defining polynomial is not squarefree")]
    NotSquarefree,
    #[error("defining polynomial degree {0} exceeds 8")]
    DegreeTooLarge(usize),
    #[error("defining polynomial irreducibility could not be verified: {0}")]
    IrreducibilityUnverified(String),
    #[error("factorization gave up on cofactor {0}")]
    FactorizationTimeout(String),
    #[error("verdict is not lawful")]
    NotLawful,
    #[error("{0}")]
    Validation(String),
    #[error("malformed fixture at line {line}: {msg}")]
    MalformedFixture { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CompositeP(_) => "CompositeP",
            Error::PrecisionTooLow { .. } => "PrecisionTooLow",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::Reducible(_) => "Reducible",
            Error::EvenResidueChar => "EvenResidueChar",
            Error::NonUnit => "NonUnit",
            Error::DegreeOverflow(_) => "DegreeOverflow",
            Error::NotAbelianSuspected { .. } => "NotAbelianSuspected",
            Error::SingularModel => "SingularModel",
            Error::NonInvertibleU => "NonInvertibleU",
            Error::NotSquarefree => "NotSquarefree",
            Error::DegreeTooLarge(_) => "DegreeTooLarge",
            Error::IrreducibilityUnverified(_) => "IrreducibilityUnverified",
            Error::FactorizationTimeout(_) => "FactorizationTimeout",
            Error::NotLawful => "NotLawful",
            Error::Validation(_) => "Validation",
            Error::MalformedFixture { .. } => "MalformedFixture",
        }
    }
}
