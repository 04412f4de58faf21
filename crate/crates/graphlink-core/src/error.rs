//! Domain errors. Display output starts with the error name so front ends
//! can report it verbatim.

use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Geodesic endpoints lie in different components of the forest.
    DifferentComponents,
    /// Geodesic from a leaf (arrow or stub) to itself.
    SelfPathOnLeaf,
    /// Linking of an arrow with itself is undefined.
    SelfLinkingOfArrow,
    /// The splice compatibility equations do not hold. Each pair records the
    /// declared multiplicity and the linking-weighted sum it must equal.
    IncompatibleMultiplicities {
        arrow1: String,
        declared1: BigInt,
        required1: BigInt,
        arrow2: String,
        declared2: BigInt,
        required2: BigInt,
    },
    /// Split was asked to cut something that is not an internal edge.
    NotAnInternalEdge { id: String },
    /// A presentation entry l(v,w)/alpha(w) failed to divide exactly.
    DivisibilityViolation { v: String, w: String },
    /// The rank count n + c - r - k - 1 came out negative.
    NegativeFreeRank { value: i64 },
    /// The operation needs at least one arrow.
    NoArrows,
    /// A sweep would evaluate more points than the configured budget.
    BudgetExceeded { points: BigInt, budget: u64 },
    /// Two points of one stratum produced different modules. This signals a
    /// bug in the form family, never an input problem.
    SignatureDeterminismViolation { detail: String },
    UnknownVertex { id: String },
    UnknownArrow { id: String },
    UnknownEdge { id: String },
    UnknownId { id: String },
    DuplicateId { id: String },
    /// A multiplicity assignment whose domain is not exactly the arrow set.
    MultiplicityDomainMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DifferentComponents => write!(f, "DifferentComponents"),
            Error::SelfPathOnLeaf => write!(f, "SelfPathOnLeaf"),
            Error::SelfLinkingOfArrow => write!(f, "SelfLinkingOfArrow"),
            Error::IncompatibleMultiplicities {
                arrow1,
                declared1,
                required1,
                arrow2,
                declared2,
                required2,
            } => write!(
                f,
                "IncompatibleMultiplicities: m({arrow1}) = {declared1} but the far side requires \
                 {required1}; m({arrow2}) = {declared2} but the far side requires {required2}"
            ),
            Error::NotAnInternalEdge { id } => write!(f, "NotAnInternalEdge: `{id}`"),
            Error::DivisibilityViolation { v, w } => {
                write!(f, "DivisibilityViolation: alpha({w}) does not divide l({v},{w})")
            }
            Error::NegativeFreeRank { value } => {
                write!(f, "NegativeFreeRank: n + c - r - k - 1 = {value}")
            }
            Error::NoArrows => write!(f, "NoArrows: the diagram has no arrows"),
            Error::BudgetExceeded { points, budget } => {
                write!(f, "BudgetExceeded: sweep needs {points} evaluations, budget is {budget}")
            }
            Error::SignatureDeterminismViolation { detail } => {
                write!(f, "SignatureDeterminismViolation: {detail}")
            }
            Error::UnknownVertex { id } => write!(f, "UnknownVertex: `{id}`"),
            Error::UnknownArrow { id } => write!(f, "UnknownArrow: `{id}`"),
            Error::UnknownEdge { id } => write!(f, "UnknownEdge: `{id}`"),
            Error::UnknownId { id } => write!(f, "UnknownId: `{id}`"),
            Error::DuplicateId { id } => write!(f, "DuplicateId: `{id}`"),
            Error::MultiplicityDomainMismatch => write!(
                f,
                "MultiplicityDomainMismatch: assignment domain differs from the arrow set"
            ),
        }
    }
}

impl core::error::Error for Error {}
