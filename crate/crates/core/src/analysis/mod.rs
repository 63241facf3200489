//! Audits and enumerations over the constructed order: the erasure / free
//! type correspondence, F-subtypes and F-supertypes, restrictions to free and
//! cofree types, and validity of types under declared bounds.

mod adjunction;
mod fixpoints;
mod restriction;
mod validity;

use thiserror::Error;

use crate::construction::{TypeArg, TypeTerm};
use crate::hierarchy::ClassTable;

pub use adjunction::{check_adjunction, AdjunctionReport, AdjunctionViolation, Direction};
pub use fixpoints::{enumerate_fixpoints, f_subtypes, f_supertypes, FixpointReport};
pub use restriction::{
    check_restriction, restriction_isomorphism_checks, IsoCheck, RestrictionReport,
};
pub use validity::{validity, BoundViolation, ValidityVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("class `{0}` is not generic")]
    NotGeneric(String),
    #[error("restriction checks need depth at least 1, got {0}")]
    DepthTooSmall(usize),
}

/// The class a type is built from.
pub fn erase(t: &TypeTerm) -> &str {
    t.class()
}

/// `C<?>` for a generic class, the class itself otherwise.
pub fn free_type(table: &ClassTable, class: &str) -> Result<TypeTerm, AnalysisError> {
    match table.arity(class) {
        None => Err(AnalysisError::UnknownClass(class.to_owned())),
        Some(0) => Ok(TypeTerm::plain(class)),
        Some(_) => Ok(TypeTerm::applied(class, TypeArg::unbounded())),
    }
}
