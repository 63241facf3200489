//! Construction and analysis of the generic nominal subtyping relation of a
//! Java-like language, starting from nothing but the declared subclassing
//! hierarchy.
//!
//! The pipeline is:
//!
//! 1. [`hierarchy`] parses class declarations into a [`ClassTable`] and its
//!    subclassing order.
//! 2. [`operators`] provides the three poset operators: the partial product
//!    that pairs generic classes with type arguments, the wildcard operator,
//!    and the interval operator.
//! 3. [`construction`] iterates them into depth-bounded approximations of the
//!    subtyping order and decides subtyping of arbitrary terms recursively.
//! 4. [`analysis`] audits erasure / free-type adjointness, enumerates
//!    F-subtypes and F-supertypes, handles cofree types, and checks validity
//!    of types against (possibly F-bounded) declared bounds.
//! 5. [`cli`] ties these together behind the `genord` command.

pub mod analysis;
pub mod cli;
pub mod construction;
pub mod hierarchy;
pub mod operators;
pub mod poset;

pub use hierarchy::{parse_class_table, ClassDecl, ClassTable};
pub use poset::{BoundedPoset, ElementId, Poset};
