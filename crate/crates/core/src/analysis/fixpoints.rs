use serde::{Deserialize, Serialize};

use super::{free_type, AnalysisError};
use crate::construction::{Checker, SubtypingPoset, TypeArg, TypeTerm};
use crate::poset::ElementId;

/// F-subtypes and F-supertypes of one generic class within a materialized
/// level, with the extremal elements of each set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixpointReport {
    pub class: String,
    pub depth: usize,
    pub f_subtypes: Vec<TypeTerm>,
    pub maximal_f_subtypes: Vec<TypeTerm>,
    pub minimal_f_subtypes: Vec<TypeTerm>,
    pub f_supertypes: Vec<TypeTerm>,
    pub maximal_f_supertypes: Vec<TypeTerm>,
    pub minimal_f_supertypes: Vec<TypeTerm>,
    /// Types that are both, i.e. equivalent to `F<Ty>`.
    pub fixed_points: Vec<TypeTerm>,
    pub free_type: TypeTerm,
    pub free_type_is_f_subtype: bool,
}

fn generic(checker: &Checker<'_>, class: &str) -> Result<(), AnalysisError> {
    match checker.table().arity(class) {
        None => Err(AnalysisError::UnknownClass(class.to_owned())),
        Some(0) => Err(AnalysisError::NotGeneric(class.to_owned())),
        Some(_) => Ok(()),
    }
}

fn apply_to_self(class: &str, ty: &TypeTerm) -> TypeTerm {
    TypeTerm::applied(class, TypeArg::exact(ty.clone()))
}

fn scan(
    s: &SubtypingPoset,
    checker: &Checker<'_>,
    class: &str,
    keep: impl Fn(&TypeTerm, &TypeTerm) -> bool,
) -> Result<Vec<ElementId>, AnalysisError> {
    generic(checker, class)?;
    Ok(s.elements()
        .filter(|&e| {
            let ty = s.term(e);
            keep(ty, &apply_to_self(class, ty))
        })
        .collect())
}

/// Elements `Ty` of `s` with `Ty <: F<Ty>`.
pub fn f_subtypes(
    s: &SubtypingPoset,
    checker: &Checker<'_>,
    class: &str,
) -> Result<Vec<TypeTerm>, AnalysisError> {
    let ids = scan(s, checker, class, |ty, fty| {
        checker.subtype_unchecked(ty, fty)
    })?;
    Ok(ids.into_iter().map(|e| s.term(e).clone()).collect())
}

/// Elements `Ty` of `s` with `F<Ty> <: Ty`.
pub fn f_supertypes(
    s: &SubtypingPoset,
    checker: &Checker<'_>,
    class: &str,
) -> Result<Vec<TypeTerm>, AnalysisError> {
    let ids = scan(s, checker, class, |ty, fty| {
        checker.subtype_unchecked(fty, ty)
    })?;
    Ok(ids.into_iter().map(|e| s.term(e).clone()).collect())
}

fn extremes(s: &SubtypingPoset, set: &[ElementId]) -> (Vec<TypeTerm>, Vec<TypeTerm>) {
    let p = s.poset();
    let max = set
        .iter()
        .filter(|&&a| !set.iter().any(|&b| p.lt(a, b)))
        .map(|&a| s.term(a).clone())
        .collect();
    let min = set
        .iter()
        .filter(|&&a| !set.iter().any(|&b| p.lt(b, a)))
        .map(|&a| s.term(a).clone())
        .collect();
    (max, min)
}

pub fn enumerate_fixpoints(
    s: &SubtypingPoset,
    checker: &Checker<'_>,
    class: &str,
) -> Result<FixpointReport, AnalysisError> {
    let subs = scan(s, checker, class, |ty, fty| {
        checker.subtype_unchecked(ty, fty)
    })?;
    let sups = scan(s, checker, class, |ty, fty| {
        checker.subtype_unchecked(fty, ty)
    })?;
    let (maximal_f_subtypes, minimal_f_subtypes) = extremes(s, &subs);
    let (maximal_f_supertypes, minimal_f_supertypes) = extremes(s, &sups);
    let fixed_points = subs
        .iter()
        .filter(|e| sups.contains(e))
        .map(|&e| s.term(e).clone())
        .collect();
    let free = free_type(checker.table(), class)?;
    let free_type_is_f_subtype = checker.subtype_unchecked(&free, &apply_to_self(class, &free));
    let terms = |ids: &[ElementId]| ids.iter().map(|&e| s.term(e).clone()).collect();
    Ok(FixpointReport {
        class: class.to_owned(),
        depth: s.depth(),
        f_subtypes: terms(&subs),
        maximal_f_subtypes,
        minimal_f_subtypes,
        f_supertypes: terms(&sups),
        maximal_f_supertypes,
        minimal_f_supertypes,
        fixed_points,
        free_type: free,
        free_type_is_f_subtype,
    })
}
