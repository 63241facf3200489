use serde::{Deserialize, Serialize};

use super::{free_type, AnalysisError};
use crate::construction::{Checker, SubtypingPoset, TypeTerm};
use crate::poset::{order_isomorphic, ElementId, Poset};

/// Whether a family of types, one per class, is ordered like the classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoCheck {
    pub elements: usize,
    /// Some bijection with the subclassing order exists.
    pub isomorphic: bool,
    /// The bijection sending each class to its own type works.
    pub canonical_map: bool,
}

impl IsoCheck {
    pub fn is_ok(&self) -> bool {
        self.isomorphic && self.canonical_map
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub free: IsoCheck,
    /// Present when cofree types are enabled.
    pub cofree: Option<IsoCheck>,
}

impl RestrictionReport {
    pub fn is_ok(&self) -> bool {
        self.free.is_ok() && self.cofree.as_ref().is_none_or(IsoCheck::is_ok)
    }
}

/// Orders `terms` (one per element of `classes`, in element order) by `le`
/// and compares the result with `classes`.
pub fn check_restriction(
    classes: &Poset,
    terms: &[TypeTerm],
    le: impl Fn(&TypeTerm, &TypeTerm) -> bool,
) -> IsoCheck {
    let labels = terms.iter().map(ToString::to_string).collect();
    let Ok(restricted) = Poset::from_fn(labels, |i, j| le(&terms[i], &terms[j])) else {
        return IsoCheck {
            elements: terms.len(),
            isomorphic: false,
            canonical_map: false,
        };
    };
    let identity: Vec<ElementId> = restricted.elements().collect();
    IsoCheck {
        elements: terms.len(),
        isomorphic: order_isomorphic(&restricted, classes),
        canonical_map: classes.embeds_into(&restricted, &identity),
    }
}

/// Restricts subtyping to the free types (read off `s`) and, when the
/// checker allows cofree types, to cofree types of generic classes together
/// with the non-generic classes (asked of the checker).
pub fn restriction_isomorphism_checks(
    s: &SubtypingPoset,
    checker: &Checker<'_>,
) -> Result<RestrictionReport, AnalysisError> {
    if s.depth() == 0 && checker.table().generic_classes().next().is_some() {
        return Err(AnalysisError::DepthTooSmall(0));
    }
    let classes = checker.classes().poset();
    let table = checker.table();
    let free_terms: Vec<TypeTerm> = classes
        .elements()
        .map(|c| free_type(table, classes.label(c)).expect("declared"))
        .collect();
    let free = check_restriction(classes, &free_terms, |a, b| {
        s.leq(a, b)
            .expect("free types are materialized from depth 1")
    });

    let cofree = checker.options().cofree.then(|| {
        let terms: Vec<TypeTerm> = classes
            .elements()
            .map(|c| {
                let name = classes.label(c);
                if table.is_generic(name) {
                    TypeTerm::cofree(name)
                } else {
                    TypeTerm::plain(name)
                }
            })
            .collect();
        check_restriction(classes, &terms, |a, b| checker.subtype_unchecked(a, b))
    });
    Ok(RestrictionReport { free, cofree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_subtyping, ArgMode, BuildOptions, QueryOptions};
    use crate::hierarchy::parse_class_table;

    const SAMPLE: &str = "class Number; class Integer extends Number; class String;
        class List<X>; class LinkedList<X> extends List; class Enum<X extends Enum<X>>;";

    #[test]
    fn free_and_cofree_restrictions_match_subclassing() {
        let table = parse_class_table(SAMPLE).unwrap();
        let s = build_subtyping(&table, &BuildOptions::new(1, ArgMode::Wildcards)).unwrap();
        let checker = Checker::new(&table, QueryOptions::default().with_cofree(true));
        let r = restriction_isomorphism_checks(&s, &checker).unwrap();
        assert!(r.is_ok(), "{r:?}");
        assert_eq!(r.free.elements, 8);
    }

    #[test]
    fn single_class_table() {
        let table = parse_class_table("class A").unwrap();
        let s = build_subtyping(&table, &BuildOptions::new(1, ArgMode::Wildcards)).unwrap();
        let checker = Checker::new(&table, QueryOptions::default().with_cofree(true));
        assert!(restriction_isomorphism_checks(&s, &checker)
            .unwrap()
            .is_ok());
    }

    #[test]
    fn corrupted_order_is_caught() {
        let table = parse_class_table(SAMPLE).unwrap();
        let s = build_subtyping(&table, &BuildOptions::new(1, ArgMode::Wildcards)).unwrap();
        let classes = table.subclassing();
        let terms: Vec<TypeTerm> = classes
            .poset()
            .elements()
            .map(|c| free_type(&table, classes.name(c)).unwrap())
            .collect();
        // Forget that LinkedList<?> is below List<?>.
        let ll: TypeTerm = "LinkedList<?>".parse().unwrap();
        let l: TypeTerm = "List<?>".parse().unwrap();
        let r = check_restriction(classes.poset(), &terms, |a, b| {
            !(a == &ll && b == &l) && s.leq(a, b).unwrap()
        });
        assert!(!r.isomorphic && !r.canonical_map);
    }
}
