//! The partial poset product, the wildcard operator and the interval operator.
//!
//! All three are pure functions from posets to new posets. Their outputs keep a
//! side table describing what each element is made of (a class, a pair, or an
//! interval over the input) so that callers can name the elements.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{ElementId, LawReport, Poset, PosetError, Relation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("wildcards need a bounded poset: {0}")]
    NotBounded(PosetError),
    #[error("generic subset is not part of the class poset: {0}")]
    UnknownElement(PosetError),
    #[error("generic subset lists {0} twice")]
    DuplicateGeneric(String),
    #[error("product order is not a partial order: {0}")]
    LawViolation(LawReport),
}

/// Where an element of a partial product comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductElement {
    /// An element of the class poset outside the generic subset.
    Plain(ElementId),
    /// A generic class paired with an argument.
    Pair { class: ElementId, arg: ElementId },
}

#[derive(Clone, Debug)]
pub struct Product {
    pub poset: Poset,
    pub elements: Vec<ProductElement>,
}

/// Pairs every element of `generic` with every element of `args`, keeps the
/// remaining elements of `classes` unpaired, and orders the result:
///
/// * `c <= c'` iff `c <= c'` in `classes`;
/// * `(g, a) <= (g', a')` iff `g <= g'` and `a <= a'`;
/// * `(g, a) <= c'` iff `g <= c'`;
/// * `c <= (g', a')` iff `c <= g'`.
///
/// The result is law-checked; inputs where a plain class sits strictly between
/// two generic classes can break transitivity and are reported as
/// [`OperatorError::LawViolation`].
pub fn partial_product(
    classes: &Poset,
    generic: &[ElementId],
    args: &Poset,
) -> Result<Product, OperatorError> {
    let mut is_generic = vec![false; classes.len()];
    for &g in generic {
        let idx = classes
            .id(g.index())
            .map_err(OperatorError::UnknownElement)?
            .index();
        if std::mem::replace(&mut is_generic[idx], true) {
            return Err(OperatorError::DuplicateGeneric(classes.label(g).to_owned()));
        }
    }
    let plain: Vec<ElementId> = classes
        .elements()
        .filter(|c| !is_generic[c.index()])
        .collect();
    let m = args.len();
    let pair_base = plain.len();
    let block = |gi: usize| pair_base + gi * m;

    let mut elements: Vec<ProductElement> =
        plain.iter().map(|&c| ProductElement::Plain(c)).collect();
    let mut labels: Vec<String> = plain.iter().map(|&c| classes.label(c).to_owned()).collect();
    for &g in generic {
        for a in args.elements() {
            elements.push(ProductElement::Pair { class: g, arg: a });
            labels.push(format!("{}<{}>", classes.label(g), args.label(a)));
        }
    }

    let mut rel = Relation::new(labels);
    for (i, &c) in plain.iter().enumerate() {
        for (j, &c2) in plain.iter().enumerate() {
            if classes.le(c, c2) {
                rel.set(i, j);
            }
        }
        for (gi, &g2) in generic.iter().enumerate() {
            if classes.le(c, g2) {
                for a2 in 0..m {
                    rel.set(i, block(gi) + a2);
                }
            }
        }
    }
    for (gi, &g) in generic.iter().enumerate() {
        for a in args.elements() {
            let x = block(gi) + a.index();
            for (j, &c2) in plain.iter().enumerate() {
                if classes.le(g, c2) {
                    rel.set(x, j);
                }
            }
            for (gj, &g2) in generic.iter().enumerate() {
                if classes.le(g, g2) {
                    for a2 in args.up_set(a) {
                        rel.set(x, block(gj) + a2.index());
                    }
                }
            }
        }
    }

    let poset = Poset::from_relation(rel).map_err(|e| match e {
        PosetError::NotAPartialOrder(report) => OperatorError::LawViolation(report),
        other => unreachable!("from_relation only fails on laws: {other}"),
    })?;
    Ok(Product { poset, elements })
}

/// Syntactic form of a type argument. Arguments are always stored as
/// intervals; the form only affects printing and, under
/// [`WildcardPolicy::Paper`], distinguishes `? super Object` from `Object`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgKind {
    /// `T`, i.e. `[T, T]`
    Exact,
    /// `?`, i.e. `[Null, Object]`
    Unbounded,
    /// `? extends T`, i.e. `[Null, T]`
    Extends,
    /// `? super T`, i.e. `[T, Object]`
    Super,
    /// `[S, T]`
    Interval,
}

impl ArgKind {
    /// The form an interval takes when nothing else is known about it.
    pub fn canonical(lower_is_bottom: bool, upper_is_top: bool, degenerate: bool) -> Self {
        match (degenerate, lower_is_bottom, upper_is_top) {
            (true, _, _) => ArgKind::Exact,
            (false, true, true) => ArgKind::Unbounded,
            (false, true, false) => ArgKind::Extends,
            (false, false, true) => ArgKind::Super,
            (false, false, false) => ArgKind::Interval,
        }
    }

    fn rank(self) -> u8 {
        u8::from(self != ArgKind::Exact)
    }

    pub fn render(self, lower: &str, upper: &str) -> String {
        match self {
            ArgKind::Exact => upper.to_owned(),
            ArgKind::Unbounded => "?".to_owned(),
            ArgKind::Extends => format!("? extends {upper}"),
            ArgKind::Super => format!("? super {lower}"),
            ArgKind::Interval => format!("[{lower}, {upper}]"),
        }
    }
}

/// An interval `[lower, upper]` over the input poset of [`wildcards`] or
/// [`intervals`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntervalElement {
    pub lower: ElementId,
    pub upper: ElementId,
    pub kind: ArgKind,
}

#[derive(Clone, Debug)]
pub struct ArgumentPoset {
    pub poset: Poset,
    pub args: Vec<IntervalElement>,
}

/// Which wildcard arguments are identified with each other.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WildcardPolicy {
    /// `? extends Object` and `? super Null` become `?`; `? extends Null`
    /// becomes `Null`. Yields `3n - 2` arguments.
    #[default]
    Paper,
    /// Quotient by mutual containment, which additionally identifies
    /// `? super Object` with `Object`. Yields `3n - 3` arguments.
    Semantic,
}

impl fmt::Display for WildcardPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WildcardPolicy::Paper => "paper",
            WildcardPolicy::Semantic => "semantic",
        })
    }
}

/// For each element `T` of a bounded poset, builds `? extends T`, `? super T`
/// and `T`, identifies them according to `policy`, and orders the result by
/// containment. The exact argument `T` is contained in both wildcards over
/// `T`.
pub fn wildcards(s: &Poset, policy: WildcardPolicy) -> Result<ArgumentPoset, OperatorError> {
    let top = s
        .greatest()
        .ok_or(OperatorError::NotBounded(PosetError::NotBounded("top")))?;
    let bottom = s
        .least()
        .ok_or(OperatorError::NotBounded(PosetError::NotBounded("bottom")))?;
    let mut args = Vec::with_capacity(3 * s.len());
    for t in s.elements() {
        args.push(IntervalElement {
            lower: t,
            upper: t,
            kind: ArgKind::Exact,
        });
        if t != bottom {
            args.push(IntervalElement {
                lower: bottom,
                upper: t,
                kind: if t == top {
                    ArgKind::Unbounded
                } else {
                    ArgKind::Extends
                },
            });
            let keep_super = t != top || policy == WildcardPolicy::Paper;
            if keep_super {
                args.push(IntervalElement {
                    lower: t,
                    upper: top,
                    kind: ArgKind::Super,
                });
            }
        }
    }
    Ok(order_by_containment(s, args))
}

/// One argument `[S, T]` per comparable pair `S <= T`, ordered by containment:
/// `[S, T] ⊑ [U, V]` iff `U <= S` and `T <= V`.
pub fn intervals(s: &Poset) -> ArgumentPoset {
    let top = s.greatest();
    let bottom = s.least();
    let args = s
        .comparable_pairs()
        .into_iter()
        .map(|(lo, hi)| IntervalElement {
            lower: lo,
            upper: hi,
            kind: ArgKind::canonical(Some(lo) == bottom, Some(hi) == top, lo == hi),
        })
        .collect();
    order_by_containment(s, args)
}

fn order_by_containment(s: &Poset, args: Vec<IntervalElement>) -> ArgumentPoset {
    let labels: Vec<String> = args
        .iter()
        .map(|a| a.kind.render(s.label(a.lower), s.label(a.upper)))
        .collect();

    // Index arguments by lower end so each row only visits candidates whose
    // lower end is below ours.
    let mut by_lower: Vec<Vec<usize>> = vec![Vec::new(); s.len()];
    for (j, a) in args.iter().enumerate() {
        by_lower[a.lower.index()].push(j);
    }
    let mut rel = Relation::new(labels);
    for (i, x) in args.iter().enumerate() {
        let hi_up = s.up_row(x.upper);
        for lo in s.down_set(x.lower) {
            for &j in &by_lower[lo.index()] {
                let y = &args[j];
                if hi_up[y.upper.index() / 64] >> (y.upper.index() % 64) & 1 == 0 {
                    continue;
                }
                let same = x.lower == y.lower && x.upper == y.upper;
                if !same || x.kind.rank() <= y.kind.rank() {
                    rel.set(i, j);
                }
            }
        }
    }
    let poset = Poset::from_relation(rel).expect("containment of intervals is a partial order");
    ArgumentPoset { poset, args }
}

impl ArgumentPoset {
    /// The element for interval `[lower, upper]` with the given form, if any.
    pub fn find(&self, lower: ElementId, upper: ElementId, kind: ArgKind) -> Option<ElementId> {
        self.args
            .iter()
            .position(|a| a.lower == lower && a.upper == upper && a.kind == kind)
            .map(|i| self.poset.id(i).expect("in range"))
    }

    /// Elements containing exactly the interval `[lower, upper]`, in any form.
    pub fn find_interval(&self, lower: ElementId, upper: ElementId) -> Vec<ElementId> {
        self.args
            .iter()
            .enumerate()
            .filter(|(_, a)| a.lower == lower && a.upper == upper)
            .map(|(i, _)| self.poset.id(i).expect("in range"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn chain(n: usize) -> Poset {
        Poset::chain((0..n).map(|i| format!("t{i}")).collect())
    }

    /// Brute-force count of distinct intervals `[⊥,T]`, `[T,⊤]`, `[T,T]` on a
    /// bounded poset, i.e. wildcards modulo mutual containment.
    fn distinct_wildcard_intervals(p: &Poset) -> usize {
        let (top, bot) = (p.greatest().unwrap(), p.least().unwrap());
        let mut set = HashSet::new();
        for t in p.elements() {
            set.insert((bot, t));
            set.insert((t, top));
            set.insert((t, t));
        }
        set.len()
    }

    #[test]
    fn wildcard_cardinalities_on_chains() {
        assert_eq!(
            wildcards(&chain(2), WildcardPolicy::Paper)
                .unwrap()
                .poset
                .len(),
            4
        );
        assert_eq!(
            wildcards(&chain(3), WildcardPolicy::Paper)
                .unwrap()
                .poset
                .len(),
            7
        );
        assert_eq!(distinct_wildcard_intervals(&chain(3)), 6);
        assert_eq!(
            wildcards(&chain(3), WildcardPolicy::Semantic)
                .unwrap()
                .poset
                .len(),
            6
        );
    }

    #[test]
    fn exact_is_contained_in_both_wildcards() {
        let s = chain(4);
        let w = wildcards(&s, WildcardPolicy::Paper).unwrap();
        let (top, bot) = (s.greatest().unwrap(), s.least().unwrap());
        for t in s.elements() {
            let exact = w.find(t, t, ArgKind::Exact).unwrap();
            let ext = w.find_interval(bot, t);
            let sup = w.find_interval(t, top);
            for x in ext.into_iter().chain(sup) {
                assert!(
                    w.poset.le(exact, x),
                    "{} ⊑ {}",
                    w.poset.label(exact),
                    w.poset.label(x)
                );
            }
        }
        let q = w.find(bot, top, ArgKind::Unbounded).unwrap();
        assert_eq!(w.poset.greatest(), Some(q));
        assert_eq!(w.poset.label(q), "?");
    }

    #[test]
    fn paper_policy_keeps_super_top_above_top() {
        let s = chain(2);
        let w = wildcards(&s, WildcardPolicy::Paper).unwrap();
        let top = s.greatest().unwrap();
        let exact = w.find(top, top, ArgKind::Exact).unwrap();
        let sup = w.find(top, top, ArgKind::Super).unwrap();
        assert!(w.poset.lt(exact, sup));
        assert_eq!(w.poset.label(sup), "? super t1");
        assert!(wildcards(&s, WildcardPolicy::Semantic)
            .unwrap()
            .find(top, top, ArgKind::Super)
            .is_none());
    }

    #[test]
    fn wildcards_need_bounds() {
        let err = wildcards(
            &Poset::antichain(vec!["a".into(), "b".into()]),
            WildcardPolicy::Paper,
        )
        .unwrap_err();
        assert!(matches!(err, OperatorError::NotBounded(_)));
    }

    #[test]
    fn intervals_on_a_chain() {
        let s = chain(3);
        let i = intervals(&s);
        assert_eq!(i.poset.len(), 6);
        let ids: Vec<_> = s.elements().collect();
        let mid = i.find_interval(ids[1], ids[1])[0];
        let ext = i.find_interval(ids[0], ids[1])[0];
        let sup = i.find_interval(ids[1], ids[2])[0];
        let all = i.find_interval(ids[0], ids[2])[0];
        assert!(i.poset.le(mid, ext) && i.poset.le(mid, sup) && i.poset.le(ext, all));
        assert!(!i.poset.le(ext, sup) && !i.poset.le(sup, ext));
        assert!(i.poset.check_laws().is_ok());
    }

    #[test]
    fn product_with_no_generics_is_the_class_poset() {
        let c = Poset::chain(vec!["Object".into()]);
        let p = partial_product(&c, &[], &chain(3)).unwrap();
        assert_eq!(p.poset, c);
    }

    #[test]
    fn product_of_list_with_single_argument() {
        let c = Poset::chain(vec!["Null".into(), "List".into(), "Object".into()]);
        let list = c.find_label("List").unwrap();
        let a = Poset::chain(vec!["a".into()]);
        let p = partial_product(&c, &[list], &a).unwrap();
        assert_eq!(p.poset.labels(), &["Null", "Object", "List<a>"]);
        let covers: Vec<_> = p
            .poset
            .covers()
            .iter()
            .map(|&(x, y)| (p.poset.label(x), p.poset.label(y)))
            .collect();
        assert_eq!(covers, vec![("Null", "List<a>"), ("List<a>", "Object")]);
    }

    #[test]
    fn plain_class_between_generics_breaks_transitivity() {
        // Null < G < W < L < Object, with W non-generic.
        let c = Poset::chain(vec![
            "Null".into(),
            "G".into(),
            "W".into(),
            "L".into(),
            "Object".into(),
        ]);
        let g = c.find_label("G").unwrap();
        let l = c.find_label("L").unwrap();
        let err = partial_product(&c, &[g, l], &chain(2)).unwrap_err();
        match err {
            OperatorError::LawViolation(r) => {
                assert!(matches!(
                    r.violations[0],
                    crate::poset::LawViolation::Transitivity { .. }
                ))
            }
            other => panic!("{other:?}"),
        }
    }
}
