//! Finite partial orders.
//!
//! A [`Poset`] is immutable once built. It stores its Hasse diagram (the cover
//! pairs) together with the reflexive-transitive closure as dense bit rows, so
//! `a <= b` is a single bit lookup. Every constructor reduces whatever edge set
//! it is given to the transitive reduction, which keeps cover counts and DOT
//! output canonical.

mod bits;
mod iso;

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use bits::iter_ones;
use bits::{is_subset, BitMatrix};
pub use iso::{find_isomorphism, order_isomorphic};

/// Opaque handle to an element of a particular poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(usize);

impl ElementId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("element {0} not found")]
    ElementNotFound(usize),
    #[error("{labels} labels supplied for {elements} elements")]
    LabelCount { labels: usize, elements: usize },
    #[error("edge set contains a cycle through {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(LawReport),
    #[error("poset has no {0} element")]
    NotBounded(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum LawViolation {
    Reflexivity { a: String },
    Antisymmetry { a: String, b: String },
    Transitivity { a: String, b: String, c: String },
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawViolation::Reflexivity { a } => write!(f, "reflexivity: not {a} <= {a}"),
            LawViolation::Antisymmetry { a, b } => {
                write!(f, "antisymmetry: {a} <= {b} <= {a} with {a} != {b}")
            }
            LawViolation::Transitivity { a, b, c } => {
                write!(f, "transitivity: {a} <= {b} <= {c} but not {a} <= {c}")
            }
        }
    }
}

/// Outcome of a law check. Only the first [`LawReport::MAX_LISTED`] violations
/// are kept; `total` counts all of them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub elements: usize,
    pub triples_checked: u64,
    pub violations: Vec<LawViolation>,
    pub total: usize,
}

impl LawReport {
    pub const MAX_LISTED: usize = 32;

    pub fn is_ok(&self) -> bool {
        self.total == 0
    }

    fn push(&mut self, v: LawViolation) {
        if self.violations.len() < Self::MAX_LISTED {
            self.violations.push(v);
        }
        self.total += 1;
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "no violations over {} elements", self.elements);
        }
        write!(f, "{} violation(s)", self.total)?;
        for v in &self.violations {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

/// A binary relation on `0..n` that is not yet known to be a partial order.
#[derive(Clone)]
pub struct Relation {
    labels: Vec<String>,
    matrix: BitMatrix,
}

impl Relation {
    /// The empty relation.
    pub fn new(labels: Vec<String>) -> Self {
        let matrix = BitMatrix::new(labels.len());
        Self { labels, matrix }
    }

    pub fn from_fn(labels: Vec<String>, mut le: impl FnMut(usize, usize) -> bool) -> Self {
        let mut rel = Self::new(labels);
        let n = rel.len();
        for a in 0..n {
            for b in 0..n {
                if le(a, b) {
                    rel.matrix.set(a, b);
                }
            }
        }
        rel
    }

    /// Reflexive-transitive closure of an arbitrary (possibly cyclic) edge set.
    pub fn closure_of_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PosetError> {
        let mut rel = Self::new(labels);
        let n = rel.len();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(PosetError::ElementNotFound(a.max(b)));
            }
            rel.matrix.set(a, b);
        }
        for i in 0..n {
            rel.matrix.set(i, i);
        }
        // Warshall over bit rows.
        for k in 0..n {
            for i in 0..n {
                if rel.matrix.get(i, k) {
                    rel.matrix.or_row_into(k, i);
                }
            }
        }
        Ok(rel)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn set(&mut self, a: usize, b: usize) {
        self.matrix.set(a, b);
    }

    pub fn holds(&self, a: usize, b: usize) -> bool {
        self.matrix.get(a, b)
    }

    /// Exhaustive reflexivity / antisymmetry / transitivity check.
    pub fn check_laws(&self) -> LawReport {
        check_matrix(&self.matrix, &self.labels)
    }
}

fn check_matrix(m: &BitMatrix, labels: &[String]) -> LawReport {
    let n = m.len();
    let mut report = LawReport {
        elements: n,
        ..LawReport::default()
    };
    for (a, label) in labels.iter().enumerate() {
        if !m.get(a, a) {
            report.push(LawViolation::Reflexivity { a: label.clone() });
        }
    }
    for a in 0..n {
        for b in iter_ones(m.row(a)) {
            report.triples_checked += n as u64;
            if b != a && a < b && m.get(b, a) {
                report.push(LawViolation::Antisymmetry {
                    a: labels[a].clone(),
                    b: labels[b].clone(),
                });
            }
            if !is_subset(m.row(b), m.row(a)) {
                for c in iter_ones(m.row(b)) {
                    if !m.get(a, c) {
                        report.push(LawViolation::Transitivity {
                            a: labels[a].clone(),
                            b: labels[b].clone(),
                            c: labels[c].clone(),
                        });
                    }
                }
            }
        }
    }
    report
}

/// A finite partial order, immutable after construction.
#[derive(Clone)]
pub struct Poset {
    labels: Vec<String>,
    covers: Vec<(ElementId, ElementId)>,
    up: BitMatrix,
    down: BitMatrix,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.up == other.up
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.labels)
            .field(
                "covers",
                &self
                    .covers
                    .iter()
                    .map(|&(a, b)| (self.label(a), self.label(b)))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl Poset {
    /// Builds the order generated by `edges` (pairs `(lower, upper)`).
    ///
    /// Redundant edges are dropped; a cycle is rejected.
    pub fn from_covers(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PosetError> {
        let n = labels.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n {
                return Err(PosetError::ElementNotFound(a));
            }
            if b >= n {
                return Err(PosetError::ElementNotFound(b));
            }
            succ[a].push(b);
        }

        // Kahn's algorithm from the maximal elements downwards.
        let mut outdeg: Vec<usize> = succ.iter().map(Vec::len).collect();
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, s) in succ.iter().enumerate() {
            for &b in s {
                pred[b].push(a);
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| outdeg[i] == 0).collect();
        let mut up = BitMatrix::new(n);
        let mut done = 0;
        while let Some(i) = ready.pop() {
            done += 1;
            up.set(i, i);
            for &j in &succ[i] {
                up.or_row_into(j, i);
            }
            for &p in &pred[i] {
                outdeg[p] -= 1;
                if outdeg[p] == 0 {
                    ready.push(p);
                }
            }
        }
        if done < n {
            return Err(PosetError::Cycle(find_cycle(&succ, &outdeg, &labels)));
        }
        Ok(Self::from_closure(labels, up))
    }

    /// Builds a poset from a full order relation, rejecting anything that is
    /// not reflexive, antisymmetric and transitive.
    pub fn from_relation(rel: Relation) -> Result<Self, PosetError> {
        let report = rel.check_laws();
        if !report.is_ok() {
            return Err(PosetError::NotAPartialOrder(report));
        }
        Ok(Self::from_closure(rel.labels, rel.matrix))
    }

    pub fn from_fn(
        labels: Vec<String>,
        le: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, PosetError> {
        Self::from_relation(Relation::from_fn(labels, le))
    }

    pub fn chain(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self::from_covers(labels, (1..n).map(|i| (i - 1, i))).expect("a chain is acyclic")
    }

    pub fn antichain(labels: Vec<String>) -> Self {
        Self::from_covers(labels, []).expect("no edges")
    }

    fn from_closure(labels: Vec<String>, up: BitMatrix) -> Self {
        let n = up.len();
        let mut covers = Vec::new();
        let mut covered = vec![0u64; up.words()];
        let mut scratch = vec![0u64; up.words()];
        for a in 0..n {
            covered.iter_mut().for_each(|w| *w = 0);
            for b in iter_ones(up.row(a)) {
                if b == a {
                    continue;
                }
                scratch.copy_from_slice(up.row(b));
                scratch[b / 64] &= !(1 << (b % 64));
                for (c, s) in covered.iter_mut().zip(&scratch) {
                    *c |= *s;
                }
            }
            for b in iter_ones(up.row(a)) {
                if b != a && covered[b / 64] >> (b % 64) & 1 == 0 {
                    covers.push((ElementId(a), ElementId(b)));
                }
            }
        }
        let down = up.transpose();
        Self {
            labels,
            covers,
            up,
            down,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = ElementId> + '_ {
        (0..self.len()).map(ElementId)
    }

    pub fn id(&self, index: usize) -> Result<ElementId, PosetError> {
        if index < self.len() {
            Ok(ElementId(index))
        } else {
            Err(PosetError::ElementNotFound(index))
        }
    }

    pub fn label(&self, a: ElementId) -> &str {
        &self.labels[a.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<ElementId> {
        self.labels.iter().position(|l| l == label).map(ElementId)
    }

    /// Hasse diagram, as `(lower, upper)` pairs.
    pub fn covers(&self) -> &[(ElementId, ElementId)] {
        &self.covers
    }

    /// `a <= b`, checking that both handles belong to this poset.
    pub fn leq(&self, a: ElementId, b: ElementId) -> Result<bool, PosetError> {
        self.id(a.0)?;
        self.id(b.0)?;
        Ok(self.le(a, b))
    }

    /// `a <= b`. Panics on a foreign handle.
    #[inline]
    pub fn le(&self, a: ElementId, b: ElementId) -> bool {
        self.up.get(a.0, b.0)
    }

    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.le(a, b)
    }

    pub fn up_set(&self, a: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        iter_ones(self.up.row(a.0)).map(ElementId)
    }

    pub fn down_set(&self, a: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        iter_ones(self.down.row(a.0)).map(ElementId)
    }

    pub fn up_count(&self, a: ElementId) -> usize {
        self.up.row_count(a.0)
    }

    pub fn down_count(&self, a: ElementId) -> usize {
        self.down.row_count(a.0)
    }

    pub(crate) fn up_row(&self, a: ElementId) -> &[u64] {
        self.up.row(a.0)
    }

    /// All pairs `(a, b)` with `a <= b`, reflexive pairs included.
    pub fn comparable_pairs(&self) -> Vec<(ElementId, ElementId)> {
        self.elements()
            .flat_map(|a| self.up_set(a).map(move |b| (a, b)))
            .collect()
    }

    pub fn comparable_count(&self) -> usize {
        self.up.count()
    }

    pub fn relation(&self) -> Relation {
        Relation {
            labels: self.labels.clone(),
            matrix: self.up.clone(),
        }
    }

    pub fn check_laws(&self) -> LawReport {
        check_matrix(&self.up, &self.labels)
    }

    /// Checks the three laws on `samples` random triples through [`Poset::le`].
    pub fn check_laws_sampled(&self, rng: &mut impl Rng, samples: usize) -> LawReport {
        let n = self.len();
        let mut report = LawReport {
            elements: n,
            ..LawReport::default()
        };
        if n == 0 {
            return report;
        }
        for _ in 0..samples {
            let a = ElementId(rng.random_range(0..n));
            let b = ElementId(rng.random_range(0..n));
            let c = ElementId(rng.random_range(0..n));
            report.triples_checked += 1;
            if !self.le(a, a) {
                report.push(LawViolation::Reflexivity {
                    a: self.label(a).to_owned(),
                });
            }
            if a != b && self.le(a, b) && self.le(b, a) {
                report.push(LawViolation::Antisymmetry {
                    a: self.label(a).to_owned(),
                    b: self.label(b).to_owned(),
                });
            }
            if self.le(a, b) && self.le(b, c) && !self.le(a, c) {
                report.push(LawViolation::Transitivity {
                    a: self.label(a).to_owned(),
                    b: self.label(b).to_owned(),
                    c: self.label(c).to_owned(),
                });
            }
        }
        report
    }

    /// The greatest element, if there is one.
    pub fn greatest(&self) -> Option<ElementId> {
        let n = self.len();
        self.elements().find(|&a| self.down_count(a) == n)
    }

    /// The least element, if there is one.
    pub fn least(&self) -> Option<ElementId> {
        let n = self.len();
        self.elements().find(|&a| self.up_count(a) == n)
    }

    /// True iff `map` (indexed by element of `self`) is injective and both
    /// preserves and reflects the order into `target`.
    pub fn embeds_into(&self, target: &Poset, map: &[ElementId]) -> bool {
        if map.len() != self.len() || map.iter().any(|m| m.0 >= target.len()) {
            return false;
        }
        let distinct: HashSet<_> = map.iter().collect();
        distinct.len() == map.len()
            && self.elements().all(|a| {
                self.elements()
                    .all(|b| self.le(a, b) == target.le(map[a.0], map[b.0]))
            })
    }

    pub fn maximal(&self) -> Vec<ElementId> {
        self.elements()
            .filter(|&a| self.up.row_count(a.0) == 1)
            .collect()
    }

    pub fn minimal(&self) -> Vec<ElementId> {
        self.elements()
            .filter(|&a| self.down.row_count(a.0) == 1)
            .collect()
    }

    /// Top and bottom, if the poset has both.
    pub fn bounded(self) -> Result<BoundedPoset, PosetError> {
        BoundedPoset::new(self)
    }

    /// Induced subposet on `keep`, in the given order.
    pub fn restrict(&self, keep: &[ElementId]) -> Poset {
        let labels = keep.iter().map(|&a| self.label(a).to_owned()).collect();
        Poset::from_fn(labels, |i, j| self.le(keep[i], keep[j]))
            .expect("restriction of a partial order is a partial order")
    }

    /// Same order, new labels.
    pub fn relabel(mut self, labels: Vec<String>) -> Result<Poset, PosetError> {
        if labels.len() != self.len() {
            return Err(PosetError::LabelCount {
                labels: labels.len(),
                elements: self.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Length of the longest chain ending at each element, counting edges.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<ElementId> = self.elements().collect();
        order.sort_by_key(|&a| self.down_count(a));
        let mut lower: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for &(lo, hi) in &self.covers {
            lower[hi.0].push(lo.0);
        }
        let mut h = vec![0usize; self.len()];
        for &a in &order {
            h[a.0] = lower[a.0].iter().map(|&lo| h[lo] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Graphviz rendering of the Hasse diagram; edges point from subtype to
    /// supertype.
    pub fn to_dot(&self, name: &str) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", dot_id(name));
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=box];");
        for a in self.elements() {
            let _ = writeln!(out, "  n{} [label={}];", a.0, dot_id(self.label(a)));
        }
        for &(lo, hi) in &self.covers {
            let _ = writeln!(out, "  n{} -> n{};", lo.0, hi.0);
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn find_cycle(succ: &[Vec<usize>], outdeg: &[usize], labels: &[String]) -> Vec<String> {
    // Every node left with positive out-degree has a successor that is also
    // left over, so walking forward must revisit a node.
    let start = (0..succ.len()).find(|&i| outdeg[i] > 0).unwrap_or(0);
    let mut seen = HashSet::new();
    let mut path = Vec::new();
    let mut cur = start;
    while seen.insert(cur) {
        path.push(cur);
        cur = succ[cur]
            .iter()
            .copied()
            .find(|&j| outdeg[j] > 0)
            .unwrap_or(cur);
    }
    let from = path.iter().position(|&i| i == cur).unwrap_or(0);
    let mut cycle: Vec<String> = path[from..].iter().map(|&i| labels[i].clone()).collect();
    cycle.push(labels[cur].clone());
    cycle
}

/// A poset with a greatest and a least element.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedPoset {
    poset: Poset,
    top: ElementId,
    bottom: ElementId,
}

impl BoundedPoset {
    pub fn new(poset: Poset) -> Result<Self, PosetError> {
        let top = poset.greatest().ok_or(PosetError::NotBounded("top"))?;
        let bottom = poset.least().ok_or(PosetError::NotBounded("bottom"))?;
        Ok(Self { poset, top, bottom })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn into_poset(self) -> Poset {
        self.poset
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn bottom(&self) -> ElementId {
        self.bottom
    }
}

impl std::ops::Deref for BoundedPoset {
    type Target = Poset;

    fn deref(&self) -> &Poset {
        &self.poset
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("e{i}")).collect()
    }

    #[test]
    fn chain_reachability() {
        let p = Poset::chain(names(3));
        let (bot, top) = (p.id(0).unwrap(), p.id(2).unwrap());
        assert_eq!(p.leq(bot, top), Ok(true));
        assert_eq!(p.leq(top, bot), Ok(false));
        for a in p.elements() {
            assert!(p.le(a, a));
        }
    }

    #[test]
    fn antichain_is_incomparable() {
        let p = Poset::antichain(names(2));
        let (a, b) = (p.id(0).unwrap(), p.id(1).unwrap());
        assert_eq!(p.leq(a, b), Ok(false));
        assert_eq!(p.comparable_pairs().len(), 2);
    }

    #[test]
    fn unknown_element_is_an_error() {
        let p = Poset::chain(names(2));
        let q = Poset::chain(names(5));
        let foreign = q.id(4).unwrap();
        assert_eq!(
            p.leq(foreign, p.id(0).unwrap()),
            Err(PosetError::ElementNotFound(4))
        );
        assert!(p.id(2).is_err());
    }

    #[test]
    fn redundant_edges_are_reduced() {
        let p = Poset::from_covers(names(3), [(0, 1), (1, 2), (0, 2), (0, 2)]).unwrap();
        let covers: Vec<_> = p.covers().iter().map(|&(a, b)| (a.0, b.0)).collect();
        assert_eq!(covers, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn cycles_are_rejected() {
        let err = Poset::from_covers(names(3), [(0, 1), (1, 2), (2, 1)]).unwrap_err();
        match err {
            PosetError::Cycle(path) => {
                assert!(path.contains(&"e1".to_owned()) && path.contains(&"e2".to_owned()))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_cycle_reports_antisymmetry() {
        let rel = Relation::closure_of_edges(names(2), [(0, 1), (1, 0)]).unwrap();
        let report = rel.check_laws();
        assert_eq!(
            report.violations,
            vec![LawViolation::Antisymmetry {
                a: "e0".into(),
                b: "e1".into()
            }]
        );
        assert!(matches!(
            Poset::from_relation(rel),
            Err(PosetError::NotAPartialOrder(_))
        ));
    }

    #[test]
    fn non_transitive_relation_is_caught() {
        let rel = Relation::from_fn(names(3), |a, b| {
            a == b || (a, b) == (0, 1) || (a, b) == (1, 2)
        });
        let report = rel.check_laws();
        assert_eq!(report.total, 1);
        assert!(matches!(
            report.violations[0],
            LawViolation::Transitivity { .. }
        ));
        let missing_refl = Relation::from_fn(names(2), |a, b| a == 0 && b == 0);
        assert_eq!(missing_refl.check_laws().total, 1);
    }

    #[test]
    fn comparable_pairs_counts() {
        assert_eq!(Poset::chain(names(4)).comparable_pairs().len(), 10);
        assert_eq!(Poset::antichain(names(3)).comparable_pairs().len(), 3);
        assert_eq!(Poset::chain(names(1)).comparable_pairs().len(), 1);
    }

    #[test]
    fn bounds() {
        let b = Poset::chain(names(3)).bounded().unwrap();
        assert_eq!((b.bottom().0, b.top().0), (0, 2));
        assert_eq!(
            Poset::antichain(names(2)).bounded().unwrap_err(),
            PosetError::NotBounded("top")
        );
    }

    #[test]
    fn dot_has_one_edge_per_cover() {
        let p = Poset::from_covers(
            vec!["Null".into(), "A \"x\"".into(), "Object".into()],
            [(0, 1), (1, 2)],
        )
        .unwrap();
        let dot = p.to_dot("h");
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.contains("n1 -> n2;"));
        assert!(dot.contains(r#"label="A \"x\"""#));
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn heights_follow_longest_chain() {
        // 0 < 1 < 3, 0 < 2 < 3, 1 < 2
        let p = Poset::from_covers(names(4), [(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        assert_eq!(p.heights(), vec![0, 1, 2, 3]);
    }
}
