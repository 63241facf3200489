//! Structural subtyping and containment checker.
//!
//! Subtyping between applied types defers to containment of their arguments,
//! and containment defers back to subtyping of the interval endpoints. Each
//! step strictly shrinks the terms involved, so the recursion terminates.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::term::{AdmitError, TypeArg, TypeTerm};
use crate::hierarchy::{ClassTable, Subclassing};
use crate::operators::{ArgKind, WildcardPolicy};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryOptions {
    /// Allow `C<!>` terms.
    pub cofree: bool,
    /// Under [`WildcardPolicy::Paper`] an exact argument is strictly contained
    /// in a wildcard with the same endpoints (only `T` vs `? super T` with
    /// `T = Object` can meet this case), mirroring the materialized order.
    pub wc_policy: WildcardPolicy,
}

impl QueryOptions {
    pub fn semantic() -> Self {
        Self {
            cofree: false,
            wc_policy: WildcardPolicy::Semantic,
        }
    }

    pub fn with_cofree(mut self, on: bool) -> Self {
        self.cofree = on;
        self
    }

    pub fn with_policy(mut self, policy: WildcardPolicy) -> Self {
        self.wc_policy = policy;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("`{term}` is not admittable: {source}")]
    NotAdmittable {
        term: String,
        #[source]
        source: AdmitError,
    },
    #[error("`{0}` uses a cofree type, which is disabled")]
    CofreeDisabled(String),
}

/// The rule that decided a step of a derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `Null <: T`
    NullBottom,
    /// `T <: Object`
    ObjectTop,
    /// class against class: subclassing
    Subclass,
    /// `C<a> <: d` iff `C <= d`
    ErasedSupertype,
    /// only `Null` lies below a parameterized or cofree type
    OnlyNullBelow,
    /// `C<p> <: D<q>` iff `C <= D` and `p ⊑ q`
    Generic,
    /// `[S, T] ⊑ [U, V]` iff `U <: S` and `T <: V`
    Containment,
    /// `C<!> <: D<q>`, `C<!> <: d`, `C<!> <: D<!>` iff `C <= D`
    Cofree,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::NullBottom => "null-bottom",
            Rule::ObjectTop => "object-top",
            Rule::Subclass => "subclass",
            Rule::ErasedSupertype => "erased-supertype",
            Rule::OnlyNullBelow => "only-null-below",
            Rule::Generic => "generic",
            Rule::Containment => "containment",
            Rule::Cofree => "cofree",
        })
    }
}

/// A judgment being decided.
#[derive(Clone, Copy, Debug)]
pub enum Goal<'a> {
    Subtype(&'a TypeTerm, &'a TypeTerm),
    Contains {
        inner: &'a TypeArg,
        outer: &'a TypeArg,
    },
}

impl fmt::Display for Goal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Subtype(a, b) => write!(f, "{a} <: {b}"),
            Goal::Contains { inner, outer } => write!(f, "{inner} ⊑ {outer}"),
        }
    }
}

/// Observer of derivation steps. Steps arrive in pre-order: `enter` when a
/// judgment is first considered, `exit` once it is decided.
pub trait Tracer {
    fn enter(&mut self, depth: usize, goal: Goal<'_>) -> usize;
    fn exit(&mut self, step: usize, rule: Rule, holds: bool);
}

/// Records nothing.
pub struct NoTrace;

impl Tracer for NoTrace {
    #[inline(always)]
    fn enter(&mut self, _: usize, _: Goal<'_>) -> usize {
        0
    }

    #[inline(always)]
    fn exit(&mut self, _: usize, _: Rule, _: bool) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub depth: usize,
    pub goal: String,
    pub rule: Rule,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub steps: Vec<TraceStep>,
}

impl Tracer for Derivation {
    fn enter(&mut self, depth: usize, goal: Goal<'_>) -> usize {
        self.steps.push(TraceStep {
            depth,
            goal: goal.to_string(),
            rule: Rule::Subclass,
            holds: false,
        });
        self.steps.len() - 1
    }

    fn exit(&mut self, step: usize, rule: Rule, holds: bool) {
        let s = &mut self.steps[step];
        s.rule = rule;
        s.holds = holds;
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(
                f,
                "{:indent$}{}  [{}] {}",
                "",
                s.goal,
                s.rule,
                s.holds,
                indent = 2 * s.depth
            )?;
        }
        Ok(())
    }
}

/// Decides subtyping and containment over a class table.
pub struct Checker<'a> {
    table: &'a ClassTable,
    classes: Subclassing,
    options: QueryOptions,
}

impl<'a> Checker<'a> {
    pub fn new(table: &'a ClassTable, options: QueryOptions) -> Self {
        Self {
            table,
            classes: table.subclassing(),
            options,
        }
    }

    pub fn table(&self) -> &ClassTable {
        self.table
    }

    pub fn classes(&self) -> &Subclassing {
        &self.classes
    }

    pub fn options(&self) -> QueryOptions {
        self.options
    }

    /// Rejects terms the checker cannot be asked about.
    pub fn admit(&self, t: &TypeTerm) -> Result<(), QueryError> {
        t.check_admittable(self.table)
            .map_err(|source| QueryError::NotAdmittable {
                term: t.to_string(),
                source,
            })?;
        if !self.options.cofree && t.mentions_cofree() {
            return Err(QueryError::CofreeDisabled(t.to_string()));
        }
        Ok(())
    }

    fn admit_arg(&self, a: &TypeArg) -> Result<(), QueryError> {
        self.admit(a.lower())?;
        self.admit(a.upper())
    }

    pub fn subtype(&self, a: &TypeTerm, b: &TypeTerm) -> Result<bool, QueryError> {
        self.admit(a)?;
        self.admit(b)?;
        Ok(self.sub(a, b, 0, &mut NoTrace))
    }

    pub fn contains(&self, outer: &TypeArg, inner: &TypeArg) -> Result<bool, QueryError> {
        self.admit_arg(outer)?;
        self.admit_arg(inner)?;
        Ok(self.con(outer, inner, 0, &mut NoTrace))
    }

    /// Like [`Checker::subtype`], also returning every step taken.
    pub fn explain_subtype(
        &self,
        a: &TypeTerm,
        b: &TypeTerm,
    ) -> Result<(bool, Derivation), QueryError> {
        self.admit(a)?;
        self.admit(b)?;
        let mut d = Derivation::default();
        let holds = self.sub(a, b, 0, &mut d);
        Ok((holds, d))
    }

    pub fn explain_contains(
        &self,
        outer: &TypeArg,
        inner: &TypeArg,
    ) -> Result<(bool, Derivation), QueryError> {
        self.admit_arg(outer)?;
        self.admit_arg(inner)?;
        let mut d = Derivation::default();
        let holds = self.con(outer, inner, 0, &mut d);
        Ok((holds, d))
    }

    /// Subtyping on terms already known to be admittable.
    pub fn subtype_unchecked(&self, a: &TypeTerm, b: &TypeTerm) -> bool {
        self.sub(a, b, 0, &mut NoTrace)
    }

    pub fn contains_unchecked(&self, outer: &TypeArg, inner: &TypeArg) -> bool {
        self.con(outer, inner, 0, &mut NoTrace)
    }

    fn class_le(&self, a: &str, b: &str) -> bool {
        self.classes
            .le(a, b)
            .expect("admitted terms only name declared classes")
    }

    fn sub(&self, a: &TypeTerm, b: &TypeTerm, depth: usize, tr: &mut impl Tracer) -> bool {
        let step = tr.enter(depth, Goal::Subtype(a, b));
        let (rule, holds) = if a.is_null() {
            (Rule::NullBottom, true)
        } else if b.is_object() {
            (Rule::ObjectTop, true)
        } else {
            match (a, b) {
                (TypeTerm::Plain(c), TypeTerm::Plain(d)) => (Rule::Subclass, self.class_le(c, d)),
                (TypeTerm::Applied(c, _), TypeTerm::Plain(d)) => {
                    (Rule::ErasedSupertype, self.class_le(c, d))
                }
                (TypeTerm::Plain(_), _) => (Rule::OnlyNullBelow, false),
                (TypeTerm::Applied(c, p), TypeTerm::Applied(d, q)) => (
                    Rule::Generic,
                    self.class_le(c, d) && self.con(q, p, depth + 1, tr),
                ),
                (TypeTerm::Applied(..), TypeTerm::Cofree(_)) => (Rule::OnlyNullBelow, false),
                (TypeTerm::Cofree(c), other) => (Rule::Cofree, self.class_le(c, other.class())),
            }
        };
        tr.exit(step, rule, holds);
        holds
    }

    fn con(&self, outer: &TypeArg, inner: &TypeArg, depth: usize, tr: &mut impl Tracer) -> bool {
        let step = tr.enter(depth, Goal::Contains { inner, outer });
        let holds = self.sub(outer.lower(), inner.lower(), depth + 1, tr)
            && self.sub(inner.upper(), outer.upper(), depth + 1, tr)
            && (self.options.wc_policy == WildcardPolicy::Semantic
                || !inner.same_interval(outer)
                || rank(inner.kind()) <= rank(outer.kind()));
        tr.exit(step, Rule::Containment, holds);
        holds
    }
}

fn rank(kind: ArgKind) -> u8 {
    u8::from(kind != ArgKind::Exact)
}
