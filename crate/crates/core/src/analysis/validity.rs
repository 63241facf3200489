use std::fmt;

use serde::{Deserialize, Serialize};

use crate::construction::{Checker, TypeTerm};
use crate::hierarchy::{ArgExpr, BoundKind, TypeExpr};

/// One declared bound that an argument fails to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundViolation {
    /// The applied type whose argument is at fault.
    pub term: TypeTerm,
    /// `lower` or `upper` for a declared bound, `interval` when the argument's
    /// own lower end is not below its upper end.
    pub bound: String,
    /// The bound as declared, e.g. `Enum<X>`.
    pub declared: String,
    /// The substitution applied to the bound, e.g. `X := Object`.
    pub substitution: String,
    /// The subtyping judgment that fails.
    pub required: String,
}

impl fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.substitution.is_empty() {
            return write!(
                f,
                "in `{}`: argument {} is empty, `{}` does not hold",
                self.term, self.declared, self.required
            );
        }
        write!(
            f,
            "in `{}`: {} bound `{}` with {} requires `{}`, which does not hold",
            self.term, self.bound, self.declared, self.substitution, self.required
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityVerdict {
    pub term: String,
    pub admittable: bool,
    pub valid: bool,
    /// Why the term is not admittable, if it is not.
    pub admit_error: Option<String>,
    pub reasons: Vec<BoundViolation>,
}

impl fmt::Display for ValidityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.admit_error, self.valid) {
            (Some(e), _) => writeln!(f, "{}: not admittable ({e})", self.term)?,
            (None, true) => writeln!(f, "{}: admittable, valid", self.term)?,
            (None, false) => writeln!(
                f,
                "{}: admittable, not valid (denotes the empty set)",
                self.term
            )?,
        }
        for r in &self.reasons {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

/// Decides whether `term` is admittable (arities respected) and valid (every
/// argument, at every nesting level, satisfies the declared bounds of the
/// class it is passed to).
///
/// For an argument `[S, T]` against bounds `L`, `U` on variable `X` the
/// checks are `L[X := S] <: S` and `T <: U[X := T]`. Bound expressions are
/// not themselves required to be valid.
pub fn validity(checker: &Checker<'_>, term: &TypeTerm) -> ValidityVerdict {
    let mut verdict = ValidityVerdict {
        term: term.to_string(),
        admittable: true,
        valid: true,
        admit_error: None,
        reasons: Vec::new(),
    };
    let admitted = term
        .check_admittable(checker.table())
        .map_err(|e| e.to_string())
        .and_then(|()| checker.admit(term).map_err(|e| e.to_string()));
    if let Err(e) = admitted {
        verdict.admittable = false;
        verdict.valid = false;
        verdict.admit_error = Some(e);
        return verdict;
    }
    collect(checker, term, &mut verdict.reasons);
    verdict.valid = verdict.reasons.is_empty();
    verdict
}

fn collect(checker: &Checker<'_>, term: &TypeTerm, out: &mut Vec<BoundViolation>) {
    let TypeTerm::Applied(class, arg) = term else {
        return;
    };
    let param = checker
        .table()
        .get(class)
        .and_then(|d| d.param.as_ref())
        .expect("admitted applications name generic classes");

    if !checker.subtype_unchecked(arg.lower(), arg.upper()) {
        out.push(BoundViolation {
            term: term.clone(),
            bound: "interval".to_owned(),
            declared: format!("[{}, {}]", arg.lower(), arg.upper()),
            substitution: String::new(),
            required: format!("{} <: {}", arg.lower(), arg.upper()),
        });
    }
    for (kind, bound) in [
        (BoundKind::Lower, &param.lower),
        (BoundKind::Upper, &param.upper),
    ] {
        let endpoint = match kind {
            BoundKind::Lower => arg.lower(),
            BoundKind::Upper => arg.upper(),
        };
        let inst = TypeTerm::from_expr(&substitute(bound, &param.var, &endpoint.to_expr()))
            .expect("substituting a ground type leaves no variables");
        let (sub, sup) = match kind {
            BoundKind::Lower => (&inst, endpoint),
            BoundKind::Upper => (endpoint, &inst),
        };
        if !checker.subtype_unchecked(sub, sup) {
            out.push(BoundViolation {
                term: term.clone(),
                bound: match kind {
                    BoundKind::Lower => "lower",
                    BoundKind::Upper => "upper",
                }
                .to_owned(),
                declared: bound.to_string(),
                substitution: format!("{} := {endpoint}", param.var),
                required: format!("{sub} <: {sup}"),
            });
        }
    }

    collect(checker, arg.lower(), out);
    if arg.upper() != arg.lower() {
        collect(checker, arg.upper(), out);
    }
}

fn substitute(e: &TypeExpr, var: &str, with: &TypeExpr) -> TypeExpr {
    match e {
        TypeExpr::Var(v) if v == var => with.clone(),
        TypeExpr::Class {
            name,
            arg: Some(arg),
        } => TypeExpr::applied(name, substitute_arg(arg, var, with)),
        other => other.clone(),
    }
}

fn substitute_arg(a: &ArgExpr, var: &str, with: &TypeExpr) -> ArgExpr {
    let s = |t: &TypeExpr| substitute(t, var, with);
    match a {
        ArgExpr::Exact(t) => ArgExpr::Exact(s(t)),
        ArgExpr::Unbounded => ArgExpr::Unbounded,
        ArgExpr::Extends(t) => ArgExpr::Extends(s(t)),
        ArgExpr::Super(t) => ArgExpr::Super(s(t)),
        ArgExpr::Interval(lo, hi) => ArgExpr::Interval(s(lo), s(hi)),
    }
}
