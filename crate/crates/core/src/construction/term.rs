use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::hierarchy::{parse_type, ArgExpr, ClassTable, Diagnostic, TypeExpr, NULL, OBJECT};
use crate::operators::ArgKind;

/// A ground type: a class, a generic class applied to one argument, or the
/// cofree type `C<!>` of a generic class.
///
/// Terms are structural; whether they respect declared arities is a separate
/// question answered by [`TypeTerm::check_admittable`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeTerm {
    Plain(Arc<str>),
    Applied(Arc<str>, TypeArg),
    Cofree(Arc<str>),
}

/// An interval argument `[lower, upper]` together with the form it is written
/// in.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeArg {
    lower: Arc<TypeTerm>,
    upper: Arc<TypeTerm>,
    kind: ArgKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdmitError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("class `{class}` is not generic and cannot be applied in `{term}`")]
    NotGeneric { class: String, term: String },
    #[error("generic class `{0}` needs a type argument")]
    MissingArgument(String),
    #[error("`{0}<!>` names a non-generic class")]
    CofreeOfNonGeneric(String),
    #[error("type variable `{0}` is not a ground type")]
    TypeVariable(String),
}

impl TypeTerm {
    pub fn plain(name: &str) -> Self {
        TypeTerm::Plain(name.into())
    }

    pub fn object() -> Self {
        Self::plain(OBJECT)
    }

    pub fn null() -> Self {
        Self::plain(NULL)
    }

    pub fn applied(name: &str, arg: TypeArg) -> Self {
        TypeTerm::Applied(name.into(), arg)
    }

    pub fn cofree(name: &str) -> Self {
        TypeTerm::Cofree(name.into())
    }

    /// The class name the term is built from.
    pub fn class(&self) -> &str {
        match self {
            TypeTerm::Plain(n) | TypeTerm::Applied(n, _) | TypeTerm::Cofree(n) => n,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, TypeTerm::Plain(n) if &**n == NULL)
    }

    pub fn is_object(&self) -> bool {
        matches!(self, TypeTerm::Plain(n) if &**n == OBJECT)
    }

    pub fn arg(&self) -> Option<&TypeArg> {
        match self {
            TypeTerm::Applied(_, a) => Some(a),
            _ => None,
        }
    }

    /// Nesting depth: 0 for classes and cofree types, one more than the
    /// deeper bound for applications.
    pub fn depth(&self) -> usize {
        match self {
            TypeTerm::Plain(_) | TypeTerm::Cofree(_) => 0,
            TypeTerm::Applied(_, a) => 1 + a.lower.depth().max(a.upper.depth()),
        }
    }

    pub fn mentions_cofree(&self) -> bool {
        match self {
            TypeTerm::Plain(_) => false,
            TypeTerm::Cofree(_) => true,
            TypeTerm::Applied(_, a) => a.lower.mentions_cofree() || a.upper.mentions_cofree(),
        }
    }

    /// Structural conversion; only type variables are rejected.
    pub fn from_expr(e: &TypeExpr) -> Result<Self, AdmitError> {
        Ok(match e {
            TypeExpr::Var(v) => return Err(AdmitError::TypeVariable(v.clone())),
            TypeExpr::Cofree(n) => TypeTerm::cofree(n),
            TypeExpr::Class { name, arg: None } => TypeTerm::plain(name),
            TypeExpr::Class {
                name,
                arg: Some(arg),
            } => TypeTerm::applied(name, TypeArg::from_expr(arg)?),
        })
    }

    /// Converts back to an expression, e.g. for substitution into bounds.
    pub fn to_expr(&self) -> TypeExpr {
        match self {
            TypeTerm::Plain(n) => TypeExpr::class(&**n),
            TypeTerm::Cofree(n) => TypeExpr::Cofree(n.to_string()),
            TypeTerm::Applied(n, a) => TypeExpr::applied(&**n, a.to_expr()),
        }
    }

    /// Checks that every class exists and is used at its declared arity.
    pub fn check_admittable(&self, table: &ClassTable) -> Result<(), AdmitError> {
        let name = self.class();
        let arity = table
            .arity(name)
            .ok_or_else(|| AdmitError::UnknownClass(name.to_owned()))?;
        match (self, arity) {
            (TypeTerm::Plain(_), 0) => Ok(()),
            (TypeTerm::Plain(_), _) => Err(AdmitError::MissingArgument(name.to_owned())),
            (TypeTerm::Cofree(_), 1) => Ok(()),
            (TypeTerm::Cofree(_), _) => Err(AdmitError::CofreeOfNonGeneric(name.to_owned())),
            (TypeTerm::Applied(_, a), 1) => {
                a.lower.check_admittable(table)?;
                a.upper.check_admittable(table)
            }
            (TypeTerm::Applied(..), _) => Err(AdmitError::NotGeneric {
                class: name.to_owned(),
                term: self.to_string(),
            }),
        }
    }

    /// The same term with every `? super Object` written as `Object`.
    pub fn canonical(&self) -> TypeTerm {
        match self {
            TypeTerm::Applied(n, a) => TypeTerm::Applied(n.clone(), a.canonical()),
            other => other.clone(),
        }
    }
}

impl TypeArg {
    /// `[lower, upper]` in the most specific form that describes it.
    pub fn interval(lower: TypeTerm, upper: TypeTerm) -> Self {
        let kind = ArgKind::canonical(lower.is_null(), upper.is_object(), lower == upper);
        Self::with_kind(lower, upper, kind)
    }

    pub fn with_kind(lower: TypeTerm, upper: TypeTerm, kind: ArgKind) -> Self {
        Self {
            lower: Arc::new(lower),
            upper: Arc::new(upper),
            kind,
        }
    }

    pub fn exact(t: TypeTerm) -> Self {
        Self::interval(t.clone(), t)
    }

    pub fn unbounded() -> Self {
        Self::interval(TypeTerm::null(), TypeTerm::object())
    }

    pub fn extends(t: TypeTerm) -> Self {
        Self::interval(TypeTerm::null(), t)
    }

    /// `? super t`. For `t = Object` the wildcard form is kept, so the result
    /// is distinct from the exact argument `Object`.
    pub fn super_of(t: TypeTerm) -> Self {
        if t.is_object() {
            Self::with_kind(t.clone(), t, ArgKind::Super)
        } else {
            Self::interval(t, TypeTerm::object())
        }
    }

    pub fn lower(&self) -> &TypeTerm {
        &self.lower
    }

    pub fn upper(&self) -> &TypeTerm {
        &self.upper
    }

    pub fn kind(&self) -> ArgKind {
        self.kind
    }

    /// Same endpoints, possibly different form.
    pub fn same_interval(&self, other: &TypeArg) -> bool {
        self.lower == other.lower && self.upper == other.upper
    }

    pub fn from_expr(e: &ArgExpr) -> Result<Self, AdmitError> {
        Ok(match e {
            ArgExpr::Exact(t) => TypeArg::exact(TypeTerm::from_expr(t)?),
            ArgExpr::Unbounded => TypeArg::unbounded(),
            ArgExpr::Extends(t) => TypeArg::extends(TypeTerm::from_expr(t)?),
            ArgExpr::Super(t) => TypeArg::super_of(TypeTerm::from_expr(t)?),
            ArgExpr::Interval(s, t) => {
                TypeArg::interval(TypeTerm::from_expr(s)?, TypeTerm::from_expr(t)?)
            }
        })
    }

    pub fn to_expr(&self) -> ArgExpr {
        match self.kind {
            ArgKind::Exact => ArgExpr::Exact(self.upper.to_expr()),
            ArgKind::Unbounded => ArgExpr::Unbounded,
            ArgKind::Extends => ArgExpr::Extends(self.upper.to_expr()),
            ArgKind::Super => ArgExpr::Super(self.lower.to_expr()),
            ArgKind::Interval => ArgExpr::Interval(self.lower.to_expr(), self.upper.to_expr()),
        }
    }

    pub fn canonical(&self) -> TypeArg {
        TypeArg::interval(self.lower.canonical(), self.upper.canonical())
    }
}

impl fmt::Display for TypeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTerm::Plain(n) => f.write_str(n),
            TypeTerm::Cofree(n) => write!(f, "{n}<!>"),
            TypeTerm::Applied(n, a) => write!(f, "{n}<{a}>"),
        }
    }
}

impl fmt::Display for TypeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ArgKind::Exact => write!(f, "{}", self.upper),
            ArgKind::Unbounded => f.write_str("?"),
            ArgKind::Extends => write!(f, "? extends {}", self.upper),
            ArgKind::Super => write!(f, "? super {}", self.lower),
            ArgKind::Interval => write!(f, "[{}, {}]", self.lower, self.upper),
        }
    }
}

impl fmt::Debug for TypeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl fmt::Debug for TypeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl FromStr for TypeTerm {
    type Err = Diagnostic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let e = parse_type(s)?;
        TypeTerm::from_expr(&e).map_err(|err| Diagnostic::new(1, 1, err.to_string()))
    }
}

impl Serialize for TypeTerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TypeTerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::parse_class_table;

    fn t(s: &str) -> TypeTerm {
        s.parse().unwrap()
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "String",
            "List<?>",
            "List<? extends Number>",
            "List<? super Integer>",
            "List<? super Object>",
            "List<[Integer, Number]>",
            "List<List<String>>",
            "List<!>",
        ] {
            assert_eq!(t(s).to_string(), s);
        }
    }

    #[test]
    fn arguments_take_their_most_specific_form() {
        assert_eq!(t("List<? extends Object>"), t("List<?>"));
        assert_eq!(t("List<? super Null>"), t("List<?>"));
        assert_eq!(t("List<? extends Null>"), t("List<Null>"));
        assert_eq!(t("List<[String, String]>"), t("List<String>"));
        assert_eq!(t("List<[Null, Number]>"), t("List<? extends Number>"));
        assert_ne!(t("List<? super Object>"), t("List<Object>"));
        assert_eq!(t("List<? super Object>").canonical(), t("List<Object>"));
    }

    #[test]
    fn depth_counts_nesting() {
        assert_eq!(t("Object").depth(), 0);
        assert_eq!(t("List<!>").depth(), 0);
        assert_eq!(t("List<?>").depth(), 1);
        assert_eq!(t("List<[Null, List<List<?>>]>").depth(), 3);
    }

    #[test]
    fn admittability_follows_arity() {
        let table =
            parse_class_table("class String; class List<X>; class LinkedList<X> extends List")
                .unwrap();
        assert!(t("List<LinkedList<String>>")
            .check_admittable(&table)
            .is_ok());
        assert!(matches!(
            t("String<Object>").check_admittable(&table),
            Err(AdmitError::NotGeneric { .. })
        ));
        assert_eq!(
            t("List").check_admittable(&table),
            Err(AdmitError::MissingArgument("List".into()))
        );
        assert_eq!(
            t("Foo").check_admittable(&table),
            Err(AdmitError::UnknownClass("Foo".into()))
        );
        assert!(t("String<!>").check_admittable(&table).is_err());
    }

    #[test]
    fn serde_uses_the_printed_form() {
        let term = t("List<? extends List<String>>");
        let json = serde_json::to_string(&term).unwrap();
        assert_eq!(json, "\"List<? extends List<String>>\"");
        assert_eq!(serde_json::from_str::<TypeTerm>(&json).unwrap(), term);
    }
}
