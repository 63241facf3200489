//! Class declarations and the subclassing order.
//!
//! Every class has at most one type parameter. `Object` and `Null` are always
//! present and never declared: `Object` is the top of the subclassing order and
//! `Null` the bottom. A generic class extending a generic class passes its
//! argument through (`C<a> <: D<a>`), so superclasses are written without
//! arguments.

mod json;
pub mod syntax;

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::poset::{BoundedPoset, ElementId, Poset};
pub use json::{ClassTableJson, DeclJson, ParamJson};
pub use syntax::{
    parse_arg, parse_bound, parse_query, parse_type, ArgExpr, BoundKind, Diagnostic, QueryExpr,
    TypeExpr,
};
use syntax::{ParsedDecl, Shape};

pub const OBJECT: &str = "Object";
pub const NULL: &str = "Null";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeParam {
    pub var: String,
    /// Declared lower bound; `Null` when absent.
    pub lower: TypeExpr,
    /// Declared upper bound; `Object` when absent.
    pub upper: TypeExpr,
}

impl TypeParam {
    pub fn unbounded(var: impl Into<String>) -> Self {
        Self {
            var: var.into(),
            lower: TypeExpr::class(NULL),
            upper: TypeExpr::class(OBJECT),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub param: Option<TypeParam>,
    pub superclass: String,
}

impl ClassDecl {
    pub fn plain(name: impl Into<String>, superclass: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            param: None,
            superclass: superclass.into(),
        }
    }

    pub fn generic(name: impl Into<String>, superclass: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            param: Some(TypeParam::unbounded("X")),
            superclass: superclass.into(),
        }
    }

    pub fn arity(&self) -> u8 {
        u8::from(self.param.is_some())
    }
}

/// Which structural restrictions validation enforces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strictness {
    #[default]
    Strict,
    /// Also accepts non-generic classes extending generic ones. The resulting
    /// tables can make the constructed order inconsistent; this exists to
    /// exercise the checkers on broken inputs.
    Permissive,
}

/// A validated set of class declarations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTable {
    decls: Vec<ClassDecl>,
    index: HashMap<String, usize>,
}

impl ClassTable {
    /// The table with only `Object` and `Null`.
    pub fn empty() -> Self {
        Self {
            decls: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn new(decls: Vec<ClassDecl>) -> Result<Self, Vec<Diagnostic>> {
        Self::with_strictness(decls, Strictness::Strict)
    }

    pub fn with_strictness(
        decls: Vec<ClassDecl>,
        strictness: Strictness,
    ) -> Result<Self, Vec<Diagnostic>> {
        let lines = vec![0; decls.len()];
        validate(decls, &lines, strictness)
    }

    pub fn decls(&self) -> &[ClassDecl] {
        &self.decls
    }

    pub fn get(&self, name: &str) -> Option<&ClassDecl> {
        self.index.get(name).map(|&i| &self.decls[i])
    }

    pub fn is_declared(&self, name: &str) -> bool {
        name == OBJECT || name == NULL || self.index.contains_key(name)
    }

    /// `Some(0 | 1)` for known classes.
    pub fn arity(&self, name: &str) -> Option<u8> {
        if name == OBJECT || name == NULL {
            Some(0)
        } else {
            self.get(name).map(ClassDecl::arity)
        }
    }

    pub fn is_generic(&self, name: &str) -> bool {
        self.arity(name) == Some(1)
    }

    /// `Object`, the declared classes in order, then `Null`.
    pub fn class_names(&self) -> Vec<&str> {
        std::iter::once(OBJECT)
            .chain(self.decls.iter().map(|d| d.name.as_str()))
            .chain(std::iter::once(NULL))
            .collect()
    }

    pub fn generic_classes(&self) -> impl Iterator<Item = &ClassDecl> {
        self.decls.iter().filter(|d| d.param.is_some())
    }

    pub fn subclassing(&self) -> Subclassing {
        Subclassing::new(self)
    }
}

impl fmt::Display for ClassTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            write!(f, "class {}", d.name)?;
            if let Some(p) = &d.param {
                write!(f, "<{}", p.var)?;
                if p.lower != TypeExpr::class(NULL) {
                    write!(f, " super {}", p.lower)?;
                }
                if p.upper != TypeExpr::class(OBJECT) {
                    write!(f, " extends {}", p.upper)?;
                }
                f.write_str(">")?;
            }
            writeln!(f, " extends {};", d.superclass)?;
        }
        Ok(())
    }
}

/// Parses the declaration language, or reports every problem found.
pub fn parse_class_table(src: &str) -> Result<ClassTable, Vec<Diagnostic>> {
    parse_class_table_with(src, Strictness::Strict)
}

pub fn parse_class_table_with(
    src: &str,
    strictness: Strictness,
) -> Result<ClassTable, Vec<Diagnostic>> {
    let parsed = syntax::parse_decls(src)?;
    if parsed.is_empty() {
        return Err(vec![Diagnostic::new(1, 1, "no class declarations found")]);
    }
    let mut decls = Vec::new();
    let mut lines = Vec::new();
    let mut diags = Vec::new();
    for p in parsed {
        if p.name == OBJECT && p.param.is_none() && p.superclass.is_none() {
            // Restating the root is harmless.
            continue;
        }
        match lower_decl(p) {
            Ok((d, line)) => {
                decls.push(d);
                lines.push(line);
            }
            Err(d) => diags.push(d),
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    validate(decls, &lines, strictness)
}

/// Accepts either the declaration language or its JSON mirror.
pub fn load_class_table(src: &str, strictness: Strictness) -> Result<ClassTable, Vec<Diagnostic>> {
    if src.trim_start().starts_with('{') {
        ClassTableJson::parse(src)?.into_table(strictness)
    } else {
        parse_class_table_with(src, strictness)
    }
}

fn lower_decl(p: ParsedDecl) -> Result<(ClassDecl, usize), Diagnostic> {
    let param = match p.param {
        None => None,
        Some(pp) => {
            let mut param = TypeParam::unbounded(pp.var);
            let (mut seen_lower, mut seen_upper) = (false, false);
            for (kind, expr, line) in pp.bounds {
                let seen = match kind {
                    BoundKind::Lower => &mut seen_lower,
                    BoundKind::Upper => &mut seen_upper,
                };
                if *seen {
                    return Err(Diagnostic::new(
                        line,
                        1,
                        format!(
                            "class `{}` declares two {} bounds",
                            p.name,
                            match kind {
                                BoundKind::Lower => "lower",
                                BoundKind::Upper => "upper",
                            }
                        ),
                    ));
                }
                *seen = true;
                match kind {
                    BoundKind::Lower => param.lower = expr,
                    BoundKind::Upper => param.upper = expr,
                }
            }
            Some(param)
        }
    };
    Ok((
        ClassDecl {
            name: p.name,
            param,
            superclass: p.superclass.unwrap_or_else(|| OBJECT.to_owned()),
        },
        p.line,
    ))
}

fn validate(
    decls: Vec<ClassDecl>,
    lines: &[usize],
    strictness: Strictness,
) -> Result<ClassTable, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let at = |i: usize, msg: String| Diagnostic::new(lines[i], 1, msg);

    let mut index = HashMap::new();
    for (i, d) in decls.iter().enumerate() {
        if d.name == OBJECT || d.name == NULL {
            diags.push(at(
                i,
                format!("`{}` is built in and cannot be declared", d.name),
            ));
        } else if index.insert(d.name.clone(), i).is_some() {
            diags.push(at(i, format!("class `{}` is declared twice", d.name)));
        }
    }
    let arity = |name: &str| -> Option<u8> {
        if name == OBJECT || name == NULL {
            Some(0)
        } else {
            index.get(name).map(|&i| decls[i].arity())
        }
    };

    for (i, d) in decls.iter().enumerate() {
        let sup = d.superclass.as_str();
        if sup == NULL {
            diags.push(at(i, format!("`{}` cannot extend `Null`", d.name)));
        } else if arity(sup).is_none() {
            diags.push(at(i, format!("unknown superclass `{sup}` of `{}`", d.name)));
        } else if d.param.is_none() && arity(sup) == Some(1) && strictness == Strictness::Strict {
            diags.push(at(
                i,
                format!(
                    "non-generic class `{}` cannot extend generic class `{sup}`",
                    d.name
                ),
            ));
        }

        if let Some(p) = &d.param {
            for (what, bound) in [("lower", &p.lower), ("upper", &p.upper)] {
                bound.for_each_class(&mut |name, shape| {
                    if arity(name).is_none() {
                        diags.push(at(
                            i,
                            format!("unknown class `{name}` in {what} bound of `{}`", d.name),
                        ));
                        return;
                    }
                    let msg = match (arity(name), shape) {
                        (Some(0), Shape::Applied) => {
                            Some(format!("non-generic class `{name}` applied to an argument"))
                        }
                        (Some(0), Shape::Cofree) => {
                            Some(format!("cofree type of non-generic class `{name}`"))
                        }
                        (Some(1), Shape::Plain) => {
                            Some(format!("generic class `{name}` used without an argument"))
                        }
                        _ => None,
                    };
                    if let Some(msg) = msg {
                        diags.push(at(
                            i,
                            format!("arity mismatch in {what} bound of `{}`: {msg}", d.name),
                        ));
                    }
                });
            }
        }
    }

    // Cycle detection along superclass links; each chain either reaches
    // Object, an unknown name, or revisits a class.
    let mut reported: HashSet<&str> = HashSet::new();
    for (i, d) in decls.iter().enumerate() {
        let mut seen = vec![d.name.as_str()];
        let mut cur = d.superclass.as_str();
        while let Some(&j) = index.get(cur) {
            if let Some(pos) = seen.iter().position(|&s| s == cur) {
                if pos == 0 && !reported.contains(cur) {
                    reported.extend(seen.iter().copied());
                    let mut cycle = seen.clone();
                    cycle.push(cur);
                    diags.push(at(i, format!("cyclic subclassing: {}", cycle.join(" -> "))));
                }
                break;
            }
            seen.push(cur);
            cur = decls[j].superclass.as_str();
        }
    }

    if diags.is_empty() {
        Ok(ClassTable { decls, index })
    } else {
        diags.sort_by_key(|d| d.line);
        Err(diags)
    }
}

/// The subclassing order with `Object` on top and `Null` at the bottom.
#[derive(Clone, Debug)]
pub struct Subclassing {
    poset: BoundedPoset,
    ids: HashMap<String, ElementId>,
    generic: Vec<ElementId>,
}

impl Subclassing {
    fn new(table: &ClassTable) -> Self {
        let names: Vec<String> = table.class_names().into_iter().map(str::to_owned).collect();
        let pos: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let null = names.len() - 1;
        let mut edges: Vec<(usize, usize)> = table
            .decls()
            .iter()
            .map(|d| (pos[d.name.as_str()], pos[d.superclass.as_str()]))
            .collect();
        let has_sub: HashSet<usize> = edges.iter().map(|&(_, sup)| sup).collect();
        edges.extend(
            (0..null)
                .filter(|i| !has_sub.contains(i))
                .map(|i| (null, i)),
        );

        let poset = Poset::from_covers(names.clone(), edges)
            .expect("validated tables are acyclic")
            .bounded()
            .expect("Object and Null bound every validated table");
        let ids = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), poset.id(i).expect("in range")))
            .collect::<HashMap<_, _>>();
        let generic = table
            .generic_classes()
            .map(|d| ids[d.name.as_str()])
            .collect();
        Self {
            poset,
            ids,
            generic,
        }
    }

    pub fn poset(&self) -> &BoundedPoset {
        &self.poset
    }

    /// Elements that are generic classes.
    pub fn generic(&self) -> &[ElementId] {
        &self.generic
    }

    pub fn id(&self, name: &str) -> Option<ElementId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: ElementId) -> &str {
        self.poset.label(id)
    }

    /// `a <= b` by name; `None` if either class is unknown.
    pub fn le(&self, a: &str, b: &str) -> Option<bool> {
        Some(self.poset.le(self.id(a)?, self.id(b)?))
    }

    pub fn is_generic(&self, id: ElementId) -> bool {
        self.generic.contains(&id)
    }
}
