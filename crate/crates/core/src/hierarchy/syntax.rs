//! Lexer and recursive-descent parser for class declarations and type
//! expressions.
//!
//! ```text
//! table   := decl* ;
//! decl    := "class" NAME params? ("extends" NAME)? ";"? ;
//! params  := "<" VAR bound* ">" ;
//! bound   := ("extends" typeexp) | ("super" typeexp) ;
//! typeexp := NAME ("<" arg ">")? ;
//! arg     := typeexp | VAR | interval | "?" | "?" ("extends"|"super"|"<:") typeexp
//!          | typeexp "<:" "?" | "!" ;
//! interval:= "[" typeexp "," typeexp "]" ;
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// A type expression, possibly mentioning the declaring class's type variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeExpr {
    Var(String),
    Class {
        name: String,
        arg: Option<Box<ArgExpr>>,
    },
    /// `C<!>`
    Cofree(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArgExpr {
    Exact(TypeExpr),
    /// `?`
    Unbounded,
    /// `? extends T`
    Extends(TypeExpr),
    /// `? super T`
    Super(TypeExpr),
    /// `[S, T]`
    Interval(TypeExpr, TypeExpr),
}

impl TypeExpr {
    pub fn class(name: impl Into<String>) -> Self {
        TypeExpr::Class {
            name: name.into(),
            arg: None,
        }
    }

    pub fn applied(name: impl Into<String>, arg: ArgExpr) -> Self {
        TypeExpr::Class {
            name: name.into(),
            arg: Some(Box::new(arg)),
        }
    }

    pub fn mentions_var(&self) -> bool {
        match self {
            TypeExpr::Var(_) => true,
            TypeExpr::Cofree(_) => false,
            TypeExpr::Class { arg, .. } => arg.as_deref().is_some_and(ArgExpr::mentions_var),
        }
    }

    /// Visits every class mentioned, with the shape it is used at.
    pub(crate) fn for_each_class(&self, f: &mut impl FnMut(&str, Shape)) {
        match self {
            TypeExpr::Var(_) => {}
            TypeExpr::Cofree(name) => f(name, Shape::Cofree),
            TypeExpr::Class { name, arg } => {
                f(
                    name,
                    if arg.is_some() {
                        Shape::Applied
                    } else {
                        Shape::Plain
                    },
                );
                if let Some(arg) = arg {
                    arg.for_each_type(&mut |t| t.for_each_class(f));
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Shape {
    Plain,
    Applied,
    Cofree,
}

impl ArgExpr {
    pub fn mentions_var(&self) -> bool {
        let mut found = false;
        self.for_each_type(&mut |t| found |= t.mentions_var());
        found
    }

    fn for_each_type(&self, f: &mut impl FnMut(&TypeExpr)) {
        match self {
            ArgExpr::Unbounded => {}
            ArgExpr::Exact(t) | ArgExpr::Extends(t) | ArgExpr::Super(t) => f(t),
            ArgExpr::Interval(s, t) => {
                f(s);
                f(t);
            }
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Var(v) => f.write_str(v),
            TypeExpr::Cofree(name) => write!(f, "{name}<!>"),
            TypeExpr::Class { name, arg: None } => f.write_str(name),
            TypeExpr::Class {
                name,
                arg: Some(arg),
            } => write!(f, "{name}<{arg}>"),
        }
    }
}

impl fmt::Display for ArgExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgExpr::Exact(t) => write!(f, "{t}"),
            ArgExpr::Unbounded => f.write_str("?"),
            ArgExpr::Extends(t) => write!(f, "? extends {t}"),
            ArgExpr::Super(t) => write!(f, "? super {t}"),
            ArgExpr::Interval(s, t) => write!(f, "[{s}, {t}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// `X extends T`
    Upper,
    /// `X super T`
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedParam {
    pub var: String,
    pub bounds: Vec<(BoundKind, TypeExpr, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedDecl {
    pub name: String,
    pub line: usize,
    pub param: Option<ParsedParam>,
    pub superclass: Option<String>,
}

/// A query line: `T1 <: T2` or `A ⊑ B` (also written `A <= B`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryExpr {
    Subtype(TypeExpr, TypeExpr),
    Contains(ArgExpr, ArgExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Lt,
    Gt,
    SubOp,
    ContainedIn,
    Comma,
    LBrack,
    RBrack,
    Question,
    Bang,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::SubOp => f.write_str("`<:`"),
            Tok::ContainedIn => f.write_str("`⊑`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Question => f.write_str("`?`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '/' {
            bump(&mut chars);
            if chars.peek() == Some(&'/') {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            return Err(Diagnostic::new(l, col, "unexpected `/`"));
        }
        if c.is_alphabetic() || c == '_' || c == '$' {
            let mut ident = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' || c == '$' || c == '.' {
                    ident.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(ident),
                line: l,
                column: col,
            });
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            '<' => match chars.peek() {
                Some(':') => {
                    bump(&mut chars);
                    Tok::SubOp
                }
                Some('=') => {
                    bump(&mut chars);
                    Tok::ContainedIn
                }
                _ => Tok::Lt,
            },
            '⊑' => Tok::ContainedIn,
            '>' => Tok::Gt,
            ',' => Tok::Comma,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '?' => Tok::Question,
            '!' => Tok::Bang,
            ';' => Tok::Semi,
            other => {
                return Err(Diagnostic::new(
                    l,
                    col,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push(Token {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// The type variable in scope, if any.
    var: Option<String>,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn new(src: &str, var: Option<&str>) -> PResult<Self> {
        Ok(Self {
            toks: lex(src)?,
            pos: 0,
            var: var.map(str::to_owned),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> Diagnostic {
        let t = self.here();
        Diagnostic::new(t.line, t.column, msg)
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !matches!(s.as_str(), "class" | "extends" | "super") => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected {what}, found {other}"))),
        }
    }

    fn type_expr(&mut self) -> PResult<TypeExpr> {
        let name = self.ident("a type name")?;
        if self.var.as_deref() == Some(name.as_str()) {
            if *self.peek() == Tok::Lt {
                return Err(self.error(format!("type variable `{name}` cannot take arguments")));
            }
            return Ok(TypeExpr::Var(name));
        }
        if *self.peek() != Tok::Lt {
            return Ok(TypeExpr::class(name));
        }
        self.bump();
        if *self.peek() == Tok::Bang {
            self.bump();
            self.expect(Tok::Gt)?;
            return Ok(TypeExpr::Cofree(name));
        }
        let arg = self.arg_expr()?;
        if *self.peek() == Tok::Comma {
            return Err(self.error("classes take at most one type argument"));
        }
        self.expect(Tok::Gt)?;
        Ok(TypeExpr::applied(name, arg))
    }

    fn arg_expr(&mut self) -> PResult<ArgExpr> {
        match self.peek() {
            Tok::Question => {
                self.bump();
                if self.is_kw("extends") || *self.peek() == Tok::SubOp {
                    self.bump();
                    Ok(ArgExpr::Extends(self.type_expr()?))
                } else if self.is_kw("super") {
                    self.bump();
                    Ok(ArgExpr::Super(self.type_expr()?))
                } else {
                    Ok(ArgExpr::Unbounded)
                }
            }
            Tok::LBrack => {
                self.bump();
                let lo = self.type_expr()?;
                self.expect(Tok::Comma)?;
                let hi = self.type_expr()?;
                self.expect(Tok::RBrack)?;
                Ok(ArgExpr::Interval(lo, hi))
            }
            _ => {
                let t = self.type_expr()?;
                if *self.peek() == Tok::SubOp && *self.peek_at(1) == Tok::Question {
                    self.bump();
                    self.bump();
                    Ok(ArgExpr::Super(t))
                } else {
                    Ok(ArgExpr::Exact(t))
                }
            }
        }
    }

    fn at_end(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(format!(
                "unexpected {} after end of expression",
                self.peek()
            )))
        }
    }

    fn decl(&mut self) -> PResult<ParsedDecl> {
        let line = self.here().line;
        if !self.is_kw("class") {
            return Err(self.error(format!("expected `class`, found {}", self.peek())));
        }
        self.bump();
        let name = self.ident("a class name")?;
        let mut param = None;
        if *self.peek() == Tok::Lt {
            self.bump();
            let var = self.ident("a type variable")?;
            self.var = Some(var.clone());
            let bounds = self.bounds();
            self.var = None;
            param = Some(ParsedParam {
                var,
                bounds: bounds?,
            });
        }
        let mut superclass = None;
        if self.is_kw("extends") {
            self.bump();
            let sup = self.ident("a superclass name")?;
            if *self.peek() == Tok::Lt {
                return Err(self.error(format!(
                    "superclass `{sup}` must be written without type arguments \
                     (a generic subclass passes its argument through)"
                )));
            }
            superclass = Some(sup);
        }
        if *self.peek() == Tok::Semi {
            self.bump();
        }
        Ok(ParsedDecl {
            name,
            line,
            param,
            superclass,
        })
    }

    fn bounds(&mut self) -> PResult<Vec<(BoundKind, TypeExpr, usize)>> {
        let mut bounds = Vec::new();
        loop {
            let line = self.here().line;
            let kind = if self.is_kw("extends") || *self.peek() == Tok::SubOp {
                BoundKind::Upper
            } else if self.is_kw("super") {
                BoundKind::Lower
            } else {
                break;
            };
            self.bump();
            bounds.push((kind, self.type_expr()?, line));
        }
        if *self.peek() == Tok::Comma {
            return Err(self.error("classes take at most one type parameter"));
        }
        self.expect(Tok::Gt)?;
        Ok(bounds)
    }

    /// Skips to the next `class` keyword after an error in the declaration
    /// that started at token `start`.
    fn recover(&mut self, start: usize) {
        if self.pos == start {
            self.bump();
        }
        while *self.peek() != Tok::Eof && !self.is_kw("class") {
            self.bump();
        }
    }
}

/// Parses a whole declaration file, collecting every syntax error.
pub fn parse_decls(src: &str) -> Result<Vec<ParsedDecl>, Vec<Diagnostic>> {
    let mut p = Parser::new(src, None).map_err(|d| vec![d])?;
    let mut decls = Vec::new();
    let mut diags = Vec::new();
    while *p.peek() != Tok::Eof {
        let start = p.pos;
        match p.decl() {
            Ok(d) => decls.push(d),
            Err(d) => {
                diags.push(d);
                p.recover(start);
            }
        }
    }
    if diags.is_empty() {
        Ok(decls)
    } else {
        Err(diags)
    }
}

/// Parses a single closed type expression such as `List<? extends Number>`.
pub fn parse_type(src: &str) -> Result<TypeExpr, Diagnostic> {
    let mut p = Parser::new(src, None)?;
    let t = p.type_expr()?;
    p.at_end()?;
    Ok(t)
}

/// Parses a type expression in which `var` names the type variable.
pub fn parse_bound(src: &str, var: &str) -> Result<TypeExpr, Diagnostic> {
    let mut p = Parser::new(src, Some(var))?;
    let t = p.type_expr()?;
    p.at_end()?;
    Ok(t)
}

pub fn parse_arg(src: &str) -> Result<ArgExpr, Diagnostic> {
    let mut p = Parser::new(src, None)?;
    let a = p.arg_expr()?;
    p.at_end()?;
    Ok(a)
}

pub fn parse_query(src: &str) -> Result<QueryExpr, Diagnostic> {
    let mut p = Parser::new(src, None)?;
    let lhs = p.arg_expr()?;
    match p.peek() {
        Tok::ContainedIn => {
            p.bump();
            let rhs = p.arg_expr()?;
            p.at_end()?;
            Ok(QueryExpr::Contains(lhs, rhs))
        }
        Tok::SubOp => {
            p.bump();
            let ArgExpr::Exact(lhs) = lhs else {
                return Err(Diagnostic::new(1, 1, "left side of `<:` must be a type"));
            };
            let rhs = p.type_expr()?;
            p.at_end()?;
            Ok(QueryExpr::Subtype(lhs, rhs))
        }
        other => Err(p.error(format!("expected `<:` or `⊑`, found {other}"))),
    }
}
