//! JSON mirror of a class table. Bounds are written as type-expression text.

use serde::{Deserialize, Serialize};

use super::syntax::{parse_bound, Diagnostic};
use super::{validate, ClassDecl, ClassTable, Strictness, TypeParam, NULL, OBJECT};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTableJson {
    pub classes: Vec<DeclJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclJson {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<ParamJson>,
    #[serde(default = "object")]
    pub superclass: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamJson {
    pub var: String,
    #[serde(default = "null")]
    pub lower: String,
    #[serde(default = "object")]
    pub upper: String,
}

fn object() -> String {
    OBJECT.to_owned()
}

fn null() -> String {
    NULL.to_owned()
}

impl ClassTableJson {
    pub fn parse(src: &str) -> Result<Self, Vec<Diagnostic>> {
        serde_json::from_str(src).map_err(|e| {
            vec![Diagnostic::new(
                e.line(),
                e.column(),
                format!("invalid class table JSON: {e}"),
            )]
        })
    }

    pub fn into_table(self, strictness: Strictness) -> Result<ClassTable, Vec<Diagnostic>> {
        let mut decls = Vec::new();
        let mut diags = Vec::new();
        for (i, d) in self.classes.into_iter().enumerate() {
            let param = match d.param {
                None => None,
                Some(p) => {
                    let mut bound = |text: &str| {
                        parse_bound(text, &p.var).map_err(|e| {
                            diags.push(Diagnostic::new(
                                i + 1,
                                e.column,
                                format!("bound of `{}`: {}", d.name, e.message),
                            ))
                        })
                    };
                    match (bound(&p.lower), bound(&p.upper)) {
                        (Ok(lower), Ok(upper)) => Some(TypeParam {
                            var: p.var.clone(),
                            lower,
                            upper,
                        }),
                        _ => continue,
                    }
                }
            };
            decls.push(ClassDecl {
                name: d.name,
                param,
                superclass: d.superclass,
            });
        }
        if !diags.is_empty() {
            return Err(diags);
        }
        // Diagnostics refer to the (1-based) position in the `classes` array.
        let lines: Vec<usize> = (1..=decls.len()).collect();
        validate(decls, &lines, strictness)
    }
}

impl From<&ClassTable> for ClassTableJson {
    fn from(t: &ClassTable) -> Self {
        ClassTableJson {
            classes: t
                .decls()
                .iter()
                .map(|d| DeclJson {
                    name: d.name.clone(),
                    param: d.param.as_ref().map(|p| ParamJson {
                        var: p.var.clone(),
                        lower: p.lower.to_string(),
                        upper: p.upper.to_string(),
                    }),
                    superclass: d.superclass.clone(),
                })
                .collect(),
        }
    }
}

impl ClassTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ClassTableJson::from(self)).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_class_table;
    use super::*;

    #[test]
    fn json_mirror_round_trips() {
        let t = parse_class_table(
            "class Number\nclass List<X>\nclass Enum<E extends Enum<E>> extends Object\nclass LinkedList<X> extends List",
        )
        .unwrap();
        let json = t.to_json();
        assert!(json.contains("\"upper\": \"Enum<E>\""));
        let back = ClassTableJson::parse(&json)
            .unwrap()
            .into_table(Strictness::Strict)
            .unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_defaults_and_errors() {
        let t =
            ClassTableJson::parse(r#"{"classes":[{"name":"A"},{"name":"L","param":{"var":"X"}}]}"#)
                .unwrap()
                .into_table(Strictness::Strict)
                .unwrap();
        assert_eq!(t.get("A").unwrap().superclass, OBJECT);
        assert!(t.is_generic("L"));

        let err = ClassTableJson::parse(r#"{"classes":[{"name":"A","superclass":"B"}]}"#)
            .unwrap()
            .into_table(Strictness::Strict)
            .unwrap_err();
        assert!(err[0].message.contains("unknown superclass"));
        assert!(ClassTableJson::parse("{").is_err());
    }
}
