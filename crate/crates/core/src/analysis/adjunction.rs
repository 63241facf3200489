use std::fmt;

use serde::{Deserialize, Serialize};

use super::{erase, free_type};
use crate::construction::{Checker, SubtypingPoset, TypeTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `E(t) <= c` holds but `t <: FT(c)` does not.
    ErasureToFree,
    /// `t <: FT(c)` holds but `E(t) <= c` does not.
    FreeToErasure,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::ErasureToFree => "E(t) <= c but not t <: FT(c)",
            Direction::FreeToErasure => "t <: FT(c) but not E(t) <= c",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjunctionViolation {
    pub term: TypeTerm,
    pub class: String,
    pub direction: Direction,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjunctionReport {
    pub pairs_checked: u64,
    pub violations: Vec<AdjunctionViolation>,
}

impl AdjunctionReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every element `t` of `s` and every class `c`, compares
/// `E(t) <= c` in the subclassing order with `t <: FT(c)`.
///
/// The right-hand side is read off `s` when `FT(c)` is materialized there and
/// asked of `checker` otherwise.
pub fn check_adjunction(s: &SubtypingPoset, checker: &Checker<'_>) -> AdjunctionReport {
    let classes = checker.classes();
    let table = checker.table();
    let free: Vec<(String, TypeTerm)> = table
        .class_names()
        .into_iter()
        .map(|c| {
            let ft = free_type(table, c).expect("listed classes exist");
            (c.to_owned(), ft)
        })
        .collect();

    let mut report = AdjunctionReport::default();
    for t in s.terms() {
        for (c, ft) in &free {
            report.pairs_checked += 1;
            let left = classes
                .le(erase(t), c)
                .expect("materialized terms name declared classes");
            let right = s
                .leq(t, ft)
                .unwrap_or_else(|| checker.subtype_unchecked(t, ft));
            let direction = match (left, right) {
                (true, false) => Direction::ErasureToFree,
                (false, true) => Direction::FreeToErasure,
                _ => continue,
            };
            report.violations.push(AdjunctionViolation {
                term: t.clone(),
                class: c.clone(),
                direction,
            });
        }
    }
    report
}
