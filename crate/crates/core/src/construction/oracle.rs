use serde::{Deserialize, Serialize};

use super::build::SubtypingPoset;
use super::query::Checker;
use super::term::TypeTerm;

/// Number of disagreements listed in full.
const LISTED: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub sub: TypeTerm,
    pub sup: TypeTerm,
    pub materialized: bool,
    pub query: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub elements: usize,
    pub pairs_checked: u64,
    pub disagreements: Vec<Disagreement>,
    pub total_disagreements: u64,
}

impl OracleReport {
    pub fn is_ok(&self) -> bool {
        self.total_disagreements == 0
    }
}

/// Compares the materialized order with the checker on every ordered pair.
pub fn oracle_check(s: &SubtypingPoset, checker: &Checker<'_>) -> OracleReport {
    let mut report = OracleReport {
        elements: s.len(),
        ..OracleReport::default()
    };
    let p = s.poset();
    for x in s.elements() {
        let tx = s.term(x);
        for y in s.elements() {
            let materialized = p.le(x, y);
            let query = checker.subtype_unchecked(tx, s.term(y));
            report.pairs_checked += 1;
            if materialized != query {
                report.total_disagreements += 1;
                if report.disagreements.len() < LISTED {
                    report.disagreements.push(Disagreement {
                        sub: tx.clone(),
                        sup: s.term(y).clone(),
                        materialized,
                        query,
                    });
                }
            }
        }
    }
    report
}
