use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    check_adjunction, restriction_isomorphism_checks, AdjunctionReport, RestrictionReport,
};
use crate::construction::{
    oracle_check, ArgMode, BuildOptions, Checker, LevelStats, OracleReport, SubtypingPoset,
};
use crate::operators::{intervals, wildcards, WildcardPolicy};
use crate::poset::LawReport;

/// Argument count of one level against the closed-form expectation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityCheck {
    pub level: usize,
    /// Elements of the level the arguments are built over.
    pub types: usize,
    pub arguments: usize,
    pub expected: usize,
    /// How `expected` was obtained, e.g. `3n-2`.
    pub formula: String,
}

impl CardinalityCheck {
    pub fn is_ok(&self) -> bool {
        self.arguments == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub depth: usize,
    pub arg_mode: ArgMode,
    pub wc_policy: WildcardPolicy,
    pub levels: Vec<LevelStats>,
    /// Laws of every level followed by laws of every argument poset.
    pub laws: Vec<LawReport>,
    /// `S_i` embeds in `S_{i+1}`, one entry per consecutive pair.
    pub embeddings: Vec<bool>,
    pub cardinality: Vec<CardinalityCheck>,
    pub oracle: OracleReport,
    pub adjunction: AdjunctionReport,
    /// Absent at depth 0 when generic classes exist.
    pub restriction: Option<RestrictionReport>,
    pub ok: bool,
}

pub(crate) fn run_checks(
    levels: &[SubtypingPoset],
    checker: &Checker<'_>,
    opts: &BuildOptions,
) -> CheckReport {
    let top = levels.last().expect("S_0 is always built");
    let mut laws: Vec<LawReport> = levels.iter().map(|s| s.poset().check_laws()).collect();
    let mut cardinality = Vec::new();
    for (i, s) in levels[..levels.len() - 1].iter().enumerate() {
        let n = s.len();
        let (args, expected, formula) = match opts.arg_mode {
            ArgMode::Wildcards => {
                let a = wildcards(s.poset(), opts.wc_policy).expect("levels are bounded");
                match opts.wc_policy {
                    WildcardPolicy::Paper => (a.poset, 3 * n - 2, "3n-2"),
                    WildcardPolicy::Semantic => (a.poset, 3 * n - 3, "3n-3"),
                }
            }
            ArgMode::Intervals => {
                let a = intervals(s.poset());
                let pairs = s.poset().comparable_count();
                (a.poset, pairs, "comparable pairs")
            }
        };
        laws.push(args.check_laws());
        cardinality.push(CardinalityCheck {
            level: i,
            types: n,
            arguments: args.len(),
            expected,
            formula: formula.to_owned(),
        });
    }
    let embeddings = levels
        .windows(2)
        .map(|w| w[1].embedding_of(&w[0]).is_some())
        .collect::<Vec<_>>();
    let oracle = oracle_check(top, checker);
    let adjunction = check_adjunction(top, checker);
    let restriction = restriction_isomorphism_checks(top, checker).ok();

    let ok = laws.iter().all(LawReport::is_ok)
        && embeddings.iter().all(|&e| e)
        && cardinality.iter().all(CardinalityCheck::is_ok)
        && oracle.is_ok()
        && adjunction.is_ok()
        && restriction.as_ref().is_none_or(RestrictionReport::is_ok);
    CheckReport {
        depth: top.depth(),
        arg_mode: opts.arg_mode,
        wc_policy: opts.wc_policy,
        levels: levels.iter().map(SubtypingPoset::stats).collect(),
        laws,
        embeddings,
        cardinality,
        oracle,
        adjunction,
        restriction,
        ok,
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "[ok]  "
    } else {
        "[FAIL]"
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.levels.iter().map(|l| l.elements.to_string()).collect();
        writeln!(
            f,
            "S_{} ({}, {} policy): level sizes [{}]",
            self.depth,
            self.arg_mode,
            self.wc_policy,
            sizes.join(", ")
        )?;

        let laws_ok = self.laws.iter().all(LawReport::is_ok);
        let triples: u64 = self.laws.iter().map(|l| l.triples_checked).sum();
        writeln!(
            f,
            "{} poset laws: {} posets, {triples} triples",
            mark(laws_ok),
            self.laws.len()
        )?;
        for l in self.laws.iter().filter(|l| !l.is_ok()) {
            writeln!(f, "         {l}")?;
        }

        let emb_ok = self.embeddings.iter().all(|&e| e);
        writeln!(
            f,
            "{} level embeddings: {} of {}",
            mark(emb_ok),
            self.embeddings.iter().filter(|&&e| e).count(),
            self.embeddings.len()
        )?;

        for c in &self.cardinality {
            writeln!(
                f,
                "{} arguments over S_{}: n = {}, {} arguments, {} = {}",
                mark(c.is_ok()),
                c.level,
                c.types,
                c.arguments,
                c.formula,
                c.expected
            )?;
        }

        writeln!(
            f,
            "{} oracle: {} pairs, {} disagreements",
            mark(self.oracle.is_ok()),
            self.oracle.pairs_checked,
            self.oracle.total_disagreements
        )?;
        for d in &self.oracle.disagreements {
            writeln!(
                f,
                "         {} <: {}: materialized {}, query {}",
                d.sub, d.sup, d.materialized, d.query
            )?;
        }

        writeln!(
            f,
            "{} adjunction: {} pairs, {} violations",
            mark(self.adjunction.is_ok()),
            self.adjunction.pairs_checked,
            self.adjunction.violations.len()
        )?;
        for v in self.adjunction.violations.iter().take(32) {
            writeln!(
                f,
                "         t = {}, c = {}: {}",
                v.term, v.class, v.direction
            )?;
        }

        match &self.restriction {
            None => writeln!(f, "[skip] restrictions: need depth at least 1")?,
            Some(r) => {
                writeln!(
                    f,
                    "{} free restriction: isomorphic {}, canonical map {}",
                    mark(r.free.is_ok()),
                    r.free.isomorphic,
                    r.free.canonical_map
                )?;
                match &r.cofree {
                    None => writeln!(f, "[skip] cofree restriction: enable with --cofree")?,
                    Some(c) => writeln!(
                        f,
                        "{} cofree restriction: isomorphic {}, canonical map {}",
                        mark(c.is_ok()),
                        c.isomorphic,
                        c.canonical_map
                    )?,
                }
            }
        }
        if self.ok {
            writeln!(f, "all checks passed")
        } else {
            writeln!(f, "violations found")
        }
    }
}
