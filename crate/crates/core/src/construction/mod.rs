//! Depth-bounded construction of the subtyping order, a structural checker
//! for queries at any depth, and a differential check between the two.

mod build;
mod oracle;
mod query;
mod term;

pub use build::{
    build_levels, build_subtyping, ArgMode, BuildError, BuildOptions, ElementJson, LevelStats,
    SubtypingJson, SubtypingPoset, DEFAULT_BUDGET,
};
pub use oracle::{oracle_check, Disagreement, OracleReport};
pub use query::{
    Checker, Derivation, Goal, NoTrace, QueryError, QueryOptions, Rule, TraceStep, Tracer,
};
pub use term::{AdmitError, TypeArg, TypeTerm};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::parse_class_table;
    use crate::operators::WildcardPolicy;

    pub(crate) const SAMPLE: &str = "\
class Number extends Object;
class Integer extends Number;
class String extends Object;
class List<X> extends Object;
class LinkedList<X> extends List;
class Enum<X extends Enum<X>> extends Object;
";

    fn t(s: &str) -> TypeTerm {
        s.parse().unwrap()
    }

    #[test]
    fn level_zero_is_the_plain_classes() {
        let table = parse_class_table(SAMPLE).unwrap();
        let s0 = build_subtyping(&table, &BuildOptions::new(0, ArgMode::Wildcards)).unwrap();
        let mut names: Vec<String> = s0.terms().iter().map(ToString::to_string).collect();
        names.sort();
        assert_eq!(names, ["Integer", "Null", "Number", "Object", "String"]);
    }

    #[test]
    fn level_one_with_wildcards() {
        let table = parse_class_table(SAMPLE).unwrap();
        let levels = build_levels(&table, &BuildOptions::new(1, ArgMode::Wildcards)).unwrap();
        let s1 = &levels[1];
        // 5 plain classes, 3 generic classes times 3*5-2 wildcard arguments.
        assert_eq!(s1.len(), 5 + 3 * 13);
        assert_eq!(
            s1.leq(&t("List<? extends Number>"), &t("List<? extends Object>")),
            Some(true)
        );
        for x in s1.terms() {
            if let TypeTerm::Applied(c, a) = x {
                if &**c == "LinkedList" {
                    let up = TypeTerm::applied("List", a.clone());
                    assert_eq!(s1.leq(x, &up), Some(true));
                }
            }
        }
        assert!(s1.embedding_of(&levels[0]).is_some());
        assert!(s1.poset().check_laws().is_ok());
    }

    #[test]
    fn oracle_agrees_on_small_levels() {
        let table = parse_class_table(SAMPLE).unwrap();
        for policy in [WildcardPolicy::Paper, WildcardPolicy::Semantic] {
            for mode in [ArgMode::Wildcards, ArgMode::Intervals] {
                let opts = BuildOptions::new(1, mode).with_policy(policy);
                let s = build_subtyping(&table, &opts).unwrap();
                let checker = Checker::new(&table, QueryOptions::default().with_policy(policy));
                let r = oracle_check(&s, &checker);
                assert!(r.is_ok(), "{policy} {mode}: {:?}", r.disagreements);
            }
        }
    }

    #[test]
    fn empty_table_has_four_pairs() {
        let table = crate::hierarchy::ClassTable::empty();
        let s = build_subtyping(&table, &BuildOptions::new(3, ArgMode::Wildcards)).unwrap();
        let r = oracle_check(&s, &Checker::new(&table, QueryOptions::default()));
        assert_eq!((r.pairs_checked, r.total_disagreements), (4, 0));
    }

    #[test]
    fn budget_reports_level_sizes() {
        let table = parse_class_table(SAMPLE).unwrap();
        let opts = BuildOptions::new(3, ArgMode::Wildcards).with_budget(1_000);
        match build_subtyping(&table, &opts).unwrap_err() {
            BuildError::BudgetExceeded { level, sizes, .. } => {
                assert_eq!(level, 3);
                assert_eq!(&sizes[..3], &[5, 44, 395]);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn json_export_round_trips() {
        let table = parse_class_table(SAMPLE).unwrap();
        let s = build_subtyping(&table, &BuildOptions::new(1, ArgMode::Intervals)).unwrap();
        let json = serde_json::to_string(&s.to_json()).unwrap();
        let back: SubtypingJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s.to_json());
        let covers: usize = back.elements.iter().map(|e| e.covers.len()).sum();
        assert_eq!(covers, s.poset().covers().len());
    }
}
