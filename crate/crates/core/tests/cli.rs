mod common;

use std::path::PathBuf;

use genord::analysis::{FixpointReport, ValidityVerdict};
use genord::cli::{run, BuildReport, CheckReport, QueryReport};
use genord::construction::Rule;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn genord(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("genord").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

/// Parses `json` as `T` and checks that re-serializing gives the same value.
fn round_trip<T>(json: &str) -> T
where
    T: serde::de::DeserializeOwned + serde::Serialize + PartialEq + std::fmt::Debug,
{
    let value: T = serde_json::from_str(json).unwrap();
    let again: T = serde_json::from_str(&serde_json::to_string(&value).unwrap()).unwrap();
    assert_eq!(again, value);
    let raw: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(serde_json::to_value(&value).unwrap(), raw);
    value
}

#[test]
fn build_prints_level_sizes() {
    let r = genord(&["build", &fixture("lists.classes")]);
    assert_eq!(r.code, 0, "{}", r.err);
    // |wc(S_0)| = 3*5-2 = 13, two generic classes.
    assert!(r.out.contains("sizes: [5, 31]"), "{}", r.out);

    let r = genord(&["build", &fixture("lists.classes"), "--depth", "0"]);
    assert!(r.out.contains("sizes: [5]"), "{}", r.out);
}

#[test]
fn build_json_and_dot() {
    let r = genord(&["build", &fixture("sample.classes"), "--format", "json"]);
    assert_eq!(r.code, 0);
    let report: BuildReport = round_trip(&r.out);
    assert_eq!(report.poset.elements.len(), 44);
    assert_eq!(report.levels.len(), 2);

    let r = genord(&["build", &fixture("sample.classes"), "--format", "dot"]);
    assert!(r.out.starts_with("digraph"));
    assert!(r.out.contains("rankdir=BT"));
    let edges = r.out.lines().filter(|l| l.contains("->")).count();
    assert_eq!(edges, report.levels[1].covers);
}

#[test]
fn build_writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s1.dot");
    let r = genord(&[
        "build",
        &fixture("sample.classes"),
        "--format",
        "dot",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    assert!(r.out.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("digraph"));
}

#[test]
fn input_problems_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.classes");
    std::fs::write(&empty, "").unwrap();
    let r = genord(&["build", empty.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("no class declarations"), "{}", r.err);

    let bad = dir.path().join("bad.classes");
    std::fs::write(&bad, "class A extends B;\n").unwrap();
    let r = genord(&["build", bad.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("1:"), "{}", r.err);

    assert_eq!(genord(&["build", "/nonexistent/file"]).code, 2);
    assert_eq!(genord(&["build"]).code, 2);
    assert_eq!(
        genord(&["build", &fixture("sample.classes"), "--budget", "0"]).code,
        2
    );
    assert_eq!(genord(&["--help"]).code, 0);
}

#[test]
fn json_tables_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let src = std::fs::read_to_string(fixture("sample.classes")).unwrap();
    let table = genord::parse_class_table(&src).unwrap();
    let path = dir.path().join("sample.json");
    std::fs::write(&path, table.to_json()).unwrap();
    let r = genord(&["build", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("sizes: [5, 44]"));
}

#[test]
fn budget_exceeded_exits_with_3() {
    let r = genord(&[
        "build",
        &fixture("sample.classes"),
        "--depth",
        "3",
        "--budget",
        "1000",
    ]);
    assert_eq!(r.code, 3);
    assert!(r.err.contains("[5, 44, 395, 3554]"), "{}", r.err);
}

#[test]
fn queries_print_derivations() {
    let f = fixture("sample.classes");
    let r = genord(&["query", &f, "Null <: List<String>"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("true\n"));
    assert!(r.out.contains("[null-bottom]"));

    let r = genord(&["query", &f, "LinkedList<String> <: List<?>"]);
    assert!(r.out.starts_with("true\n"));
    assert!(r.out.contains("[generic]") && r.out.contains("[containment]"));

    let r = genord(&[
        "query",
        &f,
        "List<Integer> <: List<Number>",
        "--format",
        "json",
    ]);
    let report: QueryReport = round_trip(&r.out);
    assert!(!report.holds);
    assert_eq!(report.derivation.steps[0].rule, Rule::Generic);

    let r = genord(&["query", &f, "[Integer, Number] ⊑ ?"]);
    assert!(r.out.starts_with("true\n"), "{}", r.out);
    let r = genord(&["query", &f, "? extends Number <= ? extends Integer"]);
    assert!(r.out.starts_with("false\n"), "{}", r.out);
}

#[test]
fn bad_queries_exit_with_2() {
    let f = fixture("sample.classes");
    assert_eq!(genord(&["query", &f, "List<Integer> <:"]).code, 2);
    assert_eq!(genord(&["query", &f, "String<Object> <: Object"]).code, 2);
    assert_eq!(genord(&["query", &f, "List<!> <: List<?>"]).code, 2);
    let r = genord(&["query", &f, "List<!> <: List<?>", "--cofree"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("true\n"));
}

#[test]
fn check_passes_on_the_sample() {
    let r = genord(&[
        "check",
        &fixture("sample.classes"),
        "--depth",
        "2",
        "--cofree",
    ]);
    assert_eq!(r.code, 0, "{}", r.out);
    assert!(r.out.contains("3n-2 = 13"));
    assert!(r.out.contains("all checks passed"));

    let r = genord(&[
        "check",
        &fixture("sample.classes"),
        "--depth",
        "2",
        "--args",
        "intervals",
        "--format",
        "json",
    ]);
    assert_eq!(r.code, 0);
    let report: CheckReport = round_trip(&r.out);
    assert!(report.ok);
    assert_eq!(report.oracle.total_disagreements, 0);
}

#[test]
fn check_on_a_chain_matches_closed_forms() {
    let r = genord(&[
        "check",
        &fixture("chain.classes"),
        "--depth",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(r.code, 0);
    let report: CheckReport = round_trip(&r.out);
    for c in &report.cardinality {
        assert_eq!(c.arguments, 3 * c.types - 2);
    }
    let r = genord(&[
        "check",
        &fixture("chain.classes"),
        "--wc-policy",
        "semantic",
    ]);
    assert!(r.out.contains("3n-3 = 12"), "{}", r.out);
}

#[test]
fn corrupted_table_fails_the_check() {
    let r = genord(&["check", &fixture("corrupted.classes"), "--permissive"]);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("[FAIL] oracle"));
    assert!(r
        .out
        .contains("Weird <: List<?>: materialized true, query false"));
    // Without the flag the table is rejected outright.
    assert_eq!(genord(&["check", &fixture("corrupted.classes")]).code, 2);
}

#[test]
fn plain_class_between_generics_is_a_law_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("between.classes");
    std::fs::write(
        &path,
        "class L<X>; class W extends L; class G<X> extends W;",
    )
    .unwrap();
    let r = genord(&["check", path.to_str().unwrap(), "--permissive"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("transitivity"), "{}", r.err);
}

#[test]
fn validate_reports_verdicts() {
    let f = fixture("sample.classes");
    let r = genord(&["validate", &f, "Enum<Object>"]);
    assert_eq!(r.code, 0);
    assert!(r
        .out
        .contains("admittable, not valid (denotes the empty set)"));
    assert!(r.out.contains("Object <: Enum<Object>"));

    let r = genord(&["validate", &f, "List<String>", "--format", "json"]);
    let v: ValidityVerdict = round_trip(&r.out);
    assert!(v.admittable && v.valid);

    let r = genord(&["validate", &f, "String<Object>", "--format", "json"]);
    let v: ValidityVerdict = round_trip(&r.out);
    assert!(!v.admittable);
    assert_eq!(genord(&["validate", &f, "List<"]).code, 2);
}

#[test]
fn enumerate_lists_extremes() {
    let f = fixture("sample.classes");
    for class in ["List", "LinkedList", "Enum"] {
        let r = genord(&["enumerate", &f, class, "--depth", "2", "--format", "json"]);
        assert_eq!(r.code, 0);
        let rep: FixpointReport = round_trip(&r.out);
        assert!(rep.f_subtypes.contains(&"Null".parse().unwrap()));
        assert!(rep.f_supertypes.contains(&"Object".parse().unwrap()));
        assert_eq!(rep.free_type.to_string(), format!("{class}<?>"));
    }
    let r = genord(&["enumerate", &f, "Enum"]);
    assert!(
        r.out.contains("Enum-subtypes in S_1 (1): Null"),
        "{}",
        r.out
    );
    assert!(r.out.contains("free type Enum<?>"));
    assert_eq!(genord(&["enumerate", &f, "String"]).code, 2);
    assert_eq!(genord(&["enumerate", &f, "Map"]).code, 2);
}
