//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check finds a violation, 2 for input
//! problems (unreadable file, syntax or validation errors, bad terms), 3 when
//! the element budget is exceeded.

mod check;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{enumerate_fixpoints, validity, AnalysisError, FixpointReport};
use crate::construction::{
    build_levels, ArgMode, BuildError, BuildOptions, Checker, Derivation, LevelStats, QueryOptions,
    SubtypingJson, TypeArg, TypeTerm, DEFAULT_BUDGET,
};
use crate::hierarchy::{load_class_table, parse_query, ClassTable, QueryExpr, Strictness};
use crate::operators::WildcardPolicy;

pub use check::{CardinalityCheck, CheckReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "genord",
    version,
    about = "Build and analyze the subtyping order generated by a class hierarchy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build S_k and print level sizes, or the whole order as JSON or DOT.
    Build(RunConfig),
    /// Decide `T1 <: T2` or `A ⊑ B` and print the derivation.
    Query {
        #[command(flatten)]
        config: RunConfig,
        /// e.g. "LinkedList<String> <: List<?>" or "Integer ⊑ ? extends Number"
        query: String,
    },
    /// Run law, oracle, adjunction, restriction and cardinality checks.
    Check(RunConfig),
    /// Report whether a type is admittable and valid.
    Validate {
        #[command(flatten)]
        config: RunConfig,
        /// e.g. "Enum<Object>"
        term: String,
    },
    /// List F-subtypes and F-supertypes of a generic class within S_k.
    Enumerate {
        #[command(flatten)]
        config: RunConfig,
        /// A generic class.
        class: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Class table: declaration file or its JSON form.
    input: PathBuf,
    /// Number of construction steps k.
    #[arg(long, default_value_t = 1)]
    depth: usize,
    /// Argument operator used at each step.
    #[arg(long = "args", value_enum, default_value_t = ArgModeArg::Wildcards)]
    arg_mode: ArgModeArg,
    /// Which wildcard arguments are identified.
    #[arg(long, value_enum, default_value_t = PolicyArg::Paper)]
    wc_policy: PolicyArg,
    /// Enable cofree types `C<!>` in queries and checks.
    #[arg(long)]
    cofree: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest number of elements any level may have.
    #[arg(long, default_value_t = DEFAULT_BUDGET as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Write the main output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accept non-generic classes that extend generic ones. Such tables can
    /// produce inconsistent orders; useful for exercising the checks.
    #[arg(long)]
    permissive: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ArgModeArg {
    Wildcards,
    Intervals,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PolicyArg {
    Paper,
    Semantic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Dot,
}

impl RunConfig {
    fn build_options(&self) -> BuildOptions {
        BuildOptions {
            depth: self.depth,
            arg_mode: match self.arg_mode {
                ArgModeArg::Wildcards => ArgMode::Wildcards,
                ArgModeArg::Intervals => ArgMode::Intervals,
            },
            wc_policy: self.policy(),
            budget: usize::try_from(self.budget).unwrap_or(usize::MAX),
        }
    }

    fn policy(&self) -> WildcardPolicy {
        match self.wc_policy {
            PolicyArg::Paper => WildcardPolicy::Paper,
            PolicyArg::Semantic => WildcardPolicy::Semantic,
        }
    }

    fn query_options(&self) -> QueryOptions {
        QueryOptions::default()
            .with_cofree(self.cofree)
            .with_policy(self.policy())
    }
}

/// `build --format json` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub levels: Vec<LevelStats>,
    pub poset: SubtypingJson,
}

/// `query --format json` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryReport {
    pub query: String,
    pub holds: bool,
    pub derivation: Derivation,
}

/// A failed command: exit code plus message for stderr.
struct Failure(i32, String);

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure(EXIT_INPUT, msg.into())
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::BudgetExceeded { .. } => Failure(EXIT_BUDGET, e.to_string()),
            BuildError::Operator { .. } => Failure(EXIT_VIOLATION, e.to_string()),
        }
    }
}

/// Runs the command line `args` (including the program name), writing the
/// main output to `out` (unless `--out` is given) and messages to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let config = match &cli.command {
        Command::Build(c) | Command::Check(c) => c,
        Command::Query { config, .. }
        | Command::Validate { config, .. }
        | Command::Enumerate { config, .. } => config,
    };
    let result = load(config).and_then(|table| match &cli.command {
        Command::Build(c) => cmd_build(&table, c),
        Command::Query { config, query } => cmd_query(&table, config, query),
        Command::Check(c) => cmd_check(&table, c),
        Command::Validate { config, term } => cmd_validate(&table, config, term),
        Command::Enumerate { config, class } => cmd_enumerate(&table, config, class),
    });
    let (code, text) = match result {
        Ok(output) => output,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return code;
        }
    };
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    code
}

type Output = Result<(i32, String), Failure>;

fn load(config: &RunConfig) -> Result<ClassTable, Failure> {
    let src = std::fs::read_to_string(&config.input)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", config.input.display())))?;
    let strictness = if config.permissive {
        Strictness::Permissive
    } else {
        Strictness::Strict
    };
    load_class_table(&src, strictness).map_err(|diags| {
        let lines: Vec<String> = diags
            .iter()
            .map(|d| format!("{}:{d}", display_path(&config.input)))
            .collect();
        Failure::input(lines.join("\n"))
    })
}

fn display_path(p: &Path) -> String {
    p.display().to_string()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn no_dot(command: &str) -> Failure {
    Failure::input(format!(
        "`{command}` has no DOT output; use --format text or json"
    ))
}

fn cmd_build(table: &ClassTable, config: &RunConfig) -> Output {
    let levels = build_levels(table, &config.build_options())?;
    let last = levels.last().expect("S_0 is always built");
    let stats: Vec<LevelStats> = levels.iter().map(|s| s.stats()).collect();
    let text = match config.format {
        Format::Dot => last.to_dot(),
        Format::Json => to_json(&BuildReport {
            levels: stats,
            poset: last.to_json(),
        }),
        Format::Text => {
            let mut s = String::from("level  elements  covers\n");
            for (i, l) in stats.iter().enumerate() {
                s.push_str(&format!("{i:<5}  {:<8}  {}\n", l.elements, l.covers));
            }
            let sizes: Vec<String> = stats.iter().map(|l| l.elements.to_string()).collect();
            s.push_str(&format!("sizes: [{}]\n", sizes.join(", ")));
            s
        }
    };
    Ok((EXIT_OK, text))
}

fn cmd_query(table: &ClassTable, config: &RunConfig, query: &str) -> Output {
    let parsed = parse_query(query).map_err(|d| Failure::input(format!("query: {d}")))?;
    let checker = Checker::new(table, config.query_options());
    let bad = |e: &dyn std::fmt::Display| Failure::input(e.to_string());
    let (holds, derivation) = match &parsed {
        QueryExpr::Subtype(a, b) => {
            let a = TypeTerm::from_expr(a).map_err(|e| bad(&e))?;
            let b = TypeTerm::from_expr(b).map_err(|e| bad(&e))?;
            checker.explain_subtype(&a, &b).map_err(|e| bad(&e))?
        }
        QueryExpr::Contains(inner, outer) => {
            let inner = TypeArg::from_expr(inner).map_err(|e| bad(&e))?;
            let outer = TypeArg::from_expr(outer).map_err(|e| bad(&e))?;
            checker
                .explain_contains(&outer, &inner)
                .map_err(|e| bad(&e))?
        }
    };
    let text = match config.format {
        Format::Dot => return Err(no_dot("query")),
        Format::Json => to_json(&QueryReport {
            query: query.trim().to_owned(),
            holds,
            derivation,
        }),
        Format::Text => format!("{}\n{derivation}", holds),
    };
    Ok((EXIT_OK, text))
}

fn cmd_check(table: &ClassTable, config: &RunConfig) -> Output {
    let opts = config.build_options();
    let levels = build_levels(table, &opts)?;
    let checker = Checker::new(table, config.query_options());
    let report = check::run_checks(&levels, &checker, &opts);
    let code = if report.ok { EXIT_OK } else { EXIT_VIOLATION };
    let text = match config.format {
        Format::Dot => return Err(no_dot("check")),
        Format::Json => to_json(&report),
        Format::Text => report.to_string(),
    };
    Ok((code, text))
}

fn cmd_validate(table: &ClassTable, config: &RunConfig, term: &str) -> Output {
    let t: TypeTerm = term
        .parse()
        .map_err(|d| Failure::input(format!("type: {d}")))?;
    let checker = Checker::new(table, config.query_options());
    let verdict = validity(&checker, &t);
    let text = match config.format {
        Format::Dot => return Err(no_dot("validate")),
        Format::Json => to_json(&verdict),
        Format::Text => verdict.to_string(),
    };
    Ok((EXIT_OK, text))
}

fn cmd_enumerate(table: &ClassTable, config: &RunConfig, class: &str) -> Output {
    let checker = Checker::new(table, config.query_options());
    // Validate the class before paying for the build.
    if let Some(e) = match table.arity(class) {
        None => Some(AnalysisError::UnknownClass(class.to_owned())),
        Some(0) => Some(AnalysisError::NotGeneric(class.to_owned())),
        Some(_) => None,
    } {
        return Err(Failure::input(e.to_string()));
    }
    let levels = build_levels(table, &config.build_options())?;
    let s = levels.last().expect("S_0 is always built");
    let report =
        enumerate_fixpoints(s, &checker, class).map_err(|e| Failure::input(e.to_string()))?;
    let text = match config.format {
        Format::Dot => return Err(no_dot("enumerate")),
        Format::Json => to_json(&report),
        Format::Text => render_fixpoints(&report),
    };
    Ok((EXIT_OK, text))
}

fn render_fixpoints(r: &FixpointReport) -> String {
    let list = |ts: &[TypeTerm]| {
        ts.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut s = String::new();
    let c = &r.class;
    s.push_str(&format!(
        "{c}-subtypes in S_{} ({}): {}\n",
        r.depth,
        r.f_subtypes.len(),
        list(&r.f_subtypes)
    ));
    s.push_str(&format!("  maximal: {}\n", list(&r.maximal_f_subtypes)));
    s.push_str(&format!("  minimal: {}\n", list(&r.minimal_f_subtypes)));
    s.push_str(&format!(
        "{c}-supertypes in S_{} ({}): {}\n",
        r.depth,
        r.f_supertypes.len(),
        list(&r.f_supertypes)
    ));
    s.push_str(&format!("  maximal: {}\n", list(&r.maximal_f_supertypes)));
    s.push_str(&format!("  minimal: {}\n", list(&r.minimal_f_supertypes)));
    s.push_str(&format!("fixed points: {}\n", list(&r.fixed_points)));
    s.push_str(&format!(
        "free type {0} <: {c}<{0}>: {1}\n",
        r.free_type, r.free_type_is_f_subtype
    ));
    s
}
