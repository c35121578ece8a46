use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use vincycle::avoidability::{
    avoidable_up_to, blowup_witness, classify_minimal_unavoidable, maximum_avoidable_probe, pi_set,
    witness_minus_one, AvoidError,
};
use vincycle::bijections::{
    check_cyclic_order_bijection, check_predecessor_refinement, check_zeil_refinement,
    BijectionError,
};
use vincycle::enumerator::{
    EnumError, Enumerator, Exec, SearchConfig, Statistic, DEFAULT_BUDGET_NODES,
};
use vincycle::formulas::{consecutive_123_closed_form, FormulaError, Sequence};
use vincycle::matcher::avoids_set;
use vincycle::pattern::{Pattern, PatternSet};
use vincycle::perm::LinearPerm;
use vincycle::reference::{check_table, ReferenceError};
use vincycle::table::CountTable;
use vincycle::verify::{run_suite, Check, Suite, VerifyError};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Default largest row for `table`; longer rows need `--extended`.
const TABLE_DEFAULT_N: usize = 10;

#[derive(Parser)]
#[command(
    name = "vincycle",
    version,
    about = "Vincular pattern avoidance on cyclic permutations"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for the search (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Ceiling on visited search nodes per count.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET_NODES)]
    budget_nodes: u64,
    /// Allow the long-running rows (n = 11..13) of `table`.
    #[arg(long, global = true)]
    extended: bool,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Count cyclic permutations avoiding a pattern set.
    Count {
        /// Pattern set, e.g. "[1~3,2,4]" or "[1~2~3] [3~2~1]".
        #[arg(long)]
        set: String,
        /// Length or range: 8, 1..12, 1..=12.
        #[arg(long)]
        n: String,
        /// Refine by predecessor_of_n or zeil_reverse.
        #[arg(long)]
        refine: Option<String>,
        /// Run shards on the calling thread.
        #[arg(long)]
        sequential: bool,
        /// Check occurrences only on complete permutations.
        #[arg(long)]
        no_prune: bool,
    },
    /// List avoiders in lexicographic order.
    Enumerate {
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: usize,
    },
    /// Recompute a reference table and compare every cell.
    Table {
        /// 1: length-3 doubletons; 2: length-4 single-bond patterns.
        #[arg(value_parser = ["1", "2"])]
        table: String,
        #[arg(long, default_value_t = TABLE_DEFAULT_N)]
        n_max: usize,
    },
    /// Evaluate a closed form or recurrence.
    Formula {
        /// Sequence name, or consecutive-123-closed-form for the float sum.
        name: String,
        /// Length or range.
        #[arg(long)]
        n: String,
        /// Truncation K of the closed-form sum.
        #[arg(long, default_value_t = 50)]
        terms: usize,
    },
    /// Exhaustively check one of the constructive bijections.
    BijectionCheck {
        #[arg(long, value_parser = ["3.6", "4.4", "4.5"])]
        theorem: String,
        /// Cyclic-order index for 3.6 (permutation length n + 2), otherwise
        /// the largest permutation length.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Horizon-bounded avoidability of totally vincular pattern sets.
    Unavoidable(UnavoidableArgs),
    /// Build and verify a witness permutation.
    Witness {
        #[command(subcommand)]
        kind: WitnessKind,
    },
    /// Run a property suite.
    Verify {
        #[arg(value_parser = ["symmetry", "formulas", "bijections", "avoidability", "all"])]
        suite: String,
        #[arg(long)]
        n_max: Option<usize>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct UnavoidableTarget {
    /// A set of totally vincular cyclic patterns.
    #[arg(long)]
    set: Option<String>,
    /// Shorthand for the set pi_set(i, k), given as "i,k".
    #[arg(long)]
    pi: Option<String>,
    /// Classify minimal unavoidable subsets for this k (k <= 4).
    #[arg(long)]
    classify: Option<usize>,
    /// Find the largest avoidable subsets for this k (k <= 3).
    #[arg(long)]
    maximum: Option<usize>,
}

#[derive(Args)]
struct UnavoidableArgs {
    #[command(flatten)]
    target: UnavoidableTarget,
    /// Largest length searched.
    #[arg(long)]
    horizon: usize,
    /// Largest subset size examined by --classify (default: all).
    #[arg(long)]
    max_size: Option<usize>,
}

#[derive(Subcommand)]
enum WitnessKind {
    /// pi repeated m times; avoids every totally vincular pattern outside
    /// the rotations of pi.
    Blowup {
        #[arg(long)]
        pi: String,
        #[arg(long)]
        m: usize,
    },
    /// A permutation avoiding pi_set(i, k) minus one excluded pattern.
    MinusOne {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        excluded: String,
        #[arg(long)]
        n: usize,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(m: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: m.to_string(),
        }
    }

    fn failed(m: impl ToString) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: m.to_string(),
        }
    }
}

impl From<EnumError> for Failure {
    fn from(e: EnumError) -> Self {
        let code = match e {
            EnumError::BudgetExceeded { .. } => EXIT_BUDGET,
            EnumError::ThreadPool(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<AvoidError> for Failure {
    fn from(e: AvoidError) -> Self {
        match e {
            AvoidError::Enum(e) => e.into(),
            e => Failure::usage(e),
        }
    }
}

impl From<BijectionError> for Failure {
    fn from(e: BijectionError) -> Self {
        match e {
            BijectionError::Enum(e) => e.into(),
            e => Failure::usage(e),
        }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        Failure::usage(e)
    }
}

impl From<ReferenceError> for Failure {
    fn from(e: ReferenceError) -> Self {
        match e {
            ReferenceError::Enum(e) => e.into(),
            e => Failure::failed(e),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Enum(e) => e.into(),
            VerifyError::Avoid(e) => e.into(),
            VerifyError::Bijection(e) => e.into(),
            e => Failure::failed(e),
        }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, Failure> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Failure::usage(format!("bad length `{t}` in `{s}`")))
    };
    let (lo, hi) = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b)?)
    } else {
        let v = num(s)?;
        (v, v)
    };
    if lo == 0 || lo > hi {
        return Err(Failure::usage(format!(
            "need 1 <= n_min <= n_max, got `{s}`"
        )));
    }
    Ok(lo..=hi)
}

fn parse_set(s: &str) -> Result<PatternSet, Failure> {
    s.parse()
        .map_err(|e| Failure::usage(format!("cannot parse pattern set `{s}`: {e}")))
}

fn config(g: &Global) -> SearchConfig {
    SearchConfig {
        exec: Exec::Parallel { jobs: g.jobs },
        budget_nodes: g.budget_nodes,
        prune: true,
    }
}

fn print_checks(format: Format, title: &str, checks: &[Check]) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "name": title, "checks": checks })).unwrap()
        ),
        Format::Csv => {
            println!("check,status,detail");
            for c in checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                println!("\"{}\",{status},\"{}\"", c.name, c.detail.replace('"', "'"));
            }
        }
        Format::Table => {
            println!("# {title}");
            for c in checks {
                println!("{c}");
            }
        }
    }
}

fn checks_result(checks: &[Check]) -> Result<(), Failure> {
    match checks.iter().find(|c| !c.passed) {
        None => Ok(()),
        Some(c) => Err(Failure::failed(format!("first failure: {c}"))),
    }
}

fn cmd_count(
    g: &Global,
    set: &str,
    n: &str,
    refine: Option<&str>,
    sequential: bool,
    no_prune: bool,
) -> Result<(), Failure> {
    let set = parse_set(set)?;
    let ns = parse_range(n)?;
    let stat = refine
        .map(|s| s.parse::<Statistic>().map_err(Failure::usage))
        .transpose()?;
    let mut cfg = config(g);
    if sequential {
        cfg.exec = Exec::Sequential;
    }
    cfg.prune = !no_prune;
    let print = |t: &CountTable| match g.format {
        Format::Csv => print!("{}", t.to_csv(g.timings)),
        Format::Json => print!("{}", t.to_json(g.timings)),
        Format::Table => print!("{}", t.to_text(g.timings)),
    };
    match CountTable::enumerate(&set, ns, stat, &cfg) {
        Ok(t) => {
            print(&t);
            Ok(())
        }
        Err(p) => {
            print(&p.table);
            let mut f = Failure::from(p.error.clone());
            f.message = p.to_string();
            Err(f)
        }
    }
}

fn cmd_enumerate(g: &Global, set: &str, n: usize) -> Result<(), Failure> {
    let set = parse_set(set)?;
    let all = Enumerator::new(&set, config(g))?.enumerate(n)?;
    match g.format {
        Format::Json => {
            let v: Vec<String> = all.iter().map(|s| s.to_string()).collect();
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Csv => {
            println!("permutation");
            for s in &all {
                println!("\"{}\"", s.canonical());
            }
        }
        Format::Table => {
            for s in &all {
                println!("{s}");
            }
        }
    }
    Ok(())
}

fn cmd_table(g: &Global, table: &str, n_max: usize) -> Result<(), Failure> {
    if n_max > TABLE_DEFAULT_N && !g.extended {
        return Err(Failure::usage(format!(
            "rows beyond n = {TABLE_DEFAULT_N} are long-running; pass --extended"
        )));
    }
    let id: u8 = table.parse().map_err(Failure::usage)?;
    let cells = check_table(id, n_max, &config(g))?;
    match g.format {
        Format::Json => {
            let v: Vec<_> = cells
                .iter()
                .map(|c| {
                    json!({
                        "class": c.class, "n": c.n,
                        "expected": c.expected.to_string(), "actual": c.actual.to_string(),
                        "pass": c.passed(),
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Csv => {
            println!("table,class,n,expected,actual,status");
            for c in &cells {
                let st = if c.passed() { "PASS" } else { "FAIL" };
                println!("{id},{},{},{},{},{st}", c.class, c.n, c.expected, c.actual);
            }
        }
        Format::Table => {
            for c in &cells {
                let st = if c.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{st} table {id} class {} n={:<2} expected {:>8} got {:>8}",
                    c.class, c.n, c.expected, c.actual
                );
            }
        }
    }
    let bad: Vec<String> = cells
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{}@{}", c.class, c.n))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::failed(format!(
            "mismatching cells: {}",
            bad.join(", ")
        )))
    }
}

fn cmd_formula(g: &Global, name: &str, n: &str, terms: usize) -> Result<(), Failure> {
    let ns = parse_range(n)?;
    if name == "consecutive-123-closed-form" {
        let mut rows = Vec::new();
        for m in ns {
            rows.push((m, consecutive_123_closed_form(m, terms)?));
        }
        match g.format {
            Format::Json => {
                let v: Vec<_> = rows
                    .iter()
                    .map(|(m, x)| json!({ "n": m, "approx": x, "terms": terms }))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            }
            Format::Csv => {
                println!("n,approx,terms");
                for (m, x) in rows {
                    println!("{m},{x},{terms}");
                }
            }
            Format::Table => {
                println!("# {name}, float approximation truncated at K = {terms}");
                for (m, x) in rows {
                    println!("{m:>3}  ~{x:.6}");
                }
            }
        }
        return Ok(());
    }
    let seq = Sequence::from_name(name).ok_or_else(|| {
        let names: Vec<&str> = Sequence::ALL.iter().map(|s| s.name()).collect();
        Failure::usage(format!(
            "unknown formula `{name}`; expected one of {}, consecutive-123-closed-form",
            names.join(", ")
        ))
    })?;
    let t = CountTable::formula(seq, ns)?;
    match g.format {
        Format::Csv => print!("{}", t.to_csv(g.timings)),
        Format::Json => print!("{}", t.to_json(g.timings)),
        Format::Table => print!("{}", t.to_text(g.timings)),
    }
    Ok(())
}

fn cmd_bijection(g: &Global, theorem: &str, n: Option<usize>) -> Result<(), Failure> {
    let (title, checks) = match theorem {
        "3.6" => {
            let n = n.unwrap_or(6);
            (
                format!("cyclic orders R_n versus Av_(n+2), n <= {n}"),
                check_cyclic_order_bijection(n)?,
            )
        }
        "4.4" => {
            let n = n.unwrap_or(9);
            (
                format!("[1~4,2,3] refined by the entry before n, n <= {n}"),
                check_predecessor_refinement(n)?,
            )
        }
        _ => {
            let n = n.unwrap_or(9);
            (
                format!("[1~4,3,2] refined by zeil_reverse, n <= {n}"),
                check_zeil_refinement(n)?,
            )
        }
    };
    print_checks(g.format, &title, &checks);
    checks_result(&checks)
}

fn cmd_unavoidable(g: &Global, a: &UnavoidableArgs) -> Result<(), Failure> {
    let cfg = config(g);
    let t = &a.target;
    if let Some(k) = t.classify {
        return match classify_minimal_unavoidable(
            k,
            a.horizon,
            a.max_size.unwrap_or(usize::MAX),
            &cfg,
        ) {
            Ok(r) => {
                print!("{}", r.to_json());
                Ok(())
            }
            Err(e) => {
                print!("{}", e.partial.to_json());
                let mut f = Failure::from(e.error.clone());
                f.message = e.to_string();
                Err(f)
            }
        };
    }
    if let Some(k) = t.maximum {
        let r = maximum_avoidable_probe(k, a.horizon, &cfg)?;
        print!("{}", r.to_json());
        return Ok(());
    }
    let set = match (&t.set, &t.pi) {
        (Some(s), _) => parse_set(s)?,
        (_, Some(p)) => {
            let (i, k) = p
                .split_once(',')
                .and_then(|(i, k)| Some((i.trim().parse().ok()?, k.trim().parse().ok()?)))
                .ok_or_else(|| Failure::usage(format!("expected --pi i,k, got `{p}`")))?;
            pi_set(i, k)?
        }
        _ => unreachable!("clap enforces one target"),
    };
    let r = avoidable_up_to(&set, a.horizon, &cfg)?;
    match g.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&r).unwrap()),
        Format::Csv => {
            println!("n,avoidable,first_avoider");
            for (n, w) in &r.per_n {
                println!("{n},{},\"{}\"", w.is_some(), w.as_deref().unwrap_or(""));
            }
        }
        Format::Table => {
            println!(
                "# {{{}}} up to horizon {} ({})",
                r.patterns.join(" "),
                r.horizon,
                r.evidence
            );
            for (n, w) in &r.per_n {
                match w {
                    Some(w) => println!("{n:>3}  avoidable, e.g. {w}"),
                    None => println!("{n:>3}  empty"),
                }
            }
            match r.empty_from {
                Some(n0) => println!("empty for all {n0} <= n <= {}", r.horizon),
                None => println!("nonempty at the horizon"),
            }
        }
    }
    Ok(())
}

fn cmd_witness(g: &Global, kind: &WitnessKind) -> Result<(), Failure> {
    let (sigma, target, label) = match kind {
        WitnessKind::Blowup { pi, m } => {
            let p: LinearPerm = pi
                .parse()
                .map_err(|e| Failure::usage(format!("cannot parse `{pi}`: {e}")))?;
            let w = blowup_witness(&p, *m)?;
            let s = vincycle::avoidability::rotation_closure_complement(&p);
            (w, s, format!("blow-up of {p}, m = {m}"))
        }
        WitnessKind::MinusOne { i, k, excluded, n } => {
            let ex: Pattern = excluded
                .parse()
                .map_err(|e| Failure::usage(format!("cannot parse `{excluded}`: {e}")))?;
            let w = witness_minus_one(*i, *k, &ex, *n)?;
            let s =
                pi_set(*i, *k)?.without(&PatternSet::new([ex.clone()]).map_err(Failure::usage)?);
            (w, s, format!("pi_set({i}, {k}) without {ex}, n = {n}"))
        }
    };
    let ok = avoids_set(&sigma, &target);
    match g.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "witness": sigma.to_string(), "avoids": target.strings(), "verified": ok,
            }))
            .unwrap()
        ),
        Format::Csv => println!("witness,verified\n\"{sigma}\",{ok}"),
        Format::Table => {
            println!("# {label}");
            println!("{sigma}");
            println!(
                "{} avoids all {} patterns",
                if ok { "PASS" } else { "FAIL" },
                target.len()
            );
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::failed("witness contains a forbidden pattern"))
    }
}

fn cmd_verify(g: &Global, suite: &str, n_max: Option<usize>) -> Result<(), Failure> {
    let suite: Suite = suite.parse()?;
    let reports = run_suite(suite, n_max)?;
    for r in &reports {
        print_checks(g.format, &r.suite, &r.checks);
    }
    let all: Vec<Check> = reports.into_iter().flat_map(|r| r.checks).collect();
    checks_result(&all)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Count {
            set,
            n,
            refine,
            sequential,
            no_prune,
        } => cmd_count(g, set, n, refine.as_deref(), *sequential, *no_prune),
        Command::Enumerate { set, n } => cmd_enumerate(g, set, *n),
        Command::Table { table, n_max } => cmd_table(g, table, *n_max),
        Command::Formula { name, n, terms } => cmd_formula(g, name, n, *terms),
        Command::BijectionCheck { theorem, n } => cmd_bijection(g, theorem, *n),
        Command::Unavoidable(a) => cmd_unavoidable(g, a),
        Command::Witness { kind } => cmd_witness(g, kind),
        Command::Verify { suite, n_max } => cmd_verify(g, suite, *n_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
