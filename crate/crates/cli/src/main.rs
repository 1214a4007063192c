//! `potpi`: batch front end over `potpi-core`.
//!
//! Every command streams JSON objects, one per line, and ends with a `summary`
//! record carrying the outcome and the only timing field. Exit codes: 0 pass,
//! 1 verified failure, 2 unknown, 64 usage error, 65 malformed literal,
//! 70 other library errors, 74 file errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use potpi_core::antichain::{
    beta_alpha, in_a_c, in_c_s, s_alpha_trace, s_beta, thm9_condition, AlphaSeed, SetS,
};
use potpi_core::enumeration::{density_witness, pair_code, phi, psi, s_of, tuple_code, M_of};
use potpi_core::leveltrees::{build_t0, is_uniformly_acyclic, level_edge_stats, PairTree};
use potpi_core::rho::{in_a, in_h, LazyPoint, OrdinalNotation, ThreeValued};
use potpi_core::testgen::{
    build_test, generate_tree, in_branches, verify_decomposition, verify_density,
};
use potpi_core::{Error, PointPair, RationalPoint, Word};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "potpi",
    version,
    about = "Cantor-space constructions with machine-checkable reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerations of words, integer pairs and tuples.
    Enum {
        #[command(subcommand)]
        op: EnumOp,
    },
    /// Print the levels of a tree on 2x2.
    Tree {
        kind: TreeKind,
        #[command(flatten)]
        tree: TreeArgs,
    },
    /// Check the levels of a tree.
    Check {
        kind: CheckKind,
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_enum, default_value_t = TreeKind::Gen)]
        tree_kind: TreeKind,
    },
    /// Build or verify a test table.
    Test {
        #[command(subcommand)]
        op: TestOp,
    },
    /// Membership of a point or a pair in one of the example sets.
    Member(MemberArgs),
    /// Sets of naturals and the antichain words.
    Antichain {
        #[command(subcommand)]
        op: AntichainOp,
    },
    /// Write a tree to disk.
    Export {
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_enum, default_value_t = TreeKind::Gen)]
        tree_kind: TreeKind,
    },
}

#[derive(Subcommand)]
enum EnumOp {
    /// `ψ(n)`, the n-th word in length-lex order.
    Psi { n: u64 },
    /// `s_n = ψ(n)·0^(n-|ψ(n)|)`.
    S { n: u64 },
    /// `φ(q) = (i, j)`.
    Phi { q: u64 },
    /// `⟨i, j⟩`.
    Pair { i: u64, j: u64 },
    /// Code of a nonempty integer tuple.
    Tuple {
        #[arg(required = true)]
        entries: Vec<u64>,
    },
    /// Least `n` with `t` a strict prefix of `s_n`.
    Density {
        word: String,
        #[arg(long, default_value_t = 1 << 12)]
        bound: u64,
    },
    /// `M(q)`, the largest `m` with `m(m+1)/2 ≤ q`.
    M { q: u64 },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeKind {
    T0,
    Gen,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Acyclic,
    Levels,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
}

#[derive(Args)]
struct TreeArgs {
    #[arg(long)]
    depth: usize,
    /// Drop every diagonal pair `(w, w)`.
    #[arg(long)]
    no_diagonal: bool,
}

#[derive(Subcommand)]
enum TestOp {
    Build {
        #[arg(long)]
        depth: usize,
    },
    /// Decomposition plus density over `m ≤ M`, `q ≤ Q`, `|u| ≤ U`.
    Verify {
        #[arg(long, default_value_t = 128)]
        depth: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        ulen: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetName {
    Pf,
    S1,
    E0,
    L0,
    Diag,
    A0,
    #[value(name = "aC")]
    AC,
    Branches,
    #[value(name = "H")]
    H,
    #[value(name = "A")]
    A,
}

#[derive(Args)]
struct MemberArgs {
    #[arg(long, value_enum)]
    set: SetName,
    #[arg(long, conflicts_with = "pair")]
    point: Option<String>,
    #[arg(long, num_args = 2, value_names = ["FIRST", "SECOND"])]
    pair: Option<Vec<String>>,
    #[arg(long, default_value = "0")]
    xi: String,
    #[arg(long, default_value_t = 0)]
    budget: u64,
    /// Depth of the test table behind `branches` and `A`.
    #[arg(long, default_value_t = 16)]
    depth: usize,
    /// `naturals`, `evens` or a rational `β` for `aC`.
    #[arg(long = "s", default_value = "naturals")]
    s_set: String,
}

#[derive(Subcommand)]
enum AntichainOp {
    /// First `count` elements of `S_β`.
    Sbeta {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        count: usize,
    },
    /// `s_{α,n}` and its recursion steps.
    Salpha {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
        /// Bits of `α` made available.
        #[arg(long, default_value_t = 64)]
        len: usize,
    },
    /// First `bits` bits of `β_α`.
    Beta {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        bits: usize,
        #[arg(long, default_value_t = 64)]
        len: usize,
    },
    /// Bounded translation condition on `S`.
    Thm9 {
        /// `naturals`, `evens` or a rational `β`.
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 6)]
        p: u64,
        #[arg(long, default_value_t = 16)]
        k: u64,
        #[arg(long, default_value_t = 200)]
        q: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl Outcome {
    fn from_bool(b: bool) -> Self {
        if b {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    fn from_three(v: ThreeValued) -> Self {
        match v {
            ThreeValued::One => Outcome::Pass,
            ThreeValued::Zero => Outcome::Fail,
            ThreeValued::Unknown => Outcome::Unknown,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Unknown => "unknown",
        }
    }

    fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Unknown => 2,
        }
    }
}

/// Records produced by one command, plus its echo for the summary.
struct Report {
    command: String,
    params: Value,
    records: Vec<Value>,
}

impl Report {
    fn new(command: &str, params: Value) -> Self {
        Report {
            command: command.to_owned(),
            params,
            records: Vec::new(),
        }
    }

    fn push(&mut self, record: Value) {
        self.records.push(record);
    }
}

/// Why a command could not produce a report.
enum Failure {
    Usage(String),
    Io(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Run = Result<(Report, Outcome), Failure>;

fn word(s: &str) -> Result<Word, Error> {
    Word::parse(s)
}

fn point(s: &str) -> Result<RationalPoint, Error> {
    RationalPoint::parse(s)
}

fn set_s(s: &str) -> Result<SetS, Error> {
    match s {
        "naturals" => Ok(SetS::naturals()),
        "evens" => Ok(SetS::evens()),
        beta => Ok(SetS::from_beta(&point(beta)?)),
    }
}

fn tree(kind: TreeKind, args: &TreeArgs) -> Result<PairTree, Error> {
    let tree = match kind {
        TreeKind::T0 => build_t0(args.depth),
        TreeKind::Gen => generate_tree(&build_test(args.depth)?, args.depth)?,
    };
    Ok(if args.no_diagonal {
        tree.without_diagonal()
    } else {
        tree
    })
}

fn kind_name(kind: TreeKind) -> &'static str {
    match kind {
        TreeKind::T0 => "t0",
        TreeKind::Gen => "gen",
    }
}

fn run_enum(op: &EnumOp) -> Run {
    let (name, params, record, outcome) = match op {
        EnumOp::Psi { n } => (
            "enum psi",
            json!({"n": n}),
            json!({"n": n, "word": psi(*n)}),
            Outcome::Pass,
        ),
        EnumOp::S { n } => (
            "enum s",
            json!({"n": n}),
            json!({"n": n, "word": s_of(*n)}),
            Outcome::Pass,
        ),
        EnumOp::Phi { q } => {
            let p = phi(*q);
            (
                "enum phi",
                json!({"q": q}),
                json!({"q": q, "i": p.i, "j": p.j}),
                Outcome::Pass,
            )
        }
        EnumOp::Pair { i, j } => {
            let q = pair_code(*i, *j)?;
            (
                "enum pair",
                json!({"i": i, "j": j}),
                json!({"i": i, "j": j, "q": q}),
                Outcome::Pass,
            )
        }
        EnumOp::Tuple { entries } => {
            let code = tuple_code(entries)?;
            (
                "enum tuple",
                json!({"entries": entries}),
                json!({"entries": entries, "code": code}),
                Outcome::Pass,
            )
        }
        EnumOp::Density { word: w, bound } => {
            let t = word(w)?;
            let n = density_witness(&t, *bound);
            let record = json!({"word": t, "witness": n, "s": n.map(s_of)});
            (
                "enum density",
                json!({"word": t, "bound": bound}),
                record,
                Outcome::from_bool(n.is_some()),
            )
        }
        EnumOp::M { q } => (
            "enum m",
            json!({"q": q}),
            json!({"q": q, "m": M_of(*q)}),
            Outcome::Pass,
        ),
    };
    let mut report = Report::new(name, params);
    report.push(record);
    Ok((report, outcome))
}

fn run_tree(kind: TreeKind, args: &TreeArgs) -> Run {
    let params =
        json!({"kind": kind_name(kind), "depth": args.depth, "no_diagonal": args.no_diagonal});
    let mut report = Report::new("tree", params);
    let t = tree(kind, args)?;
    for (p, level) in t.levels().iter().enumerate() {
        let pairs: Vec<_> = level.iter().map(|(s, t)| json!([s, t])).collect();
        report.push(json!({"level": p, "size": pairs.len(), "pairs": pairs}));
    }
    Ok((report, Outcome::Pass))
}

fn run_check(check: CheckKind, kind: TreeKind, args: &TreeArgs) -> Run {
    let params =
        json!({"tree": kind_name(kind), "depth": args.depth, "no_diagonal": args.no_diagonal});
    let t = tree(kind, args)?;
    match check {
        CheckKind::Acyclic => {
            let mut report = Report::new("check acyclic", params);
            let result = is_uniformly_acyclic(&t, args.depth)?;
            for level in &result.levels {
                report.push(json!(level));
            }
            Ok((report, Outcome::from_bool(result.passed())))
        }
        CheckKind::Levels => {
            let mut report = Report::new("check levels", params);
            let mut ok = true;
            for p in 0..=args.depth {
                let (edges, components) = level_edge_stats(&t, p)?;
                let expected = (1usize << p) - 1;
                let spanning = edges == expected && components == 1;
                ok &= spanning;
                report.push(json!({"level": p, "edges": edges, "expected_edges": expected, "components": components, "spanning_tree": spanning}));
            }
            Ok((report, Outcome::from_bool(ok)))
        }
    }
}

fn run_test(op: &TestOp) -> Run {
    match op {
        TestOp::Build { depth } => {
            let mut report = Report::new("test build", json!({"depth": depth}));
            let table = build_test(*depth)?;
            let rows: Value = serde_json::from_str(&table.to_json()).expect("table json");
            for row in rows.as_array().into_iter().flatten() {
                report.push(row.clone());
            }
            let ok = verify_decomposition(&table);
            report.push(json!({"decomposition": ok}));
            Ok((report, Outcome::from_bool(ok)))
        }
        TestOp::Verify { depth, m, q, ulen } => {
            let params = json!({"depth": depth, "m": m, "q": q, "ulen": ulen});
            let mut report = Report::new("test verify", params);
            let table = build_test(*depth)?;
            let decomposition = verify_decomposition(&table);
            let density = verify_density(&table, *m, *q, *ulen);
            report.push(json!({"decomposition": decomposition}));
            let complete = density.complete();
            report.push(json!({"density": density}));
            Ok((report, Outcome::from_bool(decomposition && complete)))
        }
    }
}

fn run_member(args: &MemberArgs) -> Run {
    let pair = match &args.pair {
        Some(v) => Some(PointPair::new(point(&v[0])?, point(&v[1])?)),
        None => None,
    };
    let single = args.point.as_deref().map(point).transpose()?;
    let xi = OrdinalNotation::parse(&args.xi)?;
    let set_name = SetName::to_possible_value(&args.set)
        .expect("named")
        .get_name()
        .to_owned();
    let mut params = json!({"set": set_name, "point": single, "pair": pair});
    let needs_pair = !matches!(args.set, SetName::Pf | SetName::S1 | SetName::H);
    let missing = if needs_pair {
        pair.is_none()
    } else {
        single.is_none()
    };
    if missing {
        let flag = if needs_pair { "pair" } else { "point" };
        return Err(Failure::Usage(format!("set {set_name} needs --{flag}")));
    }
    let pt = || single.clone().expect("checked");
    let pr = || pair.clone().expect("checked");
    let mut extra = json!({});
    let answer = match args.set {
        SetName::Pf => ThreeValued::from_bool(pt().in_pf()),
        SetName::S1 => ThreeValued::from_bool(pt().in_s1()),
        SetName::E0 => {
            extra = json!({"last_difference": pr().last_difference()});
            ThreeValued::from_bool(pr().in_e0())
        }
        SetName::L0 => ThreeValued::from_bool(pr().in_l0()),
        SetName::Diag => ThreeValued::from_bool(pr().in_diagonal()),
        SetName::A0 => ThreeValued::from_bool(in_a_c(&pr(), |t| *t == s_of(t.len() as u64))),
        SetName::AC => {
            let s = set_s(&args.s_set)?;
            params["s"] = json!(args.s_set);
            ThreeValued::from_bool(in_a_c(&pr(), |t| in_c_s(t, &s)))
        }
        SetName::Branches | SetName::A => {
            params["depth"] = json!(args.depth);
            let table = build_test(args.depth)?;
            let result = if args.set == SetName::A {
                params["xi"] = json!(xi);
                params["budget"] = json!(args.budget);
                in_a(&xi, &table, &pr(), args.budget)
            } else {
                in_branches(&table, &pr()).map(ThreeValued::from_bool)
            };
            match result {
                Ok(v) => v,
                Err(e @ Error::InsufficientDepth { .. }) => {
                    extra = json!({"reason": e.to_string()});
                    ThreeValued::Unknown
                }
                Err(e) => return Err(e.into()),
            }
        }
        SetName::H => {
            params["xi"] = json!(xi);
            params["budget"] = json!(args.budget);
            in_h(&xi, &LazyPoint::rational(&pt()), args.budget)
        }
    };
    let mut report = Report::new("member", params);
    let mut record = json!({"set": set_name, "answer": answer});
    if let (Some(obj), Value::Object(more)) = (record.as_object_mut(), extra) {
        obj.extend(more);
    }
    report.push(record);
    Ok((report, Outcome::from_three(answer)))
}

fn run_antichain(op: &AntichainOp) -> Run {
    match op {
        AntichainOp::Sbeta { beta, count } => {
            let b = point(beta)?;
            let mut report = Report::new("antichain sbeta", json!({"beta": b, "count": count}));
            let elements = s_beta(&b.prefix(count.saturating_sub(1)), *count)?;
            report.push(json!({"elements": elements}));
            Ok((report, Outcome::Pass))
        }
        AntichainOp::Salpha { alpha, n, len } => {
            let a = point(alpha)?;
            let mut report =
                Report::new("antichain salpha", json!({"alpha": a, "n": n, "len": len}));
            let (w, steps) = s_alpha_trace(&AlphaSeed::from_point(&a, *len), *n)?;
            for step in steps {
                report.push(json!({"step": step}));
            }
            report.push(json!({"n": n, "len": w.len(), "word": w}));
            Ok((report, Outcome::Pass))
        }
        AntichainOp::Beta { alpha, bits, len } => {
            let a = point(alpha)?;
            let mut report = Report::new(
                "antichain beta",
                json!({"alpha": a, "bits": bits, "len": len}),
            );
            let b = beta_alpha(&AlphaSeed::from_point(&a, *len), *bits)?;
            report.push(json!({"bits": bits, "prefix": b}));
            Ok((report, Outcome::Pass))
        }
        AntichainOp::Thm9 { set, p, k, q } => {
            let s = set_s(set)?;
            let params = json!({"set": set, "p": p, "k": k, "q": q});
            let mut report = Report::new("antichain thm9", params);
            let result = thm9_condition(&s, *p, *k, *q);
            let mut k_needed = Some(0);
            for level in &result.levels {
                k_needed = k_needed.zip(level.k).map(|(a, b)| a.max(b));
                // witness lists run to q + 1 entries, so only their endpoints are echoed
                report.push(json!({
                    "p": level.p,
                    "k": level.k,
                    "obstruction": level.obstruction,
                    "witnesses": level.witnesses.len(),
                    "first_witness": level.witnesses.first(),
                    "last_witness": level.witnesses.last(),
                }));
            }
            report.push(json!({"k": k_needed, "holds": result.holds_up_to_bounds()}));
            Ok((report, Outcome::from_bool(result.holds_up_to_bounds())))
        }
    }
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn run_export(format: ExportFormat, out: &PathBuf, kind: TreeKind, args: &TreeArgs) -> Run {
    let t = tree(kind, args)?;
    let params = json!({"tree": kind_name(kind), "depth": args.depth, "no_diagonal": args.no_diagonal, "out": out});
    match format {
        ExportFormat::Json => {
            let mut report = Report::new("export json", params);
            fs::write(out, t.to_json()).map_err(|e| io_error(out, e))?;
            report.push(json!({"file": out, "levels": t.depth() + 1}));
            Ok((report, Outcome::Pass))
        }
        ExportFormat::Dot => {
            let mut report = Report::new("export dot", params);
            fs::create_dir_all(out).map_err(|e| io_error(out, e))?;
            for p in 1..=args.depth {
                let graph = t.level_graph(p)?;
                let file = out.join(format!("level_{p:02}.dot"));
                fs::write(&file, graph.to_dot(&format!("level {p}")))
                    .map_err(|e| io_error(&file, e))?;
                report.push(json!({"file": file, "level": p, "vertices": graph.vertex_count(), "edges": graph.edge_count()}));
            }
            Ok((report, Outcome::Pass))
        }
    }
}

fn run(command: &Command) -> Run {
    match command {
        Command::Enum { op } => run_enum(op),
        Command::Tree { kind, tree } => run_tree(*kind, tree),
        Command::Check {
            kind,
            tree,
            tree_kind,
        } => run_check(*kind, *tree_kind, tree),
        Command::Test { op } => run_test(op),
        Command::Member(args) => run_member(args),
        Command::Antichain { op } => run_antichain(op),
        Command::Export {
            format,
            out,
            tree,
            tree_kind,
        } => run_export(*format, out, *tree_kind, tree),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match run(&cli.command) {
        Ok((report, outcome)) => {
            let mut out = io::stdout().lock();
            // a closed reader (e.g. `| head`) ends output without changing the exit code
            let mut emit = |v: &Value| writeln!(out, "{v}").is_ok();
            if !report.records.iter().all(&mut emit) {
                return ExitCode::from(outcome.code());
            }
            let summary = json!({
                "summary": {
                    "command": report.command,
                    "params": report.params,
                    "outcome": outcome.name(),
                    "records": report.records.len(),
                    "elapsed_ms": start.elapsed().as_secs_f64() * 1e3,
                }
            });
            emit(&summary);
            ExitCode::from(outcome.code())
        }
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Usage(m) => (64, m),
                Failure::Core(e @ Error::Parse { .. }) => (65, e.to_string()),
                Failure::Core(e) => (70, e.to_string()),
                Failure::Io(m) => (74, m),
            };
            let _ = writeln!(io::stdout(), "{}", json!({"error": message, "exit": code}));
            eprintln!("potpi: {message}");
            ExitCode::from(code)
        }
    }
}
