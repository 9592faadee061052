//! Command-line driver.
//!
//! Machine-readable output (one JSON line, or CSV for `table`) goes to
//! stdout and human summaries to stderr. Exit codes: 0 ok, 2 usage,
//! 3 I/O, 4 search budget exceeded, 5 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dense::{exhaustive_dense, sample_dense, DenseError, DEFAULT_BUDGET};
use crate::field::{prime_power, Field};
use crate::graph::Graph;
use crate::io::{from_edge_list, from_graph6, to_edge_list, to_graph6};
use crate::oracle::{oracle_ex, DEFAULT_MAX_N};
use crate::plane::{conic_oval, orthogonal_polarity, Plane, Polarity};
use crate::polarity_graph::PolarityGraph;
use crate::turan::{construct, verify_certificate, Construction, PadStrategy, TuranError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

/// Environment variable overriding the default exhaustive-search budget.
pub const BUDGET_ENV: &str = "PF_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "polarity", version, about = "Polarity graphs and certified C4-free constructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a polarity graph and print its summary.
    Build(BuildArgs),
    /// Extract a dense oval-anchored subgraph.
    Dense(DenseArgs),
    /// Build a C4-free graph and its certificate.
    Turan(TuranArgs),
    /// Re-check a certificate against a graph file.
    Verify(VerifyArgs),
    /// Regression table across a range of q.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Graph6,
    Edgelist,
}

/// Field selection shared by the commands that build ER_q.
#[derive(Debug, Clone, clap::Args)]
pub struct FieldArgs {
    /// Plane order (a prime power).
    #[arg(long)]
    pub q: Option<u64>,
    /// Field descriptor `p^k:c0,...,ck` overriding the default modulus.
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Debug, clap::Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Load the plane from an incidence file instead of generating PG(2,q).
    #[arg(long, requires = "polarity")]
    pub plane: Option<PathBuf>,
    /// Polarity file (`point line` rows) for a loaded plane.
    #[arg(long)]
    pub polarity: Option<PathBuf>,
    /// Write the graph here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "graph6")]
    pub format: GraphFormat,
    /// Also write the plane incidence file here.
    #[arg(long)]
    pub export_plane: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct DenseArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Search every m-subset instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    /// Maximum number of subsets for --exhaustive.
    #[arg(long)]
    pub budget: Option<u128>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct TuranArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value = "corollary")]
    pub construction: Construction,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "pad", default_value = "greedy")]
    pub pad_strategy: PadStrategy,
    /// Write the certificate JSON here.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Write the retained graph here.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "graph6")]
    pub format: GraphFormat,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub cert: PathBuf,
    /// graph6 or edge-list file; the format is detected.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct TableArgs {
    /// Inclusive range `lo..hi`, or a single value.
    #[arg(long, default_value = "2..13")]
    pub q: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "pad", default_value = "greedy")]
    pub pad_strategy: PadStrategy,
    /// Largest n for which ex(n, C4) is computed exactly.
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    pub oracle_max: usize,
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<TuranError> for Failure {
    fn from(e: TuranError) -> Self {
        let code = match e {
            TuranError::Ledger(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DenseError> for Failure {
    fn from(e: DenseError) -> Self {
        let code = match e {
            DenseError::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

impl FieldArgs {
    pub fn resolve(&self) -> Result<Field, Failure> {
        match (&self.q, &self.modulus) {
            (_, Some(desc)) => {
                let f: Field = desc
                    .parse()
                    .map_err(|e| Failure::usage(format!("--modulus: {e}")))?;
                if let Some(q) = self.q {
                    if q != f.order() as u64 {
                        return Err(Failure::usage(format!(
                            "--q {q} does not match field of order {}",
                            f.order()
                        )));
                    }
                }
                Ok(f)
            }
            (Some(q), None) => {
                check_q(*q)?;
                Field::with_order(*q).map_err(|e| Failure::usage(e.to_string()))
            }
            (None, None) => Err(Failure::usage("either --q or --modulus is required")),
        }
    }
}

fn check_q(q: u64) -> CmdResult {
    if prime_power(q).is_none() {
        return Err(Failure::usage(format!("{q} is not a prime power")));
    }
    Ok(())
}

fn write_graph(g: &Graph, path: &Path, format: GraphFormat) -> CmdResult {
    match format {
        GraphFormat::Graph6 => write_file(path, &format!("{}\n", to_graph6(g))),
        GraphFormat::Edgelist => write_file(path, &to_edge_list(g)),
    }
}

/// Reads a graph file in either supported format.
pub fn read_graph(text: &str) -> Result<Graph, String> {
    let looks_like_edge_list = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with('#') || l.contains(' '));
    if looks_like_edge_list {
        from_edge_list(text).map_err(|e| e.to_string())
    } else {
        from_graph6(text).map_err(|e| e.to_string())
    }
}

#[derive(Serialize)]
struct BuildSummary {
    q: usize,
    field: Option<String>,
    n: usize,
    edges: usize,
    loops: usize,
}

fn cmd_build(args: &BuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (plane, polarity, field) = match &args.plane {
        Some(path) => {
            let plane = Plane::load(&read_file(path)?).map_err(|e| Failure::usage(e.to_string()))?;
            let pol_path = args.polarity.as_ref().expect("clap enforces --polarity");
            let pol = Polarity::load(&plane, &read_file(pol_path)?)
                .map_err(|e| Failure::usage(e.to_string()))?;
            (plane, pol, None)
        }
        None => {
            let field = args.field.resolve()?;
            let plane = Plane::pg(&field);
            let pol = orthogonal_polarity(&plane).expect("generated plane");
            (plane, pol, Some(field))
        }
    };
    let g = PolarityGraph::build(&plane, &polarity).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(path) = &args.out {
        write_graph(g.graph(), path, args.format)?;
        if args.format == GraphFormat::Graph6 {
            let mut side = path.as_os_str().to_owned();
            side.push(".absolute");
            let body: String = g.absolute_points().iter().map(|v| format!("{v}\n")).collect();
            write_file(Path::new(&side), &body)?;
        }
    }
    if let Some(path) = &args.export_plane {
        write_file(path, &plane.export())?;
    }
    let summary = BuildSummary {
        q: g.q(),
        field: field.map(|f| f.descriptor()),
        n: g.n(),
        edges: g.edge_count(),
        loops: g.loop_count(),
    };
    emit(out, &summary)?;
    let _ = writeln!(
        err,
        "polarity graph of order {}: {} vertices, {} edges, {} absolute points",
        summary.q, summary.n, summary.edges, summary.loops
    );
    Ok(())
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> CmdResult {
    let line = serde_json::to_string(value).expect("serializable");
    writeln!(out, "{line}").map_err(|e| Failure {
        code: EXIT_IO,
        message: e.to_string(),
    })
}

/// Budget from the flag, else `PF_BUDGET`, else the default.
pub fn resolve_budget(flag: Option<u128>) -> Result<u128, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{BUDGET_ENV}={v} is not an integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn cmd_dense(args: &DenseArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let field = args.field.resolve()?;
    let plane = Plane::pg(&field);
    let oval = conic_oval(&plane).map_err(|e| Failure::usage(e.to_string()))?;
    let g = PolarityGraph::orthogonal(&field);
    let result = if args.exhaustive {
        exhaustive_dense(&g, &oval, args.m, resolve_budget(args.budget)?)?
    } else {
        sample_dense(&g, &oval, args.m, args.trials, args.seed)?
    };
    let json = result.to_json();
    if let Some(path) = &args.out {
        write_file(path, &format!("{json}\n"))?;
    }
    writeln!(out, "{json}").map_err(|e| Failure {
        code: EXIT_IO,
        message: e.to_string(),
    })?;
    let _ = writeln!(
        err,
        "q={} m={} |W|={} e(G[W])={} guarantee={}",
        result.q,
        result.m,
        result.w.len(),
        result.edges(),
        result.guarantee
    );
    Ok(())
}

fn cmd_turan(args: &TuranArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if args.construction != Construction::Mersenne {
        check_q(args.q)?;
    }
    let result = construct(
        args.construction,
        args.q,
        args.trials,
        args.seed,
        args.pad_strategy,
    )?;
    let cert = &result.certificate;
    if let Some(path) = &args.graph {
        write_graph(&result.graph, path, args.format)?;
    }
    if let Some(path) = &args.cert {
        write_file(path, &format!("{}\n", cert.to_json()))?;
    }
    emit(out, cert)?;
    let _ = writeln!(
        err,
        "{} q={}: n={} edges={} c4free={} abl_threshold={} beats_abl={}",
        cert.construction, cert.q, cert.n, cert.edges, cert.c4free, cert.abl_threshold, cert.beats_abl
    );
    if !cert.c4free {
        return Err(Failure {
            code: EXIT_VERIFY,
            message: "constructed graph contains a 4-cycle".into(),
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let cert = crate::turan::TuranCertificate::from_json(&read_file(&args.cert)?)
        .map_err(|e| Failure::io(&args.cert, e))?;
    let graph = read_graph(&read_file(&args.graph)?).map_err(|e| Failure::io(&args.graph, e))?;
    match verify_certificate(&cert, &graph) {
        Ok(()) => {
            emit(out, &VerifyReport { status: "pass", error: None })?;
            let _ = writeln!(err, "certificate verified");
            Ok(())
        }
        Err(e) => {
            emit(
                out,
                &VerifyReport {
                    status: "fail",
                    error: Some(e.to_string()),
                },
            )?;
            Err(Failure {
                code: EXIT_VERIFY,
                message: e.to_string(),
            })
        }
    }
}

/// Parses `lo..hi` (inclusive) or a single integer.
pub fn parse_q_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::usage(format!("bad q range `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().trim_start_matches('=').parse().map_err(|_| bad())?,
        ),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub const TABLE_HEADER: [&str; 10] = [
    "q",
    "construction",
    "n",
    "edges",
    "abl_threshold",
    "beats_abl",
    "c4free",
    "oracle_ex",
    "hash",
    "status",
];

fn cmd_table(args: &TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (lo, hi) = parse_q_range(&args.q)?;
    let mut oracle_cache = std::collections::BTreeMap::new();
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let io_fail = |e: csv::Error| Failure {
        code: EXIT_IO,
        message: e.to_string(),
    };
    wtr.write_record(TABLE_HEADER).map_err(io_fail)?;
    for q in (lo.max(2)..=hi).filter(|&q| prime_power(q).is_some()) {
        for c in Construction::ALL {
            let row = match construct(c, q, args.trials, args.seed, args.pad_strategy) {
                Ok(res) => {
                    let cert = res.certificate;
                    let oracle = if cert.n <= args.oracle_max {
                        let v = *oracle_cache.entry(cert.n).or_insert_with(|| {
                            oracle_ex(cert.n, args.oracle_max).map(|r| r.ex).unwrap_or(0)
                        });
                        v.to_string()
                    } else {
                        String::new()
                    };
                    vec![
                        q.to_string(),
                        c.name().to_string(),
                        cert.n.to_string(),
                        cert.edges.to_string(),
                        cert.abl_threshold.to_string(),
                        cert.beats_abl.to_string(),
                        cert.c4free.to_string(),
                        oracle,
                        cert.hash,
                        "ok".to_string(),
                    ]
                }
                Err(e) => {
                    let _ = writeln!(err, "warning: q={q} {c}: {e}");
                    let mut row = vec![String::new(); TABLE_HEADER.len()];
                    row[0] = q.to_string();
                    row[1] = c.name().to_string();
                    row[9] = format!("skipped: {e}");
                    row
                }
            };
            wtr.write_record(&row).map_err(io_fail)?;
        }
    }
    let bytes = wtr.into_inner().map_err(|e| Failure {
        code: EXIT_IO,
        message: e.to_string(),
    })?;
    out.write_all(&bytes).map_err(|e| Failure {
        code: EXIT_IO,
        message: e.to_string(),
    })
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a, out, err),
        Command::Dense(a) => cmd_dense(a, out, err),
        Command::Turan(a) => cmd_turan(a, out, err),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Table(a) => cmd_table(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("polarity").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn q_ranges() {
        assert_eq!(parse_q_range("2..13").unwrap(), (2, 13));
        assert_eq!(parse_q_range("2..=13").unwrap(), (2, 13));
        assert_eq!(parse_q_range("7").unwrap(), (7, 7));
        assert!(parse_q_range("9..3").is_err());
        assert!(parse_q_range("x").is_err());
    }

    #[test]
    fn missing_field_is_usage_error() {
        let (code, _, err) = run_capture(&["build"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--q"));
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn mismatched_modulus() {
        let (code, _, _) = run_capture(&["build", "--q", "4", "--modulus", "3^2:1,0,1"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn graph_format_detection() {
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]);
        assert_eq!(read_graph("DQc\n").unwrap(), g);
        assert_eq!(read_graph(&to_edge_list(&g)).unwrap(), g);
    }
}
