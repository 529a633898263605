//! Command-line front end.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{solve_h_in_req, BoundKind, MinEntropyRate};
use crate::catalog::{self, Corrector, CorrectorRecord, Frontier};
use crate::engine::{self, StreamStats};
use crate::error::{Error, Result};
use crate::oracle::{self, BitProbabilities, DEFAULT_ORACLE_LIMIT};
use crate::weights::{WdSource, DEFAULT_MAX_DIM};

#[derive(Parser, Debug)]
#[command(name = "lincorr", version, about = "Bounds, selection and application of linear correctors")]
pub struct Cli {
    /// Worker threads for enumeration and catalog evaluation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Output min-entropy bound of a code at an input rate.
    Bound(BoundArgs),
    /// Required input min-entropy rate for a per-bit output target.
    Solve(SolveArgs),
    /// Weight distribution of a code.
    Wd(WdArgs),
    /// Pareto frontier of optimal correctors in a catalog.
    Frontier(FrontierArgs),
    /// Best frontier corrector for a source of known min-entropy rate.
    Select(SelectArgs),
    /// Apply a code to a byte stream (stdin to stdout or --out).
    Apply(ApplyArgs),
    /// Compare the exact output min-entropy with both bounds.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    Old,
    New,
}

impl From<BoundArg> for BoundKind {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Old => BoundKind::OldMinDistance,
            BoundArg::New => BoundKind::NewWeightDistribution,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum, default_value_t = BoundArg::New)]
    pub bound: BoundArg,
    #[arg(long)]
    pub h_in: f64,
    #[arg(long, default_value_t = 0.999)]
    pub h_out1: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum, default_value_t = BoundArg::New)]
    pub bound: BoundArg,
    #[arg(long, default_value_t = 0.999)]
    pub h_out1: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct WdArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct FrontierArgs {
    #[arg(long)]
    pub catalog: PathBuf,
    #[arg(long, value_enum, default_value_t = BoundArg::New)]
    pub bound: BoundArg,
    #[arg(long, default_value_t = 0.999)]
    pub h_out1: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
    #[arg(long)]
    pub cyclic_only: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SelectArgs {
    #[arg(long)]
    pub catalog: PathBuf,
    #[arg(long, value_enum, default_value_t = BoundArg::New)]
    pub bound: BoundArg,
    /// Min-entropy rate of the source.
    #[arg(long)]
    pub h_in: f64,
    #[arg(long, default_value_t = 0.999)]
    pub h_out1: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
    #[arg(long)]
    pub cyclic_only: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// One bit-is-one probability per line, n lines.
    #[arg(long)]
    pub probs: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
    #[command(flatten)]
    pub output: Output,
}

fn check_unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{name} = {v} not in (0, 1)")))
    }
}

fn check_threads(t: Option<usize>) -> Result<Option<usize>> {
    let env = std::env::var("THREADS").ok();
    let t = match (t, env) {
        (Some(t), _) => Some(t),
        (None, Some(s)) => Some(
            s.trim()
                .parse()
                .map_err(|_| Error::OutOfRange(format!("THREADS = {s:?} is not a count")))?,
        ),
        (None, None) => None,
    };
    if t == Some(0) {
        return Err(Error::OutOfRange("thread count must be positive".into()));
    }
    Ok(t)
}

/// Validates flag values before any work starts.
pub fn validate(cli: &Cli) -> Result<()> {
    check_threads(cli.threads)?;
    match &cli.command {
        Command::Bound(a) => {
            MinEntropyRate::new(a.h_in)?;
            check_unit_open("--h-out1", a.h_out1)
        }
        Command::Solve(a) => check_unit_open("--h-out1", a.h_out1),
        Command::Frontier(a) => check_unit_open("--h-out1", a.h_out1),
        Command::Select(a) => {
            MinEntropyRate::new(a.h_in)?;
            check_unit_open("--h-out1", a.h_out1)
        }
        Command::Wd(_) | Command::Apply(_) | Command::Verify(_) => Ok(()),
    }
}

fn r9(x: f64) -> String {
    format!("{x:.9}")
}

/// Minimal ordered JSON object writer that keeps fixed-decimal reals.
#[derive(Default)]
struct Json(Vec<(String, String)>);

impl Json {
    fn str(mut self, k: &str, v: &str) -> Self {
        self.0.push((k.into(), serde_json::to_string(v).unwrap()));
        self
    }
    fn int(mut self, k: &str, v: impl ToString) -> Self {
        self.0.push((k.into(), v.to_string()));
        self
    }
    fn real(mut self, k: &str, v: f64) -> Self {
        self.0.push((k.into(), r9(v)));
        self
    }
    fn bool(mut self, k: &str, v: bool) -> Self {
        self.0.push((k.into(), v.to_string()));
        self
    }
    fn raw(mut self, k: &str, v: String) -> Self {
        self.0.push((k.into(), v));
        self
    }
    fn opt_int(self, k: &str, v: Option<usize>) -> Self {
        match v {
            Some(v) => self.int(k, v),
            None => self.raw(k, "null".into()),
        }
    }
    fn render(&self) -> String {
        let body: Vec<String> = self
            .0
            .iter()
            .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).unwrap(), v))
            .collect();
        format!("{{{}}}", body.join(","))
    }
}

fn kv_text(pairs: &Json) -> String {
    let mut s = String::new();
    for (k, v) in &pairs.0 {
        writeln!(s, "{k} {}", v.trim_matches('"')).unwrap();
    }
    s
}

fn csv_of(pairs: &Json) -> String {
    let keys: Vec<&str> = pairs.0.iter().map(|(k, _)| k.as_str()).collect();
    let vals: Vec<&str> = pairs.0.iter().map(|(_, v)| v.trim_matches('"')).collect();
    format!("{}\n{}\n", keys.join(","), vals.join(","))
}

fn render(obj: Json, format: Format) -> String {
    match format {
        Format::Text => kv_text(&obj),
        Format::Csv => csv_of(&obj),
        Format::Json => obj.render() + "\n",
    }
}

fn emit(report: &str, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, report).map_err(|e| Error::io(format!("writing {}", p.display()), e)),
        None => stdout
            .write_all(report.as_bytes())
            .map_err(|e| Error::io("writing stdout", e)),
    }
}

fn code_name(c: &Corrector, path: &Path) -> String {
    if c.entry.name.is_empty() {
        path.display().to_string()
    } else {
        c.entry.name.clone()
    }
}

fn source_str(s: WdSource) -> &'static str {
    match s {
        WdSource::Attached => "attached",
        WdSource::Enumerated => "enumerated",
        WdSource::DualMacWilliams => "dual-macwilliams",
    }
}

fn record_json(r: &CorrectorRecord) -> Json {
    Json::default()
        .str("name", &r.name)
        .int("n", r.n)
        .int("k", r.k)
        .opt_int("d", r.d)
        .real("rate", r.rate)
        .real("h_in_req", r.h_in_req)
        .str("bound", r.bound_kind.as_str())
        .real("efficiency_at_req", r.efficiency_at_req())
}

fn frontier_report(f: &Frontier, format: Format) -> String {
    match format {
        Format::Csv => f.to_csv(),
        Format::Json => {
            let rows: Vec<String> = f.records().iter().map(|r| record_json(r).render()).collect();
            format!("[{}]\n", rows.join(","))
        }
        Format::Text => {
            let mut s = format!(
                "{:<24} {:>5} {:>5} {:>5} {:>11} {:>11} {:>5} {:>11}\n",
                "name", "n", "k", "d", "rate", "h_in_req", "bound", "efficiency"
            );
            for r in f.records() {
                writeln!(
                    s,
                    "{:<24} {:>5} {:>5} {:>5} {:>11} {:>11} {:>5} {:>11}",
                    r.name,
                    r.n,
                    r.k,
                    r.d.map(|d| d.to_string()).unwrap_or_else(|| "-".into()),
                    r9(r.rate),
                    r9(r.h_in_req),
                    r.bound_kind.as_str(),
                    r9(r.efficiency_at_req())
                )
                .unwrap();
            }
            s
        }
    }
}

struct Built {
    frontier: Frontier,
    correctors: HashMap<String, Corrector>,
}

fn build_frontier(
    catalog_path: &Path,
    kind: BoundKind,
    h_out1: f64,
    max_dim: usize,
    cyclic_only: bool,
    diag: &mut dyn Write,
) -> Result<Built> {
    let loaded = catalog::load_catalog(catalog_path, false)?;
    for (line, err) in &loaded.rejected {
        let _ = writeln!(diag, "rejected catalog line {line}: {err}");
    }
    let (records, skipped) = catalog::build_records(&loaded.correctors, kind, h_out1, max_dim);
    for s in &skipped {
        let _ = writeln!(diag, "skipped {}: {}", s.name, s.reason);
    }
    let mut records = catalog::appropriate(&records, h_out1);
    if cyclic_only {
        records = catalog::cyclic_only(&records);
    }
    let frontier = catalog::pareto_frontier(&records)?;
    let correctors = loaded
        .correctors
        .into_iter()
        .map(|c| (c.entry.name.clone(), c))
        .collect();
    Ok(Built { frontier, correctors })
}

/// Runs a parsed command line, writing the report to `stdout` (or
/// `--out`) and diagnostics to `diag`.
pub fn run(cli: &Cli, stdin: &mut dyn io::Read, stdout: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    validate(cli)?;
    if let Some(t) = check_threads(cli.threads)? {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match &cli.command {
        Command::Bound(a) => {
            let c = catalog::load_code(&a.code)?;
            let bound = c.bound(a.bound.into(), a.max_dim)?;
            let h = MinEntropyRate::new(a.h_in)?;
            let total = bound.total(h).value();
            let req = solve_h_in_req(bound.as_ref(), a.h_out1)?;
            let appropriate = req.h_in.value() <= a.h_in;
            let mut obj = Json::default()
                .str("name", &code_name(&c, &a.code))
                .int("n", c.code.n())
                .int("k", c.code.k())
                .str("bound", BoundKind::from(a.bound).as_str())
                .real("h_in", a.h_in)
                .real("total", total)
                .real("h_in_req", req.h_in.value())
                .bool("appropriate", appropriate);
            if appropriate {
                obj = obj.real("efficiency", total / (c.code.n() as f64 * a.h_in));
            }
            emit(&render(obj, a.output.format), &a.output.out, stdout)
        }
        Command::Solve(a) => {
            let c = catalog::load_code(&a.code)?;
            let bound = c.bound(a.bound.into(), a.max_dim)?;
            let req = solve_h_in_req(bound.as_ref(), a.h_out1)?;
            let obj = Json::default()
                .str("name", &code_name(&c, &a.code))
                .int("n", c.code.n())
                .int("k", c.code.k())
                .str("bound", BoundKind::from(a.bound).as_str())
                .real("h_out1", a.h_out1)
                .real("h_in_req", req.h_in.value())
                .bool("below_bracket", req.below_bracket);
            emit(&render(obj, a.output.format), &a.output.out, stdout)
        }
        Command::Wd(a) => {
            let c = catalog::load_code(&a.code)?;
            let (wd, source) = c.weight_distribution(a.max_dim)?;
            let report = match a.output.format {
                Format::Text => format!("# source {}\n{}", source_str(source), wd.to_text()),
                Format::Csv => {
                    let mut s = String::from("weight,count\n");
                    for (i, a) in wd.counts().iter().enumerate() {
                        if *a != num_bigint::BigUint::default() {
                            writeln!(s, "{i},{a}").unwrap();
                        }
                    }
                    s
                }
                Format::Json => {
                    let pairs: Vec<String> = wd
                        .counts()
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| **a != num_bigint::BigUint::default())
                        .map(|(i, a)| format!("[{i},\"{a}\"]"))
                        .collect();
                    Json::default()
                        .int("n", wd.n())
                        .int("k", wd.k())
                        .str("source", source_str(source))
                        .raw("wd", format!("[{}]", pairs.join(",")))
                        .render()
                        + "\n"
                }
            };
            emit(&report, &a.output.out, stdout)
        }
        Command::Frontier(a) => {
            let built = build_frontier(&a.catalog, a.bound.into(), a.h_out1, a.max_dim, a.cyclic_only, diag)?;
            emit(&frontier_report(&built.frontier, a.output.format), &a.output.out, stdout)
        }
        Command::Select(a) => {
            let built = build_frontier(&a.catalog, a.bound.into(), a.h_out1, a.max_dim, a.cyclic_only, diag)?;
            let r = catalog::select_for_target(&built.frontier, a.h_in)?;
            let c = &built.correctors[&r.name];
            let bound = c.bound(a.bound.into(), a.max_dim)?;
            let total = bound.total(MinEntropyRate::new(a.h_in)?).value();
            let obj = record_json(r)
                .real("h_in", a.h_in)
                .real("efficiency", total / (r.n as f64 * a.h_in));
            emit(&render(obj, a.output.format), &a.output.out, stdout)
        }
        Command::Apply(a) => {
            let c = catalog::load_code(&a.code)?;
            let path = if c.code.is_cyclic() {
                engine::Path::Cyclic
            } else {
                engine::Path::Dense
            };
            let stats: StreamStats = match &a.out {
                Some(p) => {
                    let f = File::create(p).map_err(|e| Error::io(format!("creating {}", p.display()), e))?;
                    engine::apply_stream(&c.code, stdin, f, path)?
                }
                None => engine::apply_stream(&c.code, stdin, &mut *stdout, path)?,
            };
            let _ = writeln!(diag, "{}", stats.to_json());
            Ok(())
        }
        Command::Verify(a) => {
            let c = catalog::load_code(&a.code)?;
            let probs = BitProbabilities::load(&a.probs)?;
            if probs.len() != c.code.n() {
                return Err(Error::LengthMismatch {
                    expected: c.code.n(),
                    actual: probs.len(),
                });
            }
            let dist = oracle::exact_output_dist(&c.code, &probs, DEFAULT_ORACLE_LIMIT)?;
            let exact = oracle::exact_min_entropy(&dist)?.value();
            let h = probs.min_entropy_rate()?;
            let new = c.bound(BoundKind::NewWeightDistribution, a.max_dim)?.total(h).value();
            let old = match c.entry.d {
                Some(_) => Some(c.bound(BoundKind::OldMinDistance, a.max_dim)?.total(h).value()),
                None => None,
            };
            let coset = oracle::most_probable_coset_check(&c.code, &probs, DEFAULT_ORACLE_LIMIT)?;
            let sound = exact >= new - 1e-9 && old.is_none_or(|o| new >= o - 1e-12);
            let mut obj = Json::default()
                .str("name", &code_name(&c, &a.code))
                .int("n", c.code.n())
                .int("k", c.code.k())
                .real("h_in", h.value())
                .real("exact", exact)
                .real("new_bound", new);
            obj = match old {
                Some(o) => obj.real("old_bound", o),
                None => obj.raw("old_bound", "null".into()),
            };
            let obj = obj.bool("most_probable_coset", coset).bool("sound", sound);
            emit(&render(obj, a.output.format), &a.output.out, stdout)?;
            if sound {
                Ok(())
            } else {
                Err(Error::Integrity("bound exceeds the exact output min-entropy".into()))
            }
        }
    }
}

/// Parses `args`, runs and returns the process exit status.
pub fn main_with<I, T>(args: I, stdin: &mut dyn io::Read, stdout: &mut dyn Write, diag: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(diag, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli, stdin, stdout, diag) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            e.exit_code()
        }
    }
}
