//! Command-line front end for the toric Fano invariant checks.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 on input, parse or usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use toric_fano::fan::{validate_with, Fan, ValidationOptions, DEFAULT_SEED};
use toric_fano::fvector::{corollary_bound_table, max_rho_bound, FVectorError};
use toric_fano::invariants::{mukai_check, EqualityCase, InvariantError};
use toric_fano::io::{parse_fan_unvalidated, parse_fan_with, parse_polytope_as_face_fan_with};
use toric_fano::oracle::generate_corpus;
use toric_fano::report::{analyze_with, mukai_text, to_json, to_text, FanReport};
use toric_fano::Execution;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "toric-fano", version, about = "Invariants of smooth complete toric fans")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the generic-direction completeness check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for batch processing (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structural checks on a fan file.
    Validate { path: PathBuf },
    /// Print Picard number, pseudo-index, primitive relations, wall degrees and f-vector.
    Invariants { path: PathBuf },
    /// Check rho * (iota - 1) <= n and classify the equality case.
    Mukai { path: PathBuf },
    /// Largest Picard number allowed by the face-count inequalities for (n, iota).
    Bounds { n: usize, iota: i64 },
    /// Analyze every .fan and .poly file in a directory.
    Batch {
        dir: PathBuf,
        /// Also write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write the bundled corpus as .fan files.
    Corpus { dir: PathBuf },
}

struct Failure(u8, String);

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure(EXIT_INPUT, msg.into())
    }
}

fn options(cli: &Cli) -> ValidationOptions {
    ValidationOptions { seed: cli.seed, ..ValidationOptions::default() }
}

fn is_polytope(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "poly")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Reads and validates a `.fan` or `.poly` file.
fn load(path: &Path, opts: ValidationOptions) -> Result<Fan, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed = if is_polytope(path) {
        parse_polytope_as_face_fan_with(&text, opts, Execution::default())
    } else {
        parse_fan_with(&text, opts)
    };
    parsed.map_err(|e| format!("{}: {e}", path.display()))
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => print!("{}", to_json(value)),
        Format::Text => print!("{}", text()),
    }
}

fn cmd_validate(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let text = read(path)?;
    let fan = if is_polytope(path) {
        parse_polytope_as_face_fan_with(&text, options(cli), Execution::default())
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
    } else {
        parse_fan_unvalidated(&text)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
    };
    let report = validate_with(&fan, options(cli));
    emit(cli.format, &report, || report.to_string());
    if report.is_valid() {
        Ok(())
    } else {
        let names: Vec<_> = report.failures().map(|c| c.check.name()).collect();
        Err(Failure(EXIT_CHECK_FAILED, format!("failed checks: {}", names.join(", "))))
    }
}

fn analyze(cli: &Cli, fan: &Fan) -> Result<FanReport, Failure> {
    analyze_with(fan, options(cli), Execution::default())
        .map_err(|e| Failure(EXIT_CHECK_FAILED, e.to_string()))
}

fn check_report(report: &FanReport) -> Result<(), Failure> {
    if report.passed() {
        Ok(())
    } else {
        Err(Failure(
            EXIT_CHECK_FAILED,
            format!("failed checks: {}", report.failed_checks().join(", ")),
        ))
    }
}

fn cmd_invariants(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let fan = load(path, options(cli)).map_err(Failure::input)?;
    let report = analyze(cli, &fan)?;
    emit(cli.format, &report, || to_text(&report));
    check_report(&report)
}

fn cmd_mukai(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let fan = load(path, options(cli)).map_err(Failure::input)?;
    let report = match mukai_check(&fan) {
        Ok(r) => r,
        Err(InvariantError::NotFano) => {
            return Err(Failure::input(format!(
                "{}: not Fano; the inequality is undefined",
                path.display()
            )))
        }
        Err(e) => return Err(Failure(EXIT_CHECK_FAILED, e.to_string())),
    };
    emit(cli.format, &report, || mukai_text(&report));
    if !report.inequality_holds {
        return Err(Failure(EXIT_CHECK_FAILED, "inequality violated".into()));
    }
    if report.equality_case == EqualityCase::EqualButUnrecognized {
        return Err(Failure(
            EXIT_CHECK_FAILED,
            "equality holds but the fan is not a product of projective spaces".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundRow {
    n: usize,
    iota: i64,
    rho_bound: i64,
    mukai_bound: i64,
    suffices: bool,
}

fn cmd_bounds(cli: &Cli, n: usize, iota: i64) -> Result<(), Failure> {
    let rho_bound = max_rho_bound(n, iota).map_err(|e| match e {
        FVectorError::RegimeUnsupported { .. } => Failure::input(e.to_string()),
        other => Failure(EXIT_CHECK_FAILED, other.to_string()),
    })?;
    let mukai_bound = corollary_bound_table()
        .get(n, iota)
        .ok_or_else(|| Failure::input(format!("no tabulated bound for n = {n}, iota = {iota}")))?;
    let row = BoundRow { n, iota, rho_bound, mukai_bound, suffices: rho_bound <= mukai_bound };
    emit(cli.format, &row, || {
        format!(
            "n={n} iota={iota} rho_bound={rho_bound} mukai_bound={mukai_bound} suffices={}\n",
            row.suffices
        )
    });
    if row.suffices {
        Ok(())
    } else {
        Err(Failure(EXIT_CHECK_FAILED, "face-count bound exceeds the Mukai bound".into()))
    }
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Pass,
    Fail,
    InputError,
}

#[derive(Serialize)]
struct BatchEntry {
    file: String,
    status: Status,
    error: Option<String>,
    report: Option<FanReport>,
}

#[derive(Serialize, Default)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
    input_errors: usize,
    mukai_equality: usize,
}

#[derive(Serialize)]
struct BatchReport {
    entries: Vec<BatchEntry>,
    summary: Summary,
}

fn batch_entry(cli: &Cli, root: &Path, path: &Path) -> BatchEntry {
    let file = path.strip_prefix(root).unwrap_or(path).display().to_string();
    let fan = match load(path, options(cli)) {
        Ok(f) => f,
        Err(e) => return BatchEntry { file, status: Status::InputError, error: Some(e), report: None },
    };
    match analyze_with(&fan, options(cli), Execution::default()) {
        Ok(r) => {
            let status = if r.passed() { Status::Pass } else { Status::Fail };
            BatchEntry { file, status, error: None, report: Some(r) }
        }
        Err(e) => BatchEntry { file, status: Status::Fail, error: Some(e.to_string()), report: None },
    }
}

#[cfg(feature = "parallel")]
fn run_entries(cli: &Cli, root: &Path, files: &[PathBuf]) -> Result<Vec<BatchEntry>, Failure> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| Failure::input(format!("cannot start workers: {e}")))?;
    Ok(pool.install(|| files.par_iter().map(|p| batch_entry(cli, root, p)).collect()))
}

#[cfg(not(feature = "parallel"))]
fn run_entries(cli: &Cli, root: &Path, files: &[PathBuf]) -> Result<Vec<BatchEntry>, Failure> {
    Ok(files.iter().map(|p| batch_entry(cli, root, p)).collect())
}

fn cmd_batch(cli: &Cli, dir: &Path, report_path: Option<&Path>) -> Result<(), Failure> {
    let listing =
        fs::read_dir(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = listing
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| p.extension().is_some_and(|e| e == "fan" || e == "poly"))
        .collect();
    files.sort();
    let entries = run_entries(cli, dir, &files)?;

    let mut summary = Summary { total: entries.len(), ..Summary::default() };
    for e in &entries {
        match e.status {
            Status::Pass => summary.passed += 1,
            Status::Fail => summary.failed += 1,
            Status::InputError => summary.input_errors += 1,
        }
        if e.report.as_ref().is_some_and(FanReport::mukai_equality) {
            summary.mukai_equality += 1;
        }
    }
    let batch = BatchReport { entries, summary };
    if let Some(path) = report_path {
        fs::write(path, to_json(&batch))
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    }
    emit(cli.format, &batch, || batch_text(&batch));
    if batch.summary.failed > 0 {
        return Err(Failure(
            EXIT_CHECK_FAILED,
            format!("{} file(s) failed a check", batch.summary.failed),
        ));
    }
    Ok(())
}

fn batch_text(batch: &BatchReport) -> String {
    let mut out = String::new();
    for e in &batch.entries {
        let line = match (&e.status, &e.report, &e.error) {
            (Status::InputError, _, err) => {
                format!("{}  input error: {}", e.file, err.as_deref().unwrap_or(""))
            }
            (status, Some(r), _) => {
                let verdict = match r.mukai.as_ref().map(|m| &m.equality_case) {
                    Some(EqualityCase::NotEqual) => "mukai strict".to_string(),
                    Some(EqualityCase::ProductOfProjectiveSpaces(f)) => {
                        format!("mukai equality {f:?}")
                    }
                    Some(EqualityCase::EqualButUnrecognized) => "mukai equality UNRECOGNIZED".into(),
                    None => "not fano".into(),
                };
                let state = match status {
                    Status::Pass => "pass".to_string(),
                    _ => format!("FAIL [{}]", r.failed_checks().join(", ")),
                };
                format!(
                    "{}  n={} rho={} iota={}  {verdict}  {state}",
                    e.file,
                    r.dimension,
                    r.rho.map_or("-".into(), |v| v.to_string()),
                    r.iota.map_or("-".into(), |v| v.to_string()),
                )
            }
            (_, None, err) => format!("{}  FAIL: {}", e.file, err.as_deref().unwrap_or("")),
        };
        out.push_str(&line);
        out.push('\n');
    }
    let s = &batch.summary;
    out.push_str(&format!(
        "total={} passed={} failed={} input_errors={} mukai_equality={}\n",
        s.total, s.passed, s.failed, s.input_errors, s.mukai_equality
    ));
    out
}

fn cmd_corpus(cli: &Cli, dir: &Path) -> Result<(), Failure> {
    let corpus = generate_corpus().map_err(|e| Failure(EXIT_CHECK_FAILED, e.to_string()))?;
    corpus.write_to(dir).map_err(|e| Failure::input(e.to_string()))?;
    let names: Vec<&str> = corpus.entries.iter().map(|e| e.name.as_str()).collect();
    emit(cli.format, &names, || {
        let mut s = String::new();
        for e in &corpus.entries {
            let fp = &e.fingerprint;
            s.push_str(&format!(
                "{}.fan  rho={} fano={} iota={}\n",
                e.name,
                fp.rho,
                fp.fano,
                fp.iota.map_or("-".into(), |v| v.to_string())
            ));
        }
        s
    });
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Validate { path } => cmd_validate(cli, path),
        Command::Invariants { path } => cmd_invariants(cli, path),
        Command::Mukai { path } => cmd_mukai(cli, path),
        Command::Bounds { n, iota } => cmd_bounds(cli, *n, *iota),
        Command::Batch { dir, report } => cmd_batch(cli, dir, report.as_deref()),
        Command::Corpus { dir } => cmd_corpus(cli, dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
