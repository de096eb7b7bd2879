//! `monogamy`: G-concurrence, roof bounds and monogamy checks from the shell.
//!
//! Exit codes: 0 on success, 2 on usage or input errors, 1 when a numerical
//! contract is violated.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monogamy_core::io::{
    parse_state_json, state_to_json, to_json_checked, write_atomic, write_csv_rows, DecompositionFile,
};
use monogamy_core::measures::monotones_from_coefficients;
use monogamy_core::monogamy::{all_pivots, monogamy_residual, run_campaign, Campaign, CampaignRow, MonogamyReport};
use monogamy_core::roof::{decomposition_profile, roof_upper_bound, RoofConfig, ZERO_G_THRESHOLD};
use monogamy_core::zoo::ZooState;
use monogamy_core::{Error, Party, TripartiteState};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "monogamy", version, about = "G-concurrence monogamy checks for three qudits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Monogamy residual of one state, for one pivot or all three.
    Check,
    /// Convex-roof bounds for the two-party marginals.
    Roof,
    /// Haar-random Monte Carlo campaign.
    Sample,
    /// Print a named state as state JSON.
    Zoo,
    /// Concurrence monotones across a pivot cut.
    Monotones,
}

#[derive(Args, Debug)]
struct Opts {
    /// Local dimension d.
    #[arg(long, global = true)]
    dim: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of samples (`sample` only).
    #[arg(long, global = true)]
    count: Option<u64>,
    /// Pivot party 1, 2 or 3; all three when absent.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=3))]
    pivot: Option<u8>,
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,
    #[arg(long, global = true, default_value_t = 2000)]
    iters: usize,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// State JSON file.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, value_enum)]
    zoo: Option<ZooName>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ZooName {
    Ghz,
    Chi,
    W,
}

impl From<ZooName> for ZooState {
    fn from(z: ZooName) -> Self {
        match z {
            ZooName::Ghz => ZooState::Ghz,
            ZooName::Chi => ZooState::Chi,
            ZooName::W => ZooState::W,
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotNormalized { .. }
            | Error::NotHermitian(_)
            | Error::BadTrace(_)
            | Error::NotPositive(_)
            | Error::NonFinite(_)
            | Error::ZeroVector => 1,
            Error::Io(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let o = &cli.opts;
    validate(cli.command, o)?;
    match cli.command {
        Command::Check => check(o),
        Command::Roof => roof(o),
        Command::Sample => sample(o),
        Command::Zoo => zoo(o),
        Command::Monotones => monotones(o),
    }
}

/// Rejects flag combinations that would otherwise be silently ignored, and
/// checks paths before any numerical work.
fn validate(command: Command, o: &Opts) -> CliResult<()> {
    let takes_state = matches!(command, Command::Check | Command::Roof | Command::Monotones);
    if takes_state && o.zoo.is_some() == o.input.is_some() {
        return Err(Failure::usage("exactly one of --zoo or --input is required"));
    }
    if command == Command::Zoo && (o.zoo.is_none() || o.input.is_some()) {
        return Err(Failure::usage("zoo takes --zoo and no --input"));
    }
    if command == Command::Sample && (o.zoo.is_some() || o.input.is_some() || o.pivot.is_some()) {
        return Err(Failure::usage("sample does not take --zoo, --input or --pivot"));
    }
    if command != Command::Sample && o.count.is_some() {
        return Err(Failure::usage("--count only applies to sample"));
    }
    if o.format == Format::Csv && !matches!(command, Command::Check | Command::Sample) {
        return Err(Failure::usage("--format csv only applies to check and sample"));
    }
    if o.restarts == 0 || o.iters == 0 {
        return Err(Failure::usage("--restarts and --iters must be positive"));
    }
    if !(o.tol.is_finite() && o.tol > 0.0) {
        return Err(Failure::usage("--tol must be positive and finite"));
    }
    if let Some(path) = &o.input {
        if !path.is_file() {
            return Err(Failure::usage(format!("cannot read input file {}", path.display())));
        }
    }
    if let Some(path) = &o.out {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !dir.is_dir() {
            return Err(Failure::usage(format!("output directory {} does not exist", dir.display())));
        }
    }
    Ok(())
}

fn roof_config(o: &Opts) -> RoofConfig {
    RoofConfig { members: None, restarts: o.restarts, max_iters: o.iters, tol: o.tol, seed: o.seed }
}

fn load_state(o: &Opts) -> CliResult<TripartiteState> {
    let state = match (&o.zoo, &o.input) {
        (Some(name), None) => ZooState::from(*name).build(o.dim)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            parse_state_json(&text, false)?
        }
        _ => unreachable!("checked in validate"),
    };
    if let Some(d) = o.dim {
        if d != state.dim() {
            return Err(Failure::usage(format!("--dim {d} does not match the state dimension {}", state.dim())));
        }
    }
    Ok(state)
}

fn pivot(o: &Opts) -> Option<Party> {
    o.pivot.map(|p| Party::try_from(p as usize).expect("range-checked by clap"))
}

fn emit(o: &Opts, bytes: &[u8]) -> CliResult<()> {
    match &o.out {
        Some(path) => write_atomic(path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn emit_json<S: serde::Serialize>(o: &Opts, value: &S) -> CliResult<()> {
    let mut text = to_json_checked(value)?;
    text.push('\n');
    emit(o, text.as_bytes())
}

fn check(o: &Opts) -> CliResult<()> {
    let state = load_state(o)?;
    let cfg = roof_config(o);
    let reports: Vec<MonogamyReport> = match pivot(o) {
        Some(p) => vec![monogamy_residual(&state, p, &cfg)?],
        None => all_pivots(&state, &cfg)?.to_vec(),
    };
    match o.format {
        Format::Json if reports.len() == 1 => emit_json(o, &reports[0]),
        Format::Json => emit_json(o, &reports),
        Format::Csv => {
            let rows: Vec<CampaignRow> = reports
                .iter()
                .map(|r| CampaignRow {
                    sample_index: 0,
                    dim: r.dim,
                    pivot: r.pivot.label(),
                    lhs_pow_d: r.lhs_pow_d,
                    rhs12_pow_d: r.rhs12_pow_d,
                    rhs13_pow_d: r.rhs13_pow_d,
                    residual: r.residual,
                    converged12: r.roof_converged[0],
                    converged13: r.roof_converged[1],
                })
                .collect();
            let mut buf = Vec::new();
            write_csv_rows(&mut buf, &rows, true)?;
            emit(o, &buf)
        }
    }
}

fn roof(o: &Opts) -> CliResult<()> {
    let state = load_state(o)?;
    let cfg = roof_config(o);
    let pairs: Vec<(Party, Party)> = match pivot(o) {
        Some(p) => {
            let (q, s) = p.others();
            vec![(p, q), (p, s)]
        }
        None => vec![(Party::One, Party::Two), (Party::One, Party::Three), (Party::Two, Party::Three)],
    };
    let mut out = Vec::new();
    for (a, b) in pairs {
        let rho = state.partial_trace(&[a, b])?;
        let res = roof_upper_bound(&rho, state.dim(), &cfg)?;
        out.push(json!({
            "parties": [a.label(), b.label()],
            "upper_bound_g": res.upper_bound.g,
            "upper_bound_pow_d": res.upper_bound.g_pow_d,
            "converged": res.converged,
            "restarts_used": res.restarts_used,
            "nonzero_members": decomposition_profile(&res, ZERO_G_THRESHOLD),
            "decomposition": DecompositionFile::from_decomposition(&res.best_decomposition),
        }));
    }
    emit_json(o, &out)
}

fn sample(o: &Opts) -> CliResult<()> {
    let campaign = Campaign::new(o.dim.unwrap_or(3), o.count.unwrap_or(100), o.seed, roof_config(o));
    match o.format {
        Format::Json => {
            let summary = run_campaign(&campaign, 0, |_| Ok(()))?;
            emit_json(o, &summary)
        }
        Format::Csv => match &o.out {
            // Rows reach disk chunk by chunk in a temporary sibling, which is
            // renamed into place once the campaign finishes.
            Some(path) => {
                let tmp = partial_path(path);
                let result = stream_csv(&campaign, File::create(&tmp)?);
                match result {
                    Ok(()) => std::fs::rename(&tmp, path)?,
                    Err(_) => {
                        let _ = std::fs::remove_file(&tmp);
                    }
                }
                result
            }
            None => stream_csv(&campaign, io::stdout().lock()),
        },
    }
}

fn partial_path(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!(".{name}.partial{}", std::process::id()))
}

fn stream_csv<W: Write>(campaign: &Campaign, out: W) -> CliResult<()> {
    let mut out = BufWriter::new(out);
    let mut first = true;
    run_campaign(campaign, 0, |rows| {
        write_csv_rows(&mut out, rows, first)?;
        first = false;
        Ok(())
    })?;
    out.into_inner().map_err(|e| Failure::from(e.into_error()))?.flush()?;
    Ok(())
}

fn zoo(o: &Opts) -> CliResult<()> {
    let state = load_state(o)?;
    let mut text = state_to_json(&state)?;
    text.push('\n');
    emit(o, text.as_bytes())
}

fn monotones(o: &Opts) -> CliResult<()> {
    let state = load_state(o)?;
    let d = state.dim();
    let parties = match pivot(o) {
        Some(p) => vec![p],
        None => Party::ALL.to_vec(),
    };
    let mut out = Vec::new();
    for p in parties {
        // The Schmidt coefficients across `p | rest` are the spectrum of ρ_p.
        let lambda: Vec<f64> = state.partial_trace(&[p])?.eigenvalues().iter().map(|&x| x.max(0.0)).collect();
        let m = monotones_from_coefficients(&lambda);
        out.push(json!({
            "pivot": p.label(),
            "dim": d,
            "schmidt_coefficients": lambda,
            "raw": m.raw,
            "normalized": m.normalized,
            "g": m.g(),
            "maclaurin": m.satisfies_maclaurin(1e-12),
        }));
    }
    emit_json(o, &out)
}
