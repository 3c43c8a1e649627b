use clap::{Args, Parser, Subcommand, ValueEnum};
use kstab_core::beta::{solve_ma_divisorial, stability_scan, BetaProblem, OptConfig};
use kstab_core::corpus::{generate, CorpusConfig};
use kstab_core::invariants::report;
use kstab_core::io::{
    BetaProblemDoc, BetaReportDoc, BuildModelReport, ClassInput, DivisorInput, EnvelopeReport,
    ErrorReport, InvariantsReport, MeasureReport, ModelReport, ModelScript, OrthogonalityReport,
    RestrictedVolumeInput, Rat, ScanInput, ScanReportDoc, SolveMaInput, SolveMaReport,
    ValueReport, ZariskiReport,
};
use kstab_core::{ErrorKind, ModelContext};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

const THREADS_VAR: &str = "KSTAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "kstab", version, about = "Exact and numerical K-stability invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zariski decomposition and volume of a class.
    Zariski(Io),
    /// Volume of a class.
    Volume(Io),
    /// Restricted volume of a class along a test curve.
    RestrictedVolume(Io),
    /// Build a model from a blow-up script, or draw one from `--seed`.
    BuildModel(BuildArgs),
    /// Envelope of a vertical divisor.
    Envelope(Io),
    /// Monge–Ampère measure of the envelope of a vertical divisor.
    MaMeasure(Io),
    /// Orthogonality and mass-sum defects of a vertical divisor.
    Orthogonality(Io),
    /// DF, Mabuchi and J invariants of a vertical divisor.
    Invariants(Io),
    /// β-invariant of a divisorial measure.
    Beta(Tuned),
    /// Solve for the envelope whose measure is a given divisorial measure.
    SolveMa(Tuned),
    /// β over a grid of measures.
    StabilityScan(Tuned),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Io {
    /// JSON problem file.
    #[arg(long)]
    input: PathBuf,
    /// Report destination; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long, required_unless_present = "seed", conflicts_with = "seed")]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Draw a random model from the corpus generator.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct Tuned {
    #[command(flatten)]
    io: Io,
    /// Overrides the optimizer tolerance of the input file.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("input file {0} is empty")]
    Empty(PathBuf),
    #[error("schema violation: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] kstab_core::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::NonConvergence => 3,
                ErrorKind::Identity => 4,
            },
            _ => 2,
        }
    }

    fn report(&self) -> ErrorReport {
        match self {
            CliError::Core(e) => ErrorReport::from(e),
            other => ErrorReport {
                error: kstab_core::io::ErrorDetail {
                    kind: "input".into(),
                    detail: other.to_string(),
                },
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

enum Rendered {
    Json(String),
    Csv(String),
}

fn read_doc<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    if text.trim().is_empty() {
        return Err(CliError::Empty(path.to_path_buf()));
    }
    Ok(serde_json::from_str(&text)?)
}

fn json<T: Serialize>(x: &T) -> CliResult<Rendered> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(Rendered::Json(s))
}

fn json_only(format: Format) -> CliResult<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage("csv output is only available for stability-scan".into())),
    }
}

fn emit(out: Option<&Path>, r: Rendered) -> CliResult<()> {
    let text = match r {
        Rendered::Json(s) | Rendered::Csv(s) => s,
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn opt_override(base: &OptConfig, tol: Option<f64>) -> CliResult<OptConfig> {
    match tol {
        None => Ok(base.clone()),
        Some(t) if t.is_finite() && t > 0.0 => Ok(OptConfig { tol: t, ..base.clone() }),
        Some(t) => Err(CliError::Usage(format!("--tol must be positive and finite, got {t}"))),
    }
}

fn problem(doc: &BetaProblemDoc, tol: Option<f64>) -> CliResult<BetaProblem> {
    let p = doc.to_problem()?;
    let opt = opt_override(&p.opt, tol)?;
    Ok(p.with_opt(opt)?)
}

fn divisor_command(io: &Io, f: impl FnOnce(&ModelContext, Vec<kstab_core::Q>) -> CliResult<Rendered>) -> CliResult<Rendered> {
    json_only(io.format)?;
    let input: DivisorInput = read_doc(&io.input)?;
    let ctx = input.context()?;
    f(&ctx, input.coeffs())
}

#[derive(Serialize)]
struct CsvRow {
    xi: String,
    beta: Option<f64>,
    energy: Option<f64>,
    ratio: Option<f64>,
    error: Option<String>,
}

fn scan_csv(doc: &ScanReportDoc) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &doc.rows {
        let xi: Vec<String> = row.xi.iter().cloned().map(String::from).collect();
        w.serialize(CsvRow {
            xi: xi.join(";"),
            beta: row.beta,
            energy: row.energy,
            ratio: row.ratio,
            error: row.error.clone(),
        })
        .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cmd: &Command) -> CliResult<Rendered> {
    match cmd {
        Command::Zariski(io) => {
            json_only(io.format)?;
            let (l, u) = read_doc::<ClassInput>(&io.input)?.parts()?;
            let z = l.zariski(&u).map_err(kstab_core::Error::from)?;
            let v = l.volume(&u).map_err(kstab_core::Error::from)?;
            json(&ZariskiReport::new(&l, &z, v))
        }
        Command::Volume(io) => {
            json_only(io.format)?;
            let (l, u) = read_doc::<ClassInput>(&io.input)?.parts()?;
            json(&ValueReport::new(l.volume(&u).map_err(kstab_core::Error::from)?))
        }
        Command::RestrictedVolume(io) => {
            json_only(io.format)?;
            let input: RestrictedVolumeInput = read_doc(&io.input)?;
            let l = input.lattice.to_lattice()?;
            let u = kstab_core::DivClass(input.class.iter().map(|r| r.0.clone()).collect());
            let rv = l
                .curve_index(&input.curve)
                .and_then(|c| l.restricted_volume(&u, c))
                .map_err(kstab_core::Error::from)?;
            json(&ValueReport::new(rv))
        }
        Command::BuildModel(b) => {
            json_only(b.format)?;
            let script = match (&b.input, b.seed) {
                (Some(p), _) => read_doc::<ModelScript>(p)?,
                (None, Some(seed)) => {
                    let e = generate(seed, 1, &CorpusConfig::default())?.remove(0);
                    ModelScript::new(&e.curve, &e.steps)
                }
                (None, None) => return Err(CliError::Usage("build-model needs --input or --seed".into())),
            };
            let ctx = ModelContext::new(script.build()?)?;
            json(&BuildModelReport {
                model: ModelReport::new(&ctx),
                script,
            })
        }
        Command::Envelope(io) => divisor_command(io, |ctx, a| {
            json(&EnvelopeReport::from(&ctx.divisor(a)?.envelope()?))
        }),
        Command::MaMeasure(io) => divisor_command(io, |ctx, a| {
            json(&MeasureReport::new(ctx, &ctx.divisor(a)?.ma_envelope()?))
        }),
        Command::Orthogonality(io) => divisor_command(io, |ctx, a| {
            let d = ctx.divisor(a)?;
            json(&OrthogonalityReport {
                orthogonality_defect: Rat(d.orthogonality_defect()?),
                mass_sum_defect: Rat(d.mass_sum_check()?),
            })
        }),
        Command::Invariants(io) => divisor_command(io, |ctx, a| {
            json(&InvariantsReport::from(&report(&ctx.divisor(a)?)?))
        }),
        Command::Beta(t) => {
            json_only(t.io.format)?;
            let p = problem(&read_doc(&t.io.input)?, t.tol)?;
            json(&BetaReportDoc::from(&p.beta()?))
        }
        Command::SolveMa(t) => {
            json_only(t.io.format)?;
            let input: SolveMaInput = read_doc(&t.io.input)?;
            let ctx = ModelContext::new(input.model.build()?)?;
            let base = input.opt.as_ref().map(OptConfig::from).unwrap_or_default();
            let opt = opt_override(&base, t.tol)?;
            let xi: Vec<_> = input.xi.iter().map(|r| r.0.clone()).collect();
            json(&SolveMaReport::new(&ctx, &solve_ma_divisorial(&ctx, &xi, &opt)?))
        }
        Command::StabilityScan(t) => {
            let input: ScanInput = read_doc(&t.io.input)?;
            let p = problem(&input.problem, t.tol)?;
            let doc = ScanReportDoc::from(&stability_scan(&p, &input.grid())?);
            match t.io.format {
                Format::Json => json(&doc),
                Format::Csv => Ok(Rendered::Csv(scan_csv(&doc)?)),
            }
        }
    }
}

fn output_of(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Zariski(io)
        | Command::Volume(io)
        | Command::RestrictedVolume(io)
        | Command::Envelope(io)
        | Command::MaMeasure(io)
        | Command::Orthogonality(io)
        | Command::Invariants(io) => io.output.as_deref(),
        Command::BuildModel(b) => b.output.as_deref(),
        Command::Beta(t) | Command::SolveMa(t) | Command::StabilityScan(t) => t.io.output.as_deref(),
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn fail(e: &CliError) -> ExitCode {
    let report = serde_json::to_string(&e.report()).unwrap_or_else(|_| e.to_string());
    eprintln!("{report}");
    ExitCode::from(e.code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    match run(&cli.command).and_then(|r| emit(output_of(&cli.command), r)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
