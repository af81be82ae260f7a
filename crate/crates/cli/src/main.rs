//! `chernkit`: tensors, balanced checks, field residuals, the identity suite
//! and definiteness scans from the command line.
//!
//! Exit status is 0 on success, 1 when a case fails or a theorem check is
//! violated, and 2 on a configuration or I/O error.

use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

use chernkit::fields::{FieldKind, FieldSpec};
use chernkit::manifold::{DerivativeMode, ManifoldConfig};
use chernkit::report::{emit_report, run, CaseSelection, Command, RunConfig};
use chernkit::verify::CaseId;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "chernkit", version, about = "Chern-connection geometry and Bochner-type identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Tensor tables at sample points.
    Tensors(RunArgs),
    /// Balanced conditions on the quadrature grid.
    Balanced(RunArgs),
    /// Analytic, harmonic, Killing and Lie residuals of fields.
    Classify(RunArgs),
    /// The identity suite and the theorem report.
    Verify(RunArgs),
    /// Definiteness of k, k*, s, t, H and k − ½t over the grid.
    Scan(RunArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Symbolic,
    Fd,
    FdRichardson,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// JSON run config; flags below override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in manifold: flat_torus, iwasawa or conformal_torus.
    #[arg(long)]
    manifold: Option<String>,
    /// Manifold parameter, e.g. `eps=0.2` or `n=3`.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Grid points per real axis.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Case id, or `all`; repeatable.
    #[arg(long = "case", value_name = "ID")]
    cases: Vec<String>,
    /// Run every case.
    #[arg(long)]
    all: bool,
    /// Tolerance override, e.g. `integral=1e-7`; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tols: Vec<String>,
    /// Field as `form:NAME`, `vector:NAME`, `form:random:SEED` or
    /// `vector:random:SEED`; repeatable.
    #[arg(long = "field", value_name = "SPEC")]
    fields: Vec<String>,
    /// Output directory for report.json (and tensors.csv with --csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write tensors.csv.
    #[arg(long)]
    csv: bool,
    /// Seed of random fields and random sample points.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random sample points, or `;`-separated points of
    /// comma-separated real coordinates.
    #[arg(long)]
    points: Option<String>,
    /// One sample point as comma-separated real coordinates; repeatable.
    #[arg(long = "point", value_name = "X,Y,...")]
    point: Vec<String>,
    /// Skip the theorem report.
    #[arg(long)]
    no_theorems: bool,
    /// Leave the timing section out of the report.
    #[arg(long)]
    omit_timing: bool,
    /// What to print on standard output.
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

type Failure = Box<dyn Error>;

fn split_pair(s: &str) -> Result<(String, f64), Failure> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("'{value}' in '{s}' is not a number"))?;
    Ok((name.trim().to_string(), value))
}

fn parse_point(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{x}' in point '{s}' is not a number").into())
        })
        .collect()
}

fn parse_field(s: &str) -> Result<FieldSpec, Failure> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("field '{s}' must look like form:NAME or vector:NAME"))?;
    let kind = match kind {
        "form" => FieldKind::Form,
        "vector" => FieldKind::Vector,
        other => return Err(format!("field kind must be form or vector, got '{other}'").into()),
    };
    match rest.strip_prefix("random:") {
        Some(seed) => {
            let seed: u64 = seed
                .parse()
                .map_err(|_| format!("random field seed '{seed}' is not an integer"))?;
            Ok(FieldSpec::random(kind, 2, seed))
        }
        None => Ok(FieldSpec::builtin(kind, rest)),
    }
}

fn build_config(args: &RunArgs) -> Result<RunConfig, Failure> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            RunConfig::from_json(&text)?
        }
        None => {
            let name = args
                .manifold
                .as_deref()
                .ok_or("either --manifold or --config is required")?;
            RunConfig::new(ManifoldConfig::builtin(name))
        }
    };
    if args.config.is_some() {
        if let Some(name) = &args.manifold {
            config.manifold = ManifoldConfig::builtin(name);
        }
    }
    for p in &args.params {
        let (name, value) = split_pair(p)?;
        config.manifold.params.insert(name, value);
    }
    if let Some(r) = args.resolution {
        config.resolution = r;
    }
    if let Some(m) = args.mode {
        config.mode = match m {
            Mode::Symbolic => DerivativeMode::Symbolic,
            Mode::Fd => DerivativeMode::Fd,
            Mode::FdRichardson => DerivativeMode::FdRichardson,
        };
    }
    if args.all || args.cases.iter().any(|c| c.eq_ignore_ascii_case("all")) {
        config.cases = CaseSelection::All;
    } else if !args.cases.is_empty() {
        let ids = args
            .cases
            .iter()
            .map(|c| c.parse::<CaseId>())
            .collect::<Result<Vec<_>, _>>()?;
        config.cases = CaseSelection::List(ids);
    }
    for t in &args.tols {
        let (name, value) = split_pair(t)?;
        config.tolerances.insert(name, value);
    }
    if !args.fields.is_empty() {
        config.fields = args.fields.iter().map(|f| parse_field(f)).collect::<Result<_, _>>()?;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let explicit: Vec<Vec<f64>> = args.point.iter().map(|p| parse_point(p)).collect::<Result<_, _>>()?;
    if !explicit.is_empty() {
        config.samples.points = explicit;
        config.samples.random = 0;
    }
    if let Some(points) = &args.points {
        match points.trim().parse::<usize>() {
            Ok(count) => config.samples.random = count,
            Err(_) => {
                let list: Vec<Vec<f64>> = points
                    .split(';')
                    .filter(|p| !p.trim().is_empty())
                    .map(parse_point)
                    .collect::<Result<_, _>>()?;
                config.samples.points.extend(list);
                if args.point.is_empty() {
                    config.samples.random = 0;
                }
            }
        }
    }
    if let Some(dir) = &args.out {
        config.output.dir = Some(dir.display().to_string());
    }
    config.output.csv |= args.csv;
    config.output.omit_timing |= args.omit_timing;
    if args.no_theorems {
        config.theorems = false;
    }
    config.validate()?;
    Ok(config)
}

fn execute(cli: Cli) -> Result<u8, Failure> {
    let (command, args) = match &cli.command {
        Cmd::Tensors(a) => (Command::Tensors, a),
        Cmd::Balanced(a) => (Command::Balanced, a),
        Cmd::Classify(a) => (Command::Classify, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Scan(a) => (Command::Scan, a),
    };
    let config = build_config(args)?;
    let report = run(&config, command)?;
    match args.format {
        Format::Table => print!("{}", report.summary_table()),
        Format::Json => print!("{}", report.to_json()),
    }
    if let Some(dir) = &config.output.dir {
        let written = emit_report(&report, dir.as_ref(), config.output.csv)
            .map_err(|e| format!("cannot write report to {dir}: {e}"))?;
        for path in written {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(report.exit_code() as u8)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
