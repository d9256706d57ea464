use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ddf_cli::{run_experiment, CliError, ExperimentKind, ExperimentSpec};

/// Outage and throughput contours of relay-assisted incremental-redundancy
/// HARQ.
#[derive(Parser)]
#[command(name = "ddfsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Required SNR_RD for an outage target (CSV).
    OutageContour(Common),
    /// Required SNR_RD for a spectral-efficiency target under slow link
    /// adaptation (CSV).
    SeContour(Common),
    /// Diversity bookkeeping per scheme and relay decoding instant (JSON).
    DiversityReport(Common),
    /// Mutual information tables of square QAM (CSV).
    MiTable(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment specification.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured number of Monte Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; all cores if absent.
    #[arg(long)]
    threads: Option<usize>,
}

fn run(kind: ExperimentKind, args: Common) -> Result<(), CliError> {
    let mut spec = match &args.config {
        Some(path) => ExperimentSpec::from_toml(&std::fs::read_to_string(path)?)?,
        None => ExperimentSpec::default(),
    };
    if let Some(s) = args.seed {
        spec.experiment.seed = s;
    }
    if let Some(t) = args.trials {
        spec.experiment.trials = t;
    }
    if let Some(p) = &args.out {
        spec.experiment.out = Some(p.display().to_string());
    }
    spec.experiment.kind = Some(spec.experiment.kind.unwrap_or(kind));
    spec.validate(kind).map_err(|e| match e {
        CliError::Spec(_) => e,
        other => CliError::Spec(other.to_string()),
    })?;
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Spec(format!("cannot start {n} threads: {e}")))?;
    }
    ddf_cli::report::set_progress(true);
    let out: Box<dyn Write> = match &spec.experiment.out {
        Some(p) => Box::new(BufWriter::new(File::create(PathBuf::from(p))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    run_experiment(kind, &spec, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::OutageContour(a) => (ExperimentKind::OutageContour, a),
        Command::SeContour(a) => (ExperimentKind::SeContour, a),
        Command::DiversityReport(a) => (ExperimentKind::DiversityReport, a),
        Command::MiTable(a) => (ExperimentKind::MiTableDump, a),
    };
    match run(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ddfsim: {e}");
            match e {
                CliError::Spec(_) | CliError::Toml(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
