use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qthermo_cli::config::{parse_noise, Experiment, Format, GridSpec, Protocol};
use qthermo_cli::{compare_to_oracle, emit_report, run_sweep, ConfigError, RunConfig, SweepError};

const EXIT_CONFIG: u8 = 1;
const EXIT_ORACLE: u8 = 2;
const EXIT_IO: u8 = 3;

/// Sweep two-point-measurement experiments over inverse temperatures and
/// compare the results with closed-form references.
#[derive(Parser, Debug)]
#[command(name = "qthermo", version)]
struct Cli {
    /// TOML run configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    #[arg(long, value_enum)]
    protocol: Option<Protocol>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Repetitions for fluctuation-relation error bars.
    #[arg(long)]
    repetitions: Option<usize>,
    /// `min:max:points` or `v1,v2,…` (βω values, or angles for `rotation`).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Drive step counts for `intermediate`, comma separated.
    #[arg(long, value_delimiter = ',')]
    steps: Option<Vec<u32>>,
    /// Comma-separated `key=value` with keys heating, bias, jitter, readout_flip.
    #[arg(long)]
    noise: Option<String>,
    /// Exact probabilities instead of shot sampling.
    #[arg(long)]
    exact: bool,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn build_config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(e) = cli.experiment {
        cfg.experiment = e;
    }
    if let Some(p) = cli.protocol {
        cfg.protocol = p;
    }
    if let Some(n) = cli.shots {
        cfg.shots = n;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(k) = cli.repetitions {
        cfg.repetitions = k;
    }
    if let Some(g) = &cli.grid {
        cfg.grid = Some(GridSpec::parse(g)?);
    }
    if let Some(steps) = &cli.steps {
        cfg.steps = steps.clone();
    }
    if let Some(n) = &cli.noise {
        cfg.noise = parse_noise(n)?;
    }
    if cli.exact {
        cfg.exact = true;
    }
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(f) = cli.format {
        cfg.output.format = Some(f);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_report(cfg: &RunConfig, report: &qthermo_cli::Report) -> std::io::Result<()> {
    match &cfg.output.path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            emit_report(report, cfg.format(), &mut w)?;
            w.flush()
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit_report(report, cfg.format(), &mut lock)?;
            lock.flush()
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };

    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                ConfigError::Read { .. } => EXIT_IO,
                _ => EXIT_CONFIG,
            });
        }
    };
    let report = match run_sweep(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                SweepError::Config(_) | SweepError::Experiment(_) | SweepError::Noise(_) | SweepError::Thermal(_) => {
                    EXIT_CONFIG
                }
            });
        }
    };
    if let Err(e) = write_report(&cfg, &report) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_IO);
    }
    let summary = compare_to_oracle(&report);
    eprint!("{}", summary.render());
    if summary.failed() {
        eprintln!("error: deviations from the closed-form reference exceed the statistical tolerance");
        return ExitCode::from(EXIT_ORACLE);
    }
    ExitCode::SUCCESS
}
