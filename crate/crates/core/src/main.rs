use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use threshold_spectra::cli::{
    cmd_check, cmd_converge, cmd_threshold, configure_threads, default_check_config, resolve_out_dir, CliError,
    RunConfig,
};
use threshold_spectra::diagnostics::Suite;

#[derive(Parser)]
#[command(name = "threshold-spectra", version, about = "Coupling-constant thresholds and threshold states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides THRESHOLD_SPECTRA_OUT and the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every randomized step (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Energy ladder and threshold coupling.
    Threshold(Common),
    /// Threshold state, resonance criterion, weak residual and weighted convergence.
    Converge(Common),
    /// Diagnostic suites.
    Check {
        #[command(flatten)]
        common: Common,
        /// Suite to run; repeatable. Defaults to the suites listed in the config.
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
}

fn load(common: &Common, required: bool) -> Result<RunConfig, CliError> {
    let mut config = match &common.config {
        Some(path) => RunConfig::from_path(path)?,
        None if required => return Err(CliError::Usage("--config is required for this command".into())),
        None => default_check_config(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (common, output) = match &cli.command {
        Command::Threshold(common) => {
            let config = load(common, true)?;
            (common, cmd_threshold(&config).map(|o| (o, config)))
        }
        Command::Converge(common) => {
            let config = load(common, true)?;
            (common, cmd_converge(&config).map(|o| (o, config)))
        }
        Command::Check { common, suites } => {
            let config = load(common, false)?;
            let suites = if suites.is_empty() {
                config.checks.suites.clone()
            } else {
                suites.iter().map(|s| s.parse::<Suite>()).collect::<Result<_, _>>()?
            };
            (common, cmd_check(&config, &suites).map(|o| (o, config)))
        }
    };
    let (output, config) = output?;
    let dir = resolve_out_dir(common.out.as_deref(), &config);
    for path in output.write(&dir, &config.output.formats)? {
        println!("{}", path.display());
    }
    output.into_result().map(|_| ())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("threshold-spectra: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
