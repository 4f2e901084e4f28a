use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fiscal_panel::dcce::CsaLags;
use fiscal_panel::pipeline::{
    self, ingest_check, load_config, load_scenario, run_diagnose, run_estimate, run_pipeline,
    RunConfig,
};

/// Output-directory override honored between the config file and the
/// command-line flag.
const OUTPUT_DIR_ENV: &str = "FISCAL_PANEL_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "fiscal-panel",
    version,
    about = "Heterogeneous panel estimation of fiscal reaction functions and debt sustainability checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the data file from the configuration.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Override the output directory (also via FISCAL_PANEL_OUTPUT_DIR).
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Override the break year of the step dummy.
    #[arg(long)]
    break_year: Option<i32>,
    /// Override the trend-filter smoothing parameter.
    #[arg(long)]
    hp_lambda: Option<f64>,
    /// Override the cross-sectional-average lag count ("auto" or an
    /// integer).
    #[arg(long)]
    csa_lags: Option<String>,
    /// Enable the half-panel jackknife correction.
    #[arg(long)]
    jackknife: bool,
    /// Override the seed recorded in the manifest.
    #[arg(long)]
    seed: Option<u64>,
    /// Run unit estimations on a single thread.
    #[arg(long)]
    serial: bool,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig, fiscal_panel::Error> {
        let mut config = load_config(&self.config)?;
        if let Some(data) = &self.data {
            config.data = data.clone();
        }
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            config.output_dir = PathBuf::from(dir);
        }
        if let Some(dir) = &self.output_dir {
            config.output_dir = dir.clone();
        }
        if let Some(y) = self.break_year {
            config.break_year = y;
        }
        if let Some(l) = self.hp_lambda {
            config.hp_lambda = l;
        }
        if let Some(raw) = &self.csa_lags {
            config.csa_lags = if raw.eq_ignore_ascii_case("auto") {
                CsaLags::Auto
            } else {
                let m: usize = raw.parse().map_err(|_| {
                    fiscal_panel::Error::InvalidConfig(format!(
                        "--csa-lags expects \"auto\" or an integer, got {raw:?}"
                    ))
                })?;
                CsaLags::Fixed(m)
            };
        }
        if self.jackknife {
            config.jackknife = true;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if self.serial {
            config.parallel = false;
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate the configuration and data file, reporting the panel shape.
    IngestCheck(ConfigArgs),
    /// Run the diagnostic battery and write the summary table.
    Diagnose(ConfigArgs),
    /// Estimate the mean-group regressions and the long-run summary.
    Estimate(ConfigArgs),
    /// Simulate a debt path from a scenario file.
    Simulate {
        /// TOML scenario (rule, rates, initial conditions).
        #[arg(long)]
        scenario: PathBuf,
        /// Directory for the trajectory table.
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
    },
    /// Run the full pipeline and write every artifact plus a manifest.
    Report(ConfigArgs),
}

fn run() -> Result<(), fiscal_panel::Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::IngestCheck(args) => {
            let config = args.resolve()?;
            let panel = ingest_check(&config)?;
            println!(
                "ok: {} units x {} years ({}..{}), variables: {}",
                panel.n_units(),
                panel.n_years(),
                panel.years()[0],
                panel.years().last().unwrap(),
                panel.variable_names().join(", ")
            );
        }
        Command::Diagnose(args) => {
            let config = args.resolve()?;
            report_summary(run_diagnose(&config)?);
        }
        Command::Estimate(args) => {
            let config = args.resolve()?;
            report_summary(run_estimate(&config)?);
        }
        Command::Simulate {
            scenario,
            output_dir,
        } => {
            let output_dir = match std::env::var(OUTPUT_DIR_ENV) {
                Ok(dir) => PathBuf::from(dir),
                Err(_) => output_dir,
            };
            let scenario = load_scenario(&scenario)?;
            let (path, verdict) = pipeline::run_simulate(&scenario, &output_dir)?;
            println!("wrote {}", path.display());
            println!("verdict: {verdict}");
        }
        Command::Report(args) => {
            let config = args.resolve()?;
            report_summary(run_pipeline(&config)?);
        }
    }
    Ok(())
}

fn report_summary(summary: pipeline::RunSummary) {
    println!("panel: {} units x {} years", summary.n_units, summary.n_years);
    for p in summary.artifacts {
        println!("wrote {}", p.display());
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
