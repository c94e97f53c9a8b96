use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hybrid_teleport::error::{Error, Result};
use hybrid_teleport::scenario::{exit_code, run, write_csv, Experiment, InputSpec, Overrides, ScenarioConfig};

#[derive(Parser)]
#[command(
    version,
    about = "Polarization-to-OAM teleportation simulator",
    after_help = "Exit status: 0 success, 1 invalid input, 2 runtime failure, 3 estimator did not converge.\n\
                  Settings are resolved as: built-in default < --config file < command-line flag."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coincidence curves against the delay-stage position.
    HomScan(Common),
    /// Fidelity and coincidence probability of the post-selected pair.
    SourceVerify(Common),
    /// Port matrix of the Bell-state sorter.
    BsmVerify(Common),
    /// Teleport one input or the six-pole alphabet.
    Teleport(Common),
    /// Teleport, then reconstruct Bob's qubit by maximum likelihood.
    Tomo(Common),
    /// Fit the noise model to target fidelities.
    Calibrate(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML); its `experiment` key is replaced by the subcommand.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Pole name (H, V, D, A, R, L) or `six-poles`.
    #[arg(long)]
    input: Option<String>,
    /// Monte Carlo events per input.
    #[arg(long, conflicts_with = "exact")]
    shots: Option<u64>,
    /// Use exact outcome probabilities.
    #[arg(long)]
    exact: bool,
    /// Defaults to the value of HYBRID_TELEPORT_SEED, then to a fixed built-in seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    ell0: Option<i32>,
    #[arg(long)]
    depolarizing_p: Option<f64>,
    #[arg(long)]
    source_delay_mm: Option<f64>,
    #[arg(long)]
    feedforward_flip_prob: Option<f64>,
    /// Width of the Gaussian overlap model.
    #[arg(long)]
    sigma_mm: Option<f64>,
    /// Leave Bob's photon uncorrected and rotate the analysis frame instead.
    #[arg(long)]
    verify_only: bool,
    #[arg(long)]
    shots_per_basis: Option<u64>,
    /// Parametric-bootstrap resamples for tomography error bars.
    #[arg(long)]
    bootstrap: Option<usize>,
    #[arg(long)]
    target_source: Option<f64>,
    #[arg(long)]
    target_average: Option<f64>,
    /// Write the JSON envelope here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the CSV table here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        })
}

fn execute(experiment: Experiment, args: Common) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::from_toml_for(&std::fs::read_to_string(path)?, experiment)?,
        None => ScenarioConfig::new(experiment),
    };
    Overrides {
        input: args.input.map(InputSpec::Named),
        shots: args.shots,
        exact: args.exact,
        seed: args.seed,
        ell0: args.ell0,
        depolarizing_p: args.depolarizing_p,
        source_delay_mm: args.source_delay_mm,
        feedforward_flip_prob: args.feedforward_flip_prob,
        sigma_mm: args.sigma_mm,
        verify_only: args.verify_only,
        shots_per_basis: args.shots_per_basis,
        bootstrap: args.bootstrap,
        target_source: args.target_source,
        target_average: args.target_average,
        json: args.json,
        csv: args.csv,
    }
    .apply(&mut cfg)?;

    let envelope = run(&cfg, timestamp())?;
    let json = envelope.to_json()?;
    match &cfg.output.json {
        Some(path) => std::fs::write(path, json)?,
        None => print!("{json}"),
    }
    if let Some(path) = &cfg.output.csv {
        let mut buf = Vec::new();
        if !write_csv(&envelope.payload, &mut buf)? {
            return Err(Error::invalid("csv", format!("{} has no CSV table", experiment.name())));
        }
        std::fs::write(path, buf)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (experiment, args) = match cli.command {
        Command::HomScan(a) => (Experiment::HomScan, a),
        Command::SourceVerify(a) => (Experiment::SourceVerify, a),
        Command::BsmVerify(a) => (Experiment::BsmVerify, a),
        Command::Teleport(a) => (Experiment::Teleport, a),
        Command::Tomo(a) => (Experiment::Tomo, a),
        Command::Calibrate(a) => (Experiment::Calibrate, a),
    };
    match execute(experiment, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
