use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cavgate::experiments::Experiment;
use cavgate::output::Artifact;
use cavgate::{write_report, CliError, RunConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cavgate", version, about = "Single-photon reflection off an emitter-loaded cavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration; defaults are used for missing keys
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured RNG seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output root directory
    #[arg(long, global = true, env = "CAVGATE_OUT")]
    out: Option<PathBuf>,
    /// Overrides the configured number of trajectories
    #[arg(long, global = true)]
    traj: Option<usize>,
    /// Only report failures
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Resonant R1 against the vacuum Rabi frequency
    Fig2b,
    /// Time-domain reflection against the closed-form R1
    OracleCompare,
    /// Polarization-gate truth table
    GateDemo,
    /// R1 over a range of one parameter
    Sweep,
    /// Noisy ensemble statistics
    Ensemble,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Fig2b => Experiment::Fig2b,
            Command::OracleCompare => Experiment::OracleCompare,
            Command::GateDemo => Experiment::GateDemo,
            Command::Sweep => Experiment::Sweep,
            Command::Ensemble => Experiment::Ensemble,
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(n) = cli.traj {
        cfg.n_traj = n;
    }
    cfg.validate()?;
    let root = cli.out.clone().or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("results"));

    let experiment = Experiment::from(cli.command);
    let start = Instant::now();
    let mut report = experiment.run(&cfg)?;
    let wall = start.elapsed().as_secs_f64();
    report.artifacts.push(Artifact::json("config.json", &cfg));
    let dir = write_report(&report, &cfg.hash(), &root, wall)?;

    for v in &report.verdicts {
        if !cli.quiet || !v.pass {
            println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
        }
    }
    if !cli.quiet {
        println!("wrote {} ({wall:.2} s)", dir.display());
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("cavgate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
