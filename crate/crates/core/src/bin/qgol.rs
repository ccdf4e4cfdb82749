use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qgol::experiment::{run, ExperimentKind, RunConfig};

#[derive(Parser)]
#[command(
    name = "qgol",
    version,
    about = "Quantum Game of Life chain experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the Schrödinger equation from a Fock state
    Evolve(RunArgs),
    /// Iterate the classical rule
    Classical(RunArgs),
    /// Stroboscopic measure-and-rotate dynamics
    Strobe(RunArgs),
    /// Equilibrium averages over random Fock states
    Ensemble(RunArgs),
    /// Ring model of a classical cycle
    Circulant(RunArgs),
}

/// Flags override values read from the config file.
#[derive(Args)]
struct RunArgs {
    /// key = value config file
    config: Option<PathBuf>,
    #[arg(long)]
    length: Option<usize>,
    /// Initial bitstring, site 1 first
    #[arg(long)]
    initial: Option<String>,
    /// Initial alive fraction for random Fock states
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    /// Integrator step [default: 0.01]
    #[arg(long)]
    dt: Option<f64>,
    /// Integrator steps between snapshots [default: 10]
    #[arg(long)]
    sample_every: Option<usize>,
    /// Classical or stroboscopic steps
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated: populations, clusters, diversity, entropies, bonds, mi, concurrence
    #[arg(long)]
    measures: Option<String>,
    /// Comma-separated bond list for bond entropies
    #[arg(long)]
    bonds: Option<String>,
    /// Comma-separated distances for concurrence
    #[arg(long)]
    distances: Option<String>,
    /// Averaging window "a,b"
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Classical averaging window "a,b"
    #[arg(long)]
    classical_window: Option<String>,
    /// Ring length for the circulant model
    #[arg(long)]
    period: Option<usize>,
    #[arg(long)]
    hopping: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self, kind: ExperimentKind) -> qgol::Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_file(kind, path)?,
            None => RunConfig::new(kind),
        };
        let flags = [
            ("length", self.length.map(|v| v.to_string())),
            ("initial", self.initial),
            ("density", self.density.map(|v| v.to_string())),
            ("tmax", self.tmax.map(|v| v.to_string())),
            ("dt", self.dt.map(|v| v.to_string())),
            ("sample_every", self.sample_every.map(|v| v.to_string())),
            ("steps", self.steps.map(|v| v.to_string())),
            ("samples", self.samples.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("measures", self.measures),
            ("bonds", self.bonds),
            ("distances", self.distances),
            ("window", self.window),
            ("classical_window", self.classical_window),
            ("period", self.period.map(|v| v.to_string())),
            ("hopping", self.hopping.map(|v| v.to_string())),
            ("out", self.out.map(|p| p.to_string_lossy().into_owned())),
        ];
        for (key, value) in flags {
            if let Some(value) = value {
                config.set(key, &value)?;
            }
        }
        Ok(config)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Evolve(a) => (ExperimentKind::Evolve, a),
        Command::Classical(a) => (ExperimentKind::Classical, a),
        Command::Strobe(a) => (ExperimentKind::Strobe, a),
        Command::Ensemble(a) => (ExperimentKind::Ensemble, a),
        Command::Circulant(a) => (ExperimentKind::Circulant, a),
    };
    match args.into_config(kind).and_then(|c| run(&c)) {
        Ok(summary) => {
            println!(
                "{}",
                serde_json::to_string(&summary).expect("summary serializes")
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            let record = json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{record}");
            ExitCode::FAILURE
        }
    }
}
