use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hubbard_vha::experiments::{ground_truth_report, run_table, ExperimentConfig, Method};
use hubbard_vha::vha::StartFamily;

#[derive(Parser)]
#[command(name = "hubbard-vha", version, about = "Variational Hamiltonian ansatz and adiabatic state preparation for the 2D Hubbard model under gate noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact ground state, reference state and their overlap.
    GroundTruth(Common),
    /// Noise-aware VHA optimization per realization.
    Vha(Common),
    /// Trotterized adiabatic evolution with the evolution time optimized per realization.
    Adiabatic(Common),
    /// Noiseless VHA optimum evaluated under noise.
    FrozenTransfer(Common),
    /// Runs the method named in the config file (or --method).
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_method)]
        method: Option<Method>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Lattice as CxR, for example 3x2.
    #[arg(long)]
    lattice: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long = "U")]
    u: Option<f64>,
    /// Trotter step counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Averaged minimal gate fidelities, comma separated fractions.
    #[arg(long, value_delimiter = ',')]
    fidelity: Option<Vec<f64>>,
    /// Noise realizations per noisy cell.
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed; realization r uses seed + r.
    #[arg(long)]
    seed: Option<u64>,
    /// Start parameter family: baseline or improved.
    #[arg(long, value_parser = parse_starts)]
    starts: Option<StartFamily>,
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_points: Option<usize>,
    /// CSV output with one row per realization.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: hubbard_vha::Error| e.to_string())
}

fn parse_starts(s: &str) -> Result<StartFamily, String> {
    s.parse().map_err(|e: hubbard_vha::Error| e.to_string())
}

impl Common {
    fn config(self, method: Option<Method>) -> hubbard_vha::Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { c.$field = v; })* };
        }
        set!(lattice, t, u, n, fidelity, starts, seed, tau_min, tau_max, tau_points);
        if self.runs.is_some() {
            c.runs = self.runs;
        }
        if self.out.is_some() {
            c.out = self.out;
        }
        if let Some(m) = method {
            c.method = m;
        }
        Ok(c)
    }
}

fn run(cli: Cli) -> hubbard_vha::Result<()> {
    let (common, method) = match cli.command {
        Command::GroundTruth(common) => {
            let config = common.config(None)?;
            println!("{}", ground_truth_report(&config.lattice_spec()?)?);
            return Ok(());
        }
        Command::Vha(common) => (common, Some(Method::Vha)),
        Command::Adiabatic(common) => (common, Some(Method::Adiabatic)),
        Command::FrozenTransfer(common) => (common, Some(Method::FrozenTransfer)),
        Command::Table { common, method } => (common, method),
    };
    let config = common.config(method)?;
    let table = run_table(&config)?;
    print!("{table}");
    if let Some(out) = &config.out {
        println!("wrote {} rows to {}", table.records.len(), out.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
