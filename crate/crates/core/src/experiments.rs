//! Config-driven experiment runner: grids of `(n, F)` cells, averaged over
//! seeded noise realizations, written as per-realization CSV rows plus a
//! percent table.
//!
//! Realization `r` of every cell uses the noise seed `base_seed + r`, so
//! methods compared at equal seeds see identical over-rotation tables.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adiabatic::{optimize_tau, TauGrid};
use crate::basis::{check_qubit_cap, DEFAULT_QUBIT_CAP};
use crate::circuit::gates_per_step;
use crate::error::{Error, Result};
use crate::hamiltonian::GroundTruth;
use crate::lattice::LatticeSpec;
use crate::noise::{FidelitySpec, NoiseTable};
use crate::vha::{frozen_parameter_transfer, optimize, OptimizeOptions, StartFamily, VhaProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Vha,
    Adiabatic,
    FrozenTransfer,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Vha => "vha",
            Method::Adiabatic => "adiabatic",
            Method::FrozenTransfer => "frozen_transfer",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vha" => Ok(Self::Vha),
            "adiabatic" => Ok(Self::Adiabatic),
            "frozen_transfer" | "frozen-transfer" => Ok(Self::FrozenTransfer),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }
}

/// Flat key-value experiment description, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `CxR`, columns first.
    pub lattice: String,
    pub t: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub method: Method,
    pub n: Vec<usize>,
    /// Averaged minimal gate fidelities, as fractions.
    pub fidelity: Vec<f64>,
    /// Realizations per noisy cell; per-method defaults when absent.
    pub runs: Option<usize>,
    pub seed: u64,
    pub starts: StartFamily,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_points: usize,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let grid = TauGrid::default();
        Self {
            lattice: "2x2".into(),
            t: 1.0,
            u: 2.0,
            method: Method::Vha,
            n: vec![2, 3, 4, 5],
            fidelity: vec![1.0, 0.9999, 0.999],
            runs: None,
            seed: 1,
            starts: StartFamily::Baseline,
            tau_min: grid.min,
            tau_max: grid.max,
            tau_points: grid.points,
            out: None,
        }
    }
}

/// Parses `CxR` into `(columns, rows)`.
pub fn parse_lattice_dims(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("lattice must look like 3x2, got {s:?}"));
    let (c, r) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let c: usize = c.trim().parse().map_err(|_| bad())?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    Ok((c, r))
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn lattice_spec(&self) -> Result<LatticeSpec> {
        let (c, r) = parse_lattice_dims(&self.lattice)?;
        LatticeSpec::new(c, r, self.t, self.u)
    }

    pub fn tau_grid(&self) -> TauGrid {
        TauGrid { min: self.tau_min, max: self.tau_max, points: self.tau_points }
    }

    /// Realizations for one cell: a noiseless cell is deterministic and runs
    /// once; otherwise `runs`, or 100 (VHA, frozen transfer) / 10^4 (adiabatic).
    pub fn runs_for(&self, fbar: f64) -> usize {
        if fbar >= 1.0 {
            return 1;
        }
        self.runs.unwrap_or(match self.method {
            Method::Vha | Method::FrozenTransfer => 100,
            Method::Adiabatic => 10_000,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let lattice = self.lattice_spec()?;
        check_qubit_cap(&lattice, DEFAULT_QUBIT_CAP)?;
        if self.n.is_empty() || self.n.contains(&0) {
            return Err(Error::Config("n must list positive step counts".into()));
        }
        if self.fidelity.is_empty() {
            return Err(Error::Config("fidelity list is empty".into()));
        }
        for &f in &self.fidelity {
            FidelitySpec::new(f)?;
        }
        if self.runs == Some(0) {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.method == Method::Adiabatic {
            self.tau_grid().validate()?;
        }
        Ok(())
    }
}

/// One realization of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub method: Method,
    pub lattice: String,
    pub n: usize,
    pub fbar: f64,
    pub seed: u64,
    /// Start set id, or the optimal `tau` for the adiabatic method.
    pub start_set: String,
    pub energy: f64,
    pub fidelity: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub n: usize,
    pub fbar: f64,
    pub runs: usize,
    /// Percent.
    pub mean_fidelity: f64,
    /// Percent, sample standard deviation (0 for a single run).
    pub std_fidelity: f64,
    pub mean_energy: f64,
    pub all_converged: bool,
}

#[derive(Debug, Clone)]
pub struct TableResult {
    pub method: Method,
    pub lattice: String,
    pub records: Vec<RunRecord>,
    pub cells: Vec<CellSummary>,
}

/// Runs every `(n, F)` cell of `config`.
pub fn run_table(config: &ExperimentConfig) -> Result<TableResult> {
    config.validate()?;
    let lattice = config.lattice_spec()?;
    let truth = GroundTruth::compute(&lattice)?;
    let problem = VhaProblem::new(&truth)?;
    let opts = OptimizeOptions::default();
    let mut records = Vec::new();
    let mut cells = Vec::new();
    for &n in &config.n {
        let len = problem.circuit_len(n);
        let reference = match config.method {
            Method::FrozenTransfer => {
                Some(optimize(&problem, n, &NoiseTable::zeros(len), config.starts, &opts)?)
            }
            _ => None,
        };
        for &fbar in &config.fidelity {
            let spec = FidelitySpec::new(fbar)?;
            let seeds: Vec<u64> = (0..config.runs_for(fbar) as u64).map(|r| config.seed + r).collect();
            let cell: Vec<RunRecord> = seeds
                .par_iter()
                .map(|&seed| -> Result<RunRecord> {
                    let noise = NoiseTable::sample(len, spec.sigma, seed)?;
                    let base = RunRecord {
                        method: config.method,
                        lattice: lattice.label(),
                        n,
                        fbar,
                        seed,
                        start_set: String::new(),
                        energy: 0.0,
                        fidelity: 0.0,
                        evaluations: 0,
                        converged: true,
                    };
                    Ok(match config.method {
                        Method::Vha => {
                            let r = optimize(&problem, n, &noise, config.starts, &opts)?;
                            RunRecord {
                                start_set: r.start_set_id,
                                energy: r.final_energy,
                                fidelity: r.final_fidelity,
                                evaluations: r.evaluations,
                                converged: r.converged,
                                ..base
                            }
                        }
                        Method::Adiabatic => {
                            let best = optimize_tau(&problem, n, &noise, &config.tau_grid())?;
                            RunRecord {
                                start_set: format!("{:.6}", best.tau),
                                energy: best.energy,
                                fidelity: best.fidelity,
                                evaluations: config.tau_points + 1,
                                ..base
                            }
                        }
                        Method::FrozenTransfer => {
                            let reference = reference.as_ref().expect("noiseless reference run");
                            let fidelity = frozen_parameter_transfer(&problem, &reference.best_theta, &noise)?;
                            let energy = problem.energy(&reference.best_theta, &noise)?;
                            RunRecord {
                                start_set: reference.start_set_id.clone(),
                                energy,
                                fidelity,
                                evaluations: reference.evaluations,
                                converged: reference.converged,
                                ..base
                            }
                        }
                    })
                })
                .collect::<Result<_>>()?;
            cells.push(summarize(n, fbar, &cell));
            records.extend(cell);
        }
    }
    let result = TableResult { method: config.method, lattice: lattice.label(), records, cells };
    if let Some(path) = &config.out {
        write_csv(&result, path)?;
    }
    Ok(result)
}

fn summarize(n: usize, fbar: f64, cell: &[RunRecord]) -> CellSummary {
    let k = cell.len() as f64;
    let mean = cell.iter().map(|r| r.fidelity).sum::<f64>() / k;
    let var = if cell.len() > 1 {
        cell.iter().map(|r| (r.fidelity - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    CellSummary {
        n,
        fbar,
        runs: cell.len(),
        mean_fidelity: 100.0 * mean,
        std_fidelity: 100.0 * var.sqrt(),
        mean_energy: cell.iter().map(|r| r.energy).sum::<f64>() / k,
        all_converged: cell.iter().all(|r| r.converged),
    }
}

/// Writes one CSV row per realization.
pub fn write_csv(result: &TableResult, path: &Path) -> Result<()> {
    let file = fs::File::create(path)?;
    write_csv_to(result, file)
}

pub fn write_csv_to<W: Write>(result: &TableResult, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let label = if result.method == Method::Adiabatic { "tau" } else { "start_set" };
    w.write_record([
        "method",
        "lattice",
        "n",
        "fbar",
        "seed",
        label,
        "energy",
        "fidelity",
        "evaluations",
        "converged",
    ])?;
    for r in &result.records {
        w.write_record([
            r.method.name().to_string(),
            r.lattice.clone(),
            r.n.to_string(),
            format!("{}", r.fbar),
            r.seed.to_string(),
            r.start_set.clone(),
            format!("{:.12}", r.energy),
            format!("{:.12}", r.fidelity),
            r.evaluations.to_string(),
            r.converged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

impl fmt::Display for TableResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut fbars: Vec<f64> = Vec::new();
        let mut ns: Vec<usize> = Vec::new();
        for c in &self.cells {
            if !fbars.contains(&c.fbar) {
                fbars.push(c.fbar);
            }
            if !ns.contains(&c.n) {
                ns.push(c.n);
            }
        }
        writeln!(f, "{} {}: final state fidelity [%] (mean +- std over runs)", self.method.name(), self.lattice)?;
        write!(f, "{:>4}", "n")?;
        for fb in &fbars {
            write!(f, " {:>20}", format!("F={:.3}%", 100.0 * fb))?;
        }
        writeln!(f)?;
        for &n in &ns {
            write!(f, "{n:>4}")?;
            for &fb in &fbars {
                let c = self.cells.iter().find(|c| c.n == n && c.fbar == fb).expect("cell exists");
                let flag = if c.all_converged { ' ' } else { '!' };
                write!(f, " {:>20}", format!("{:.2} +- {:.2}{flag}", c.mean_fidelity, c.std_fidelity))?;
            }
            writeln!(f)?;
        }
        if self.cells.iter().any(|c| !c.all_converged) {
            writeln!(f, "! at least one optimization hit its evaluation cap")?;
        }
        Ok(())
    }
}

/// Exact reference values for one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthReport {
    pub lattice: String,
    pub t: f64,
    pub u: f64,
    pub eg: f64,
    pub e0_expectation: f64,
    pub initial_overlap: f64,
    pub hilbert_dim: usize,
    pub sector: crate::basis::Sector,
    pub sector_dim: usize,
    pub gates_per_step: usize,
}

pub fn ground_truth_report(lattice: &LatticeSpec) -> Result<GroundTruthReport> {
    let truth = GroundTruth::compute(lattice)?;
    Ok(GroundTruthReport {
        lattice: lattice.label(),
        t: lattice.t,
        u: lattice.u,
        eg: truth.eg,
        e0_expectation: truth.e0_expectation,
        initial_overlap: truth.initial_overlap(),
        hilbert_dim: 1usize << lattice.qubits(),
        sector: truth.sector(),
        sector_dim: truth.basis.dim(),
        gates_per_step: gates_per_step(lattice),
    })
}

impl fmt::Display for GroundTruthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.t;
        writeln!(f, "lattice            {} (t = {}, U = {})", self.lattice, self.t, self.u)?;
        writeln!(f, "E_g                {:.4} t", self.eg / t)?;
        writeln!(f, "<psi0|H|psi0>      {:.4} t", self.e0_expectation / t)?;
        writeln!(f, "|<psi_g|psi0>|     {:.2} %", 100.0 * self.initial_overlap)?;
        writeln!(f, "Hilbert dimension  {}", self.hilbert_dim)?;
        writeln!(f, "sector (Nup, Ndn)  {} of dimension {}", self.sector, self.sector_dim)?;
        write!(f, "gates per step     {}", self.gates_per_step)
    }
}
