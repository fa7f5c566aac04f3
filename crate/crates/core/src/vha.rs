//! Variational Hamiltonian ansatz: energy objective, start parameters,
//! multi-start optimization and frozen-parameter transfer.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::compile_vha;
use crate::engine::SectorEngine;
use crate::error::{domain, Result};
use crate::hamiltonian::GroundTruth;
use crate::lattice::{LatticeSpec, NUM_GROUPS};
use crate::noise::NoiseTable;
use crate::optimizer::{minimize, SimplexOptions};
use crate::sparse::SparseOperator;
use crate::statevector::{run_circuit, StateVector};

/// Angles `theta[k][alpha - 1]` for steps `k = 0..n`, in units of `1/t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    rows: Vec<[f64; NUM_GROUPS]>,
}

impl ParameterSet {
    pub fn from_rows(rows: Vec<[f64; NUM_GROUPS]>) -> Self {
        Self { rows }
    }

    pub fn filled(steps: usize, value: f64) -> Self {
        Self { rows: vec![[value; NUM_GROUPS]; steps] }
    }

    /// Step-major flat layout, five entries per step.
    pub fn from_flat(steps: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != steps * NUM_GROUPS {
            return domain(format!("expected {} parameters for {steps} steps, got {}", steps * NUM_GROUPS, flat.len()));
        }
        Ok(Self {
            rows: flat.chunks_exact(NUM_GROUPS).map(|c| c.try_into().expect("chunk of five")).collect(),
        })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.rows.iter().flatten().copied().collect()
    }

    pub fn steps(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[[f64; NUM_GROUPS]] {
        &self.rows
    }

    /// `theta_{alpha, k}` with one-based indices.
    pub fn get(&self, alpha: usize, k: usize) -> f64 {
        self.rows[k - 1][alpha - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum StartFamily {
    #[default]
    Baseline,
    Improved,
}

impl std::str::FromStr for StartFamily {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Self::Baseline),
            "improved" => Ok(Self::Improved),
            other => Err(crate::Error::Config(format!("unknown start family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StartSet {
    pub id: String,
    pub params: ParameterSet,
}

/// Start points for `n` steps. The baseline family has three sets: an
/// adiabatic-like ramp over `tau = n/t`, a ramp of every group, and a uniform
/// `1/(n t)`. The improved family adds the ramp over `tau = 1/t` and uniform
/// sets `r/t` for `r = 0.1, ..., 1.0`.
pub fn start_parameter_sets(n: usize, family: StartFamily, t: f64) -> Vec<StartSet> {
    let nf = n as f64;
    let ramp = |k: usize| (k + 1) as f64 / nf;
    let build = |f: &dyn Fn(usize, usize) -> f64| {
        ParameterSet::from_rows((0..n).map(|k| std::array::from_fn(|a| f(a + 1, k))).collect())
    };
    let mut sets = vec![
        StartSet {
            id: "adiabatic".into(),
            params: build(&|a, k| if a == 5 { ramp(k) / t } else { 1.0 / t }),
        },
        StartSet { id: "ramp".into(), params: build(&|_, k| ramp(k) / t) },
        StartSet { id: "uniform".into(), params: build(&|_, _| 1.0 / (nf * t)) },
    ];
    if family == StartFamily::Improved {
        sets.push(StartSet {
            id: "adiabatic-short".into(),
            params: build(&|a, k| if a == 5 { ramp(k) / (nf * t) } else { 1.0 / (nf * t) }),
        });
        for r in 1..=10 {
            let r = r as f64 / 10.0;
            sets.push(StartSet { id: format!("uniform-r{r:.1}"), params: build(&|_, _| r / t) });
        }
    }
    sets
}

/// `<psi_f|H|psi_f>` with `psi_f = U(theta) psi_0`, evaluated on the full
/// Fock space with the bit-indexed kernels.
pub fn objective(
    params: &ParameterSet,
    lattice: &LatticeSpec,
    noise: &NoiseTable,
    psi0: &StateVector,
    h: &SparseOperator,
) -> Result<f64> {
    if psi0.dim() != 1usize << lattice.qubits() || h.dim() != psi0.dim() {
        return domain("objective expects full Fock space state and operator");
    }
    let circuit = compile_vha(lattice, params)?;
    let mut psi = psi0.clone();
    run_circuit(&mut psi, &circuit, noise)?;
    Ok(psi.expectation(h))
}

/// Ansatz evaluation bound to one lattice's ground-truth data, simulated on
/// the particle-number sector of the reference state.
pub struct VhaProblem<'a> {
    truth: &'a GroundTruth,
    engine: SectorEngine,
}

impl<'a> VhaProblem<'a> {
    pub fn new(truth: &'a GroundTruth) -> Result<Self> {
        let engine = SectorEngine::new(&truth.lattice, truth.basis.clone())?;
        Ok(Self { truth, engine })
    }

    pub fn truth(&self) -> &GroundTruth {
        self.truth
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.truth.lattice
    }

    /// Number of gates (and over-rotations) for `steps` ansatz steps.
    pub fn circuit_len(&self, steps: usize) -> usize {
        steps * crate::circuit::gates_per_step(&self.truth.lattice)
    }

    pub fn final_state(&self, params: &ParameterSet, noise: &NoiseTable) -> Result<StateVector> {
        let circuit = compile_vha(&self.truth.lattice, params)?;
        let mut psi = self.truth.psi0.clone();
        self.engine.run(&circuit, noise, &mut psi)?;
        Ok(psi)
    }

    pub fn energy(&self, params: &ParameterSet, noise: &NoiseTable) -> Result<f64> {
        Ok(self.final_state(params, noise)?.expectation(&self.truth.hamiltonian))
    }

    /// `|<psi_g|psi_f>|` for the circuit at `params`.
    pub fn fidelity(&self, params: &ParameterSet, noise: &NoiseTable) -> Result<f64> {
        Ok(self.truth.psig.fidelity(&self.final_state(params, noise)?))
    }

    /// Energy and fidelity of one circuit run.
    pub fn evaluate(&self, params: &ParameterSet, noise: &NoiseTable) -> Result<(f64, f64)> {
        let psi = self.final_state(params, noise)?;
        Ok((psi.expectation(&self.truth.hamiltonian), self.truth.psig.fidelity(&psi)))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OptimizeOptions {
    /// Convergence threshold on the energy, in units of `t`.
    pub ftol: f64,
    /// Evaluations allowed per start, per parameter.
    pub evals_per_parameter: usize,
    pub initial_step: f64,
    pub max_restarts: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { ftol: 1e-8, evals_per_parameter: 400, initial_step: 0.1, max_restarts: 4 }
    }
}

#[derive(Debug, Clone)]
pub struct StartOutcome {
    pub start_set_id: String,
    pub theta: ParameterSet,
    pub energy: f64,
    pub fidelity: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct VhaResult {
    pub best_theta: ParameterSet,
    pub final_energy: f64,
    pub final_fidelity: f64,
    /// Objective evaluations summed over all starts.
    pub evaluations: usize,
    pub start_set_id: String,
    pub converged: bool,
    pub starts: Vec<StartOutcome>,
}

/// Minimizes the energy from every start of `family` with a frozen noise
/// table and keeps the lowest final energy.
pub fn optimize(
    problem: &VhaProblem<'_>,
    steps: usize,
    noise: &NoiseTable,
    family: StartFamily,
    opts: &OptimizeOptions,
) -> Result<VhaResult> {
    let starts = start_parameter_sets(steps, family, problem.lattice().t);
    optimize_from(problem, steps, noise, &starts, opts)
}

/// Multi-start minimization from explicit start sets.
pub fn optimize_from(
    problem: &VhaProblem<'_>,
    steps: usize,
    noise: &NoiseTable,
    starts: &[StartSet],
    opts: &OptimizeOptions,
) -> Result<VhaResult> {
    if steps == 0 {
        return domain("ansatz needs at least one step");
    }
    if starts.is_empty() {
        return domain("no start parameters given");
    }
    if noise.len() != problem.circuit_len(steps) {
        return domain(format!(
            "noise table has {} entries, the {steps}-step circuit has {} gates",
            noise.len(),
            problem.circuit_len(steps)
        ));
    }
    let t = problem.lattice().t;
    let dim = steps * NUM_GROUPS;
    let nm = SimplexOptions {
        initial_step: opts.initial_step / t,
        ftol: opts.ftol * t,
        max_evals: opts.evals_per_parameter * dim,
        max_restarts: opts.max_restarts,
    };
    let outcomes: Vec<StartOutcome> = starts
        .par_iter()
        .map(|start| -> Result<StartOutcome> {
            if start.params.steps() != steps {
                return domain(format!("start {} has {} steps, expected {steps}", start.id, start.params.steps()));
            }
            let f = |x: &[f64]| {
                let p = ParameterSet::from_flat(steps, x).expect("optimizer keeps the dimension");
                problem.energy(&p, noise).unwrap_or(f64::INFINITY)
            };
            let min = minimize(f, &start.params.to_flat(), &nm);
            let theta = ParameterSet::from_flat(steps, &min.x)?;
            let (energy, fidelity) = problem.evaluate(&theta, noise)?;
            Ok(StartOutcome {
                start_set_id: start.id.clone(),
                theta,
                energy,
                fidelity,
                evaluations: min.evaluations,
                converged: min.converged,
            })
        })
        .collect::<Result<_>>()?;

    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.energy.total_cmp(&b.1.energy).then(a.0.cmp(&b.0)))
        .map(|(_, o)| o.clone())
        .expect("at least one start");
    Ok(VhaResult {
        best_theta: best.theta,
        final_energy: best.energy,
        final_fidelity: best.fidelity,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        start_set_id: best.start_set_id,
        converged: best.converged,
        starts: outcomes,
    })
}

/// Fidelity of the noisy circuit at parameters optimized without noise,
/// with no re-optimization.
pub fn frozen_parameter_transfer(
    problem: &VhaProblem<'_>,
    theta_star: &ParameterSet,
    noise: &NoiseTable,
) -> Result<f64> {
    problem.fidelity(theta_star, noise)
}
