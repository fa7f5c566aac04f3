//! Trotterized adiabatic baseline.
//!
//! One Trotter step evolves for `tau/n` under every hopping group and for
//! `(tau/n)(k/n)` under the interaction, compiled with the same gate
//! sequence as an ansatz step. No finer splitting of the hopping part is
//! used, so both methods spend the same gates per step.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::lattice::NUM_GROUPS;
use crate::noise::NoiseTable;
use crate::vha::{ParameterSet, VhaProblem};

/// Angles realizing `prod_k exp(-i tau/n H_0) exp(-i (tau/n)(k/n) V)`.
pub fn adiabatic_parameters(steps: usize, tau: f64) -> ParameterSet {
    let n = steps as f64;
    ParameterSet::from_rows(
        (1..=steps)
            .map(|k| {
                let mut row = [-tau / n; NUM_GROUPS];
                row[NUM_GROUPS - 1] = -(tau / n) * (k as f64 / n);
                row
            })
            .collect(),
    )
}

/// Evenly spaced evolution times in units of `1/t`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for TauGrid {
    fn default() -> Self {
        Self { min: 0.25, max: 10.0, points: 40 }
    }
}

impl TauGrid {
    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return domain("tau grid needs at least one point");
        }
        if !(self.min > 0.0 && self.max >= self.min && self.max.is_finite()) {
            return domain(format!("invalid tau range [{}, {}]", self.min, self.max));
        }
        Ok(())
    }

    /// Grid values in units of `1/t`.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.min + step * i as f64).collect()
    }
}

/// Best evolution time on the grid for one noise realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauOptimum {
    /// In absolute time units (`grid value / t`).
    pub tau: f64,
    pub fidelity: f64,
    pub energy: f64,
}

/// Scans `tau = 0` and then `grid`, returning the evolution time with the
/// highest final state fidelity; the earliest candidate wins ties.
pub fn optimize_tau(problem: &VhaProblem<'_>, steps: usize, noise: &NoiseTable, grid: &TauGrid) -> Result<TauOptimum> {
    grid.validate()?;
    let t = problem.lattice().t;
    let mut best: Option<TauOptimum> = None;
    for value in std::iter::once(0.0).chain(grid.values()) {
        let tau = value / t;
        let (energy, fidelity) = problem.evaluate(&adiabatic_parameters(steps, tau), noise)?;
        if best.is_none_or(|b| fidelity > b.fidelity) {
            best = Some(TauOptimum { tau, fidelity, energy });
        }
    }
    Ok(best.expect("grid is non-empty"))
}

/// Fidelity curve over `grid` for one noise table, `(tau, fidelity)` pairs.
pub fn tau_scan(
    problem: &VhaProblem<'_>,
    steps: usize,
    noise: &NoiseTable,
    grid: &TauGrid,
) -> Result<Vec<(f64, f64)>> {
    grid.validate()?;
    let t = problem.lattice().t;
    grid.values()
        .into_iter()
        .map(|v| Ok((v / t, problem.fidelity(&adiabatic_parameters(steps, v / t), noise)?)))
        .collect()
}
