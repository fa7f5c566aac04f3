//! Quasi-static over-rotation errors.
//!
//! A faulty gate `exp(i (phi + d) A)` carries an additive over-rotation `d`
//! drawn once per gate instance and kept for a whole optimization run. The
//! spread follows from the averaged minimal gate fidelity: with
//! `F_min = cos d` and `d ~ N(0, sigma^2)`, `E[cos d] = 1 - sigma^2 / 2` to
//! second order, so `sigma = sqrt(2 (1 - F))`.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelitySpec {
    pub fbar_min: f64,
    pub sigma: f64,
}

impl FidelitySpec {
    pub fn new(fbar_min: f64) -> Result<Self> {
        Ok(Self { fbar_min, sigma: fidelity_to_sigma(fbar_min)? })
    }

    pub fn is_noiseless(&self) -> bool {
        self.sigma == 0.0
    }
}

/// `sqrt(2 (1 - fbar_min))` for `0 < fbar_min <= 1`.
pub fn fidelity_to_sigma(fbar_min: f64) -> Result<f64> {
    if !(fbar_min > 0.0 && fbar_min <= 1.0) {
        return domain(format!("averaged gate fidelity must lie in (0, 1], got {fbar_min}"));
    }
    Ok((2.0 * (1.0 - fbar_min)).sqrt())
}

/// Frozen over-rotations, one per gate instance.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseTable {
    deltas: Vec<f64>,
    pub seed: u64,
    pub sigma: f64,
}

impl NoiseTable {
    pub fn zeros(len: usize) -> Self {
        Self { deltas: vec![0.0; len], seed: 0, sigma: 0.0 }
    }

    /// Draws `len` independent `N(0, sigma^2)` values from a ChaCha20 stream
    /// keyed by `seed`.
    pub fn sample(len: usize, sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return domain(format!("standard deviation must be finite and non-negative, got {sigma}"));
        }
        if sigma == 0.0 {
            return Ok(Self { deltas: vec![0.0; len], seed, sigma });
        }
        let normal = Normal::new(0.0, sigma).expect("validated sigma");
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let deltas = (0..len).map(|_| normal.sample(&mut rng)).collect();
        Ok(Self { deltas, seed, sigma })
    }

    /// First `len` entries; a table drawn for a longer circuit restricted to
    /// a prefix sees the same values.
    pub fn truncated(&self, len: usize) -> Self {
        Self { deltas: self.deltas[..len.min(self.deltas.len())].to_vec(), ..*self }
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }
}

/// One over-rotation per gate of `circuit`, deterministic in `seed`.
pub fn sample_noise(circuit: &crate::circuit::Circuit, spec: &FidelitySpec, seed: u64) -> NoiseTable {
    NoiseTable::sample(circuit.len(), spec.sigma, seed).expect("sigma from a validated FidelitySpec")
}
