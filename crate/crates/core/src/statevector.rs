//! Complex amplitude vectors and the in-place two-qubit gate kernels.
//!
//! In the full Fock space, bit `b` of an amplitude index is the occupation
//! of qubit `b`. The kernels walk the `2^(Q-2)` index groups that share all
//! bits except the two targets, so each gate touches each amplitude at most
//! once with fixed strides.

use num_complex::Complex64;

use crate::circuit::{Circuit, GateKind};
use crate::error::{domain, Result};
use crate::noise::NoiseTable;
use crate::sparse::SparseOperator;

/// Which two-qubit occupation pattern a diagonal phase gate acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseMode {
    /// `n_a n_b`
    BothOccupied,
    /// `n_a (1 - n_b)`
    FirstOccupiedSecondEmpty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self { amplitudes: values.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    /// `|index>` in a space of dimension `dim`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        self.amplitudes.iter_mut().for_each(|a| *a /= n);
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "state dimensions differ");
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|`, not squared.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    /// `<psi|H|psi>` for a Hamiltonian expressed in the same basis.
    ///
    /// Panics if the imaginary part exceeds `1e-10 * max(1, |value|)`, which
    /// would mean `H` is not Hermitian.
    pub fn expectation(&self, h: &SparseOperator) -> f64 {
        assert_eq!(self.dim(), h.dim(), "operator and state dimensions differ");
        let z = h.quadratic_form(&self.amplitudes);
        assert!(
            z.im.abs() <= 1e-10 * z.re.abs().max(1.0),
            "expectation value has imaginary part {:e}",
            z.im
        );
        z.re
    }

    /// `exp(-i phi (s+_a s-_b + s+_b s-_a))` on the full Fock space.
    pub fn apply_t_gate(&mut self, a: usize, b: usize, phi: f64) {
        assert_ne!(a, b, "t gate needs two distinct qubits");
        let (c, s) = (phi.cos(), phi.sin());
        let (ba, bb) = (1usize << a, 1usize << b);
        for base in zero_pair_indices(self.dim(), a, b) {
            let (i, j) = (base | ba, base | bb);
            rotate(&mut self.amplitudes, i, j, c, s);
        }
    }

    /// Multiplies by `e^{i phi}` every amplitude whose `(a, b)` occupations
    /// match `mode`, on the full Fock space.
    pub fn apply_phase_pair_gate(&mut self, a: usize, b: usize, phi: f64, mode: PhaseMode) {
        assert_ne!(a, b, "phase gate needs two distinct qubits");
        let phase = Complex64::from_polar(1.0, phi);
        let set = match mode {
            PhaseMode::BothOccupied => (1usize << a) | (1usize << b),
            PhaseMode::FirstOccupiedSecondEmpty => 1usize << a,
        };
        for base in zero_pair_indices(self.dim(), a, b) {
            self.amplitudes[base | set] *= phase;
        }
    }
}

/// The pair rotation `[c, -i s; -i s, c]` on amplitudes `(i, j)`.
#[inline(always)]
pub(crate) fn rotate(amps: &mut [Complex64], i: usize, j: usize, c: f64, s: f64) {
    let (x, y) = (amps[i], amps[j]);
    amps[i] = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
    amps[j] = Complex64::new(c * y.re + s * x.im, c * y.im - s * x.re);
}

/// Indices in `0..dim` with bits `a` and `b` both clear.
fn zero_pair_indices(dim: usize, a: usize, b: usize) -> impl Iterator<Item = usize> {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    assert!(dim >= (1 << (hi + 1)), "qubit {hi} outside a space of dimension {dim}");
    let lo_mask = (1usize << lo) - 1;
    let mid_mask = ((1usize << (hi - 1)) - 1) & !lo_mask;
    (0..dim >> 2).map(move |k| {
        let low = k & lo_mask;
        let mid = (k & mid_mask) << 1;
        let high = (k & !((1usize << (hi - 1)) - 1)) << 2;
        high | mid | low
    })
}

/// Applies `circuit` to a full-Fock-space `state`, adding `noise.deltas[g]`
/// to the angle of gate `g`.
pub fn run_circuit(state: &mut StateVector, circuit: &Circuit, noise: &NoiseTable) -> Result<()> {
    if noise.len() != circuit.len() {
        return domain(format!("noise table has {} entries for {} gates", noise.len(), circuit.len()));
    }
    for (gate, delta) in circuit.gates().iter().zip(noise.deltas()) {
        let (a, b) = gate.qubits;
        let phi = gate.angle + delta;
        match gate.kind {
            GateKind::TGate => state.apply_t_gate(a, b, phi),
            GateKind::OnsiteGate => state.apply_phase_pair_gate(a, b, phi, PhaseMode::BothOccupied),
            GateKind::CZGate => state.apply_phase_pair_gate(a, b, phi, PhaseMode::FirstOccupiedSecondEmpty),
        }
    }
    Ok(())
}
