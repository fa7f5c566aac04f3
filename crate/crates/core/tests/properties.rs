//! Invariants of circuit simulation and noise sampling.

use hubbard_vha::basis::{Basis, Sector};
use hubbard_vha::circuit::compile_vha;
use hubbard_vha::engine::{embed, SectorEngine};
use hubbard_vha::hamiltonian::{number_operator, GroundTruth};
use hubbard_vha::lattice::{LatticeSpec, Spin};
use hubbard_vha::noise::{fidelity_to_sigma, NoiseTable};
use hubbard_vha::statevector::run_circuit;
use hubbard_vha::vha::{ParameterSet, VhaProblem};
use hubbard_vha::StateVector;
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

fn truth_2x2() -> &'static GroundTruth {
    static T: OnceLock<GroundTruth> = OnceLock::new();
    T.get_or_init(|| GroundTruth::compute(&LatticeSpec::with_default_coupling(2, 2).unwrap()).unwrap())
}

fn params(steps: usize) -> impl Strategy<Value = ParameterSet> {
    prop::collection::vec(-3.0..3.0f64, steps * 5).prop_map(move |v| ParameterSet::from_flat(steps, &v).unwrap())
}

fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim).prop_map(|v| {
        let mut s = StateVector::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect());
        s.normalize();
        s
    })
}

/// Probability weight of each `(N_up, N_down)` sector.
fn sector_weights(lattice: &LatticeSpec, s: &StateVector) -> Vec<f64> {
    let full = Basis::full(lattice).unwrap();
    let m = lattice.sites();
    let mut w = vec![0.0; (m + 1) * (m + 1)];
    for (i, a) in s.amplitudes().iter().enumerate() {
        let Sector { up, down } = full.occupation(i);
        w[up * (m + 1) + down] += a.norm_sqr();
    }
    w
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn circuits_preserve_norm_and_sector_weights(
        theta in params(2),
        psi in state(1 << 8),
        seed in any::<u64>(),
    ) {
        let lattice = LatticeSpec::new(2, 2, 1.0, 2.0).unwrap();
        let circuit = compile_vha(&lattice, &theta).unwrap();
        let noise = NoiseTable::sample(circuit.len(), 0.1, seed).unwrap();
        let mut out = psi.clone();
        run_circuit(&mut out, &circuit, &noise).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        for (a, b) in sector_weights(&lattice, &psi).iter().zip(sector_weights(&lattice, &out)) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let full = Basis::full(&lattice).unwrap();
        for spin in [Spin::Up, Spin::Down] {
            let n = number_operator(&lattice, &full, spin);
            prop_assert!((psi.expectation(&n) - out.expectation(&n)).abs() < 1e-11);
        }
    }

    #[test]
    fn circuits_are_linear(
        theta in params(1),
        x in state(1 << 8),
        y in state(1 << 8),
        a in (-2.0..2.0f64, -2.0..2.0f64),
    ) {
        let lattice = LatticeSpec::new(2, 2, 1.0, 2.0).unwrap();
        let circuit = compile_vha(&lattice, &theta).unwrap();
        let noise = NoiseTable::zeros(circuit.len());
        let a = Complex64::new(a.0, a.1);
        let combo = StateVector::new(x.amplitudes().iter().zip(y.amplitudes()).map(|(p, q)| a * p + q).collect());
        let (mut ux, mut uy, mut uc) = (x.clone(), y.clone(), combo);
        for s in [&mut ux, &mut uy, &mut uc] {
            run_circuit(s, &circuit, &noise).unwrap();
        }
        for ((p, q), r) in ux.amplitudes().iter().zip(uy.amplitudes()).zip(uc.amplitudes()) {
            prop_assert!((a * p + q - r).norm() < 1e-12);
        }
    }

    #[test]
    fn energy_respects_variational_bound(theta in params(3)) {
        let truth = truth_2x2();
        let problem = VhaProblem::new(truth).unwrap();
        let e = problem.energy(&theta, &NoiseTable::zeros(problem.circuit_len(3))).unwrap();
        prop_assert!(e >= truth.eg - 1e-10, "{e} < {}", truth.eg);
    }

    #[test]
    fn noisy_energy_respects_variational_bound(theta in params(2), seed in any::<u64>()) {
        let truth = truth_2x2();
        let problem = VhaProblem::new(truth).unwrap();
        let noise = NoiseTable::sample(problem.circuit_len(2), 0.2, seed).unwrap();
        let (e, f) = problem.evaluate(&theta, &noise).unwrap();
        prop_assert!(e >= truth.eg - 1e-10);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn sector_engine_matches_full_space(theta in params(2), seed in any::<u64>()) {
        let lattice = LatticeSpec::new(3, 2, 1.0, 2.0).unwrap();
        let basis = Basis::sector(&lattice, Sector { up: 2, down: 3 }).unwrap();
        let mut engine = SectorEngine::new(&lattice, basis.clone()).unwrap();
        let circuit = compile_vha(&lattice, &theta).unwrap();
        engine.prepare(&circuit);
        let noise = NoiseTable::sample(circuit.len(), 0.05, seed).unwrap();
        let mut psi = StateVector::from_real(&(0..basis.dim()).map(|i| (i as f64 * 0.37).sin()).collect::<Vec<_>>());
        psi.normalize();
        let mut full = embed(&basis, &psi);
        engine.run(&circuit, &noise, &mut psi).unwrap();
        run_circuit(&mut full, &circuit, &noise).unwrap();
        let lifted = embed(&basis, &psi);
        for (a, b) in lifted.amplitudes().iter().zip(full.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn norm_drift_after_810_gates_on_3x3() {
    let lattice = LatticeSpec::with_default_coupling(3, 3).unwrap();
    let theta = ParameterSet::from_flat(10, &(0..50).map(|i| (i as f64 * 1.7).sin() * 2.0).collect::<Vec<_>>()).unwrap();
    let circuit = compile_vha(&lattice, &theta).unwrap();
    assert_eq!(circuit.len(), 810);
    let noise = NoiseTable::sample(circuit.len(), fidelity_to_sigma(0.999).unwrap(), 3).unwrap();

    let basis = Basis::sector(&lattice, Sector { up: 4, down: 5 }).unwrap();
    let mut engine = SectorEngine::new(&lattice, basis.clone()).unwrap();
    engine.prepare(&circuit);
    let mut psi = StateVector::from_real(&(0..basis.dim()).map(|i| (i as f64).cos()).collect::<Vec<_>>());
    psi.normalize();
    engine.run(&circuit, &noise, &mut psi).unwrap();
    assert!((psi.norm() - 1.0).abs() < 1e-9, "sector drift {}", psi.norm() - 1.0);

    let mut full = StateVector::from_real(&(0..1usize << 18).map(|i| ((i % 977) as f64).sin()).collect::<Vec<_>>());
    full.normalize();
    run_circuit(&mut full, &circuit, &noise).unwrap();
    assert!((full.norm() - 1.0).abs() < 1e-9, "full-space drift {}", full.norm() - 1.0);
}

#[test]
fn mean_gate_fidelity_matches_target() {
    for fbar in [0.9999, 0.999, 0.995, 0.99] {
        let sigma = fidelity_to_sigma(fbar).unwrap();
        let table = NoiseTable::sample(1_000_000, sigma, 42).unwrap();
        let mean = table.deltas().iter().map(|d| d.cos()).sum::<f64>() / table.len() as f64;
        assert!((mean - fbar).abs() < 2e-4, "F = {fbar}: E[cos] = {mean}");
    }
}

#[test]
fn noise_tables_are_seed_deterministic() {
    let a = NoiseTable::sample(500, 0.1, 77).unwrap();
    let b = NoiseTable::sample(500, 0.1, 77).unwrap();
    let c = NoiseTable::sample(500, 0.1, 78).unwrap();
    assert_eq!(a.deltas(), b.deltas());
    assert_ne!(a.deltas(), c.deltas());
}
