use std::process::Command;

use hubbard_vha::experiments::{ground_truth_report, run_table, write_csv_to, ExperimentConfig, Method};
use hubbard_vha::lattice::LatticeSpec;
use hubbard_vha::noise::{fidelity_to_sigma, NoiseTable};

fn small(method: Method) -> ExperimentConfig {
    ExperimentConfig {
        method,
        n: vec![1, 2],
        fidelity: vec![1.0, 0.99],
        runs: Some(3),
        seed: 40,
        tau_points: 8,
        ..Default::default()
    }
}

fn csv_bytes(config: &ExperimentConfig) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv_to(&run_table(config).unwrap(), &mut out).unwrap();
    out
}

#[test]
fn csv_is_byte_identical_across_runs() {
    for method in [Method::Vha, Method::Adiabatic, Method::FrozenTransfer] {
        let config = small(method);
        let a = csv_bytes(&config);
        assert_eq!(a, csv_bytes(&config), "{}", method.name());
        let text = String::from_utf8(a).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * (1 + 3));
        let header = text.lines().next().unwrap();
        assert_eq!(header.contains(",tau,"), method == Method::Adiabatic);
    }
}

#[test]
fn summary_is_the_mean_of_rows() {
    let result = run_table(&small(Method::Adiabatic)).unwrap();
    for cell in &result.cells {
        let rows: Vec<f64> = result
            .records
            .iter()
            .filter(|r| r.n == cell.n && r.fbar == cell.fbar)
            .map(|r| r.fidelity)
            .collect();
        assert_eq!(rows.len(), cell.runs);
        let mean = 100.0 * rows.iter().sum::<f64>() / rows.len() as f64;
        assert!((mean - cell.mean_fidelity).abs() < 1e-12);
    }
    let seeds: Vec<u64> = result.records.iter().filter(|r| r.fbar < 1.0 && r.n == 1).map(|r| r.seed).collect();
    assert_eq!(seeds, vec![40, 41, 42]);
}

#[test]
fn vha_and_frozen_transfer_share_noise_realizations() {
    let sigma = fidelity_to_sigma(0.99).unwrap();
    let vha = run_table(&small(Method::Vha)).unwrap();
    let frozen = run_table(&small(Method::FrozenTransfer)).unwrap();
    for (a, b) in vha.records.iter().zip(&frozen.records) {
        assert_eq!((a.n, a.fbar, a.seed), (b.n, b.fbar, b.seed));
    }
    // both draw from the same table for a given seed and circuit length
    assert_eq!(NoiseTable::sample(40, sigma, 41).unwrap(), NoiseTable::sample(40, sigma, 41).unwrap());
    // a noiseless frozen transfer is the noiseless VHA
    let (v, f) = (&vha.cells[0], &frozen.cells[0]);
    assert_eq!(v.fbar, 1.0);
    assert!((v.mean_fidelity - f.mean_fidelity).abs() < 1e-9);
}

#[test]
fn report_for_noninteracting_plaquette() {
    let r = ground_truth_report(&LatticeSpec::new(2, 2, 1.0, 0.0).unwrap()).unwrap();
    assert!((r.eg + 4.0).abs() < 1e-10);
    assert_eq!(r.gates_per_step, 20);
    assert_eq!(r.hilbert_dim, 256);
}

#[test]
fn infeasible_lattice_is_refused() {
    let config = ExperimentConfig { lattice: "4x3".into(), ..Default::default() };
    assert!(run_table(&config).is_err());
}

#[test]
fn cli_ground_truth_and_table() {
    let exe = env!("CARGO_BIN_EXE_hubbard-vha");
    let out = Command::new(exe).args(["ground-truth", "--lattice", "2x2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("98.87 %"), "{text}");
    assert!(text.contains("gates per step     20"), "{text}");

    let dir = std::env::temp_dir().join(format!("hubbard-vha-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("exp.toml");
    std::fs::write(&config, "lattice = \"2x2\"\nmethod = \"adiabatic\"\nn = [2]\nfidelity = [0.999]\nruns = 2\ntau_points = 5\n").unwrap();
    let csv = dir.join("out.csv");
    let out = Command::new(exe)
        .args(["table", "--config", config.to_str().unwrap(), "--seed", "9", "--out", csv.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 3);
    assert!(rows.lines().nth(1).unwrap().starts_with("adiabatic,2x2,2,0.999,9,"));

    let bad = Command::new(exe).args(["vha", "--lattice", "4x3"]).output().unwrap();
    assert!(!bad.status.success());
    std::fs::remove_dir_all(&dir).ok();
}
