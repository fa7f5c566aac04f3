//! Second-quantized oracle: the Hamiltonian rebuilt from fermionic ladder
//! operators acting on occupation-number states, with the anticommutation
//! sign counted explicitly.

use std::collections::BTreeMap;

use hubbard_vha::basis::Basis;
use hubbard_vha::hamiltonian::{build_sub_hamiltonian, hamiltonian};
use hubbard_vha::lattice::{enumerate_edges, term_group, GroupTerms, LatticeSpec, Spin};

/// `c_mode` on an occupation bitstring: `None` if the mode is empty.
fn annihilate(state: usize, mode: usize) -> Option<(usize, f64)> {
    if state >> mode & 1 == 0 {
        return None;
    }
    let below = (state & ((1 << mode) - 1)).count_ones();
    Some((state ^ (1 << mode), if below.is_multiple_of(2) { 1.0 } else { -1.0 }))
}

fn create(state: usize, mode: usize) -> Option<(usize, f64)> {
    if state >> mode & 1 == 1 {
        return None;
    }
    let below = (state & ((1 << mode) - 1)).count_ones();
    Some((state | (1 << mode), if below.is_multiple_of(2) { 1.0 } else { -1.0 }))
}

/// `<out| c_i^dag c_j |state>` as a sparse column.
fn hop(state: usize, i: usize, j: usize) -> Option<(usize, f64)> {
    let (s1, a) = annihilate(state, j)?;
    let (s2, b) = create(s1, i)?;
    Some((s2, a * b))
}

fn mode(lattice: &LatticeSpec, site: usize, spin: Spin) -> usize {
    // spin-up orbitals occupy the low qubits, row-major within each spin block
    match spin {
        Spin::Up => site,
        Spin::Down => lattice.sites() + site,
    }
}

fn oracle(lattice: &LatticeSpec, hops: &[(usize, usize)], sites: &[usize]) -> BTreeMap<(usize, usize), f64> {
    let dim = 1usize << lattice.qubits();
    let mut m = BTreeMap::new();
    for s in 0..dim {
        for &(p, q) in hops {
            for spin in [Spin::Up, Spin::Down] {
                let (i, j) = (mode(lattice, p, spin), mode(lattice, q, spin));
                for (a, b) in [(i, j), (j, i)] {
                    if let Some((out, sign)) = hop(s, a, b) {
                        *m.entry((out, s)).or_insert(0.0) -= lattice.t * sign;
                    }
                }
            }
        }
        for &site in sites {
            let up = s >> mode(lattice, site, Spin::Up) & 1;
            let dn = s >> mode(lattice, site, Spin::Down) & 1;
            if up & dn == 1 {
                *m.entry((s, s)).or_insert(0.0) += lattice.u;
            }
        }
    }
    m.retain(|_, v| *v != 0.0);
    m
}

fn assert_matches(lattice: &LatticeSpec, h: &hubbard_vha::sparse::SparseOperator, o: &BTreeMap<(usize, usize), f64>) {
    let mut nnz = 0;
    for i in 0..h.dim() {
        for (j, v) in h.row(i) {
            let want = o.get(&(i, j)).copied().unwrap_or(0.0);
            assert!((v - want).abs() < 1e-14, "{} entry ({i},{j}): {v} vs {want}", lattice.label());
            nnz += 1;
        }
    }
    assert_eq!(nnz, o.len(), "{}: missing entries", lattice.label());
}

#[test]
fn full_hamiltonian_matches_ladder_operator_oracle() {
    for (c, r) in [(2, 2), (3, 2), (2, 3)] {
        let lattice = LatticeSpec::new(c, r, 1.3, 2.7).unwrap();
        let hops: Vec<(usize, usize)> = enumerate_edges(&lattice)
            .iter()
            .map(|e| (e.j, e.jprime))
            .collect();
        let sites: Vec<usize> = (0..lattice.sites()).collect();
        let h = hamiltonian(&lattice, &Basis::full(&lattice).unwrap());
        assert_matches(&lattice, &h, &oracle(&lattice, &hops, &sites));
    }
}

#[test]
fn each_group_matches_ladder_operator_oracle() {
    let lattice = LatticeSpec::new(3, 2, 0.8, 3.1).unwrap();
    for alpha in 1..=5 {
        let group = term_group(&lattice, alpha).unwrap();
        let (hops, sites) = match &group.terms {
            GroupTerms::Hops(edges) => (
                edges.iter().map(|e| (e.j, e.jprime)).collect(),
                vec![],
            ),
            GroupTerms::Sites(s) => (vec![], s.clone()),
        };
        let h = build_sub_hamiltonian(&lattice, alpha).unwrap();
        assert_matches(&lattice, &h, &oracle(&lattice, &hops, &sites));
    }
}

type Entries = Vec<((usize, usize), f64)>;

fn apply(op: &Entries, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for &((i, j), v) in op {
        y[i] += v * x[j];
    }
    y
}

/// Largest `|[a, b] x|` entry over a few pseudo-random vectors.
fn commutator_size(a: &Entries, b: &Entries, dim: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for seed in 1..4u64 {
        let x: Vec<f64> = (0..dim as u64)
            .map(|i| ((i * 2654435761 + seed * 97) % 1000) as f64 / 1000.0 - 0.5)
            .collect();
        let ab = apply(a, &apply(b, &x));
        let ba = apply(b, &apply(a, &x));
        worst = ab.iter().zip(&ba).fold(worst, |w, (p, q)| w.max((p - q).abs()));
    }
    worst
}

fn entries(lattice: &LatticeSpec, hops: &[(usize, usize)], sites: &[usize]) -> Entries {
    oracle(lattice, hops, sites).into_iter().collect()
}

#[test]
fn terms_within_a_group_commute() {
    let lattice = LatticeSpec::new(3, 2, 1.0, 2.0).unwrap();
    let dim = 1 << lattice.qubits();
    for alpha in 1..=5 {
        let group = term_group(&lattice, alpha).unwrap();
        let terms: Vec<Entries> = match &group.terms {
            GroupTerms::Hops(edges) => edges.iter().map(|e| entries(&lattice, &[(e.j, e.jprime)], &[])).collect(),
            GroupTerms::Sites(s) => s.iter().map(|&l| entries(&lattice, &[], &[l])).collect(),
        };
        for a in 0..terms.len() {
            for b in a + 1..terms.len() {
                let c = commutator_size(&terms[a], &terms[b], dim);
                assert!(c < 1e-12, "group {alpha}: terms {a},{b} do not commute ({c})");
            }
        }
    }
}

#[test]
fn hops_across_groups_can_fail_to_commute() {
    let lattice = LatticeSpec::with_default_coupling(2, 2).unwrap();
    let h1 = entries(&lattice, &[(0, 1)], &[]);
    let h3 = entries(&lattice, &[(0, 2)], &[]);
    assert!(commutator_size(&h1, &h3, 16 * 16) > 0.01);
}
