//! Jordan-Wigner image of the Hubbard Hamiltonian, its five commuting
//! pieces, and exact ground-state data.
//!
//! A hop `c†_p c_q + h.c.` between qubits `p < q` picks up the fermionic sign
//! `(-1)^(occupied qubits strictly between p and q)`. The on-site term is the
//! diagonal `U n_j n_{j+M}`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::basis::{check_qubit_cap, Basis, Sector, DEFAULT_QUBIT_CAP};
use crate::eigen::{self, EigenOptions};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_edges, term_group, GroupTerms, LatticeSpec, Spin};
use crate::sparse::SparseOperator;
use crate::statevector::StateVector;

/// Pushes the matrix elements of `coeff * (c†_p c_q + c†_q c_p)` in row `s`.
#[inline]
fn push_hop(basis: &Basis, s: usize, p: usize, q: usize, coeff: f64, out: &mut Vec<(usize, f64)>) {
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    if ((s >> lo) & 1) == ((s >> hi) & 1) {
        return;
    }
    let between = (s >> (lo + 1)) & ((1usize << (hi - lo - 1)) - 1);
    let sign = if between.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    let target = s ^ (1 << lo) ^ (1 << hi);
    if let Some(j) = basis.index_of(target) {
        out.push((j, coeff * sign));
    }
}

#[inline]
fn both_occupied(s: usize, a: usize, b: usize) -> bool {
    (s >> a) & 1 == 1 && (s >> b) & 1 == 1
}

/// Operator of term group `alpha` (1..=5) on `basis`: `-t` per hop for both
/// spins, `+U` per doubly occupied site.
pub fn group_operator(lattice: &LatticeSpec, alpha: usize, basis: &Basis) -> Result<SparseOperator> {
    let group = term_group(lattice, alpha)?;
    let m = lattice.sites();
    Ok(match group.terms {
        GroupTerms::Hops(edges) => SparseOperator::from_rows(basis.dim(), |i, out| {
            let s = basis.state(i);
            for e in &edges {
                for offset in [0, m] {
                    push_hop(basis, s, e.j + offset, e.jprime + offset, -lattice.t, out);
                }
            }
        }),
        GroupTerms::Sites(sites) => SparseOperator::from_rows(basis.dim(), |i, out| {
            let s = basis.state(i);
            let doubles = sites.iter().filter(|&&j| both_occupied(s, j, j + m)).count();
            out.push((i, lattice.u * doubles as f64));
        }),
    })
}

/// Full-space operator of term group `alpha`.
pub fn build_sub_hamiltonian(lattice: &LatticeSpec, alpha: usize) -> Result<SparseOperator> {
    group_operator(lattice, alpha, &Basis::full(lattice)?)
}

/// Hubbard Hamiltonian on `basis`, assembled directly from the bond list.
pub fn hamiltonian(lattice: &LatticeSpec, basis: &Basis) -> SparseOperator {
    let m = lattice.sites();
    let edges = enumerate_edges(lattice);
    SparseOperator::from_rows(basis.dim(), |i, out| {
        let s = basis.state(i);
        for e in &edges {
            for offset in [0, m] {
                push_hop(basis, s, e.j + offset, e.jprime + offset, -lattice.t, out);
            }
        }
        let doubles = (0..m).filter(|&j| both_occupied(s, j, j + m)).count();
        out.push((i, lattice.u * doubles as f64));
    })
}

/// Total double occupancy `sum_j n_{j,up} n_{j,down}`.
pub fn double_occupancy(lattice: &LatticeSpec, basis: &Basis) -> SparseOperator {
    let m = lattice.sites();
    let diag: Vec<f64> = (0..basis.dim())
        .map(|i| {
            let s = basis.state(i);
            (0..m).filter(|&j| both_occupied(s, j, j + m)).count() as f64
        })
        .collect();
    SparseOperator::diagonal(&diag)
}

/// Particle number of one spin species.
pub fn number_operator(lattice: &LatticeSpec, basis: &Basis, spin: Spin) -> SparseOperator {
    let m = lattice.sites();
    let shift = match spin {
        Spin::Up => 0,
        Spin::Down => m,
    };
    let mask = ((1usize << m) - 1) << shift;
    let diag: Vec<f64> = (0..basis.dim()).map(|i| (basis.state(i) & mask).count_ones() as f64).collect();
    SparseOperator::diagonal(&diag)
}

/// Sorted single-particle energies of the hopping matrix on the lattice.
pub fn single_particle_energies(lattice: &LatticeSpec) -> Vec<f64> {
    let m = lattice.sites();
    let mut k = DMatrix::<f64>::zeros(m, m);
    for e in enumerate_edges(lattice) {
        k[(e.j, e.jprime)] = -lattice.t;
        k[(e.jprime, e.j)] = -lattice.t;
    }
    let mut values: Vec<f64> = SymmetricEigen::new(k).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Lowest eigenvalue and normalized eigenvector of `h`.
pub fn ground_state(h: &SparseOperator, opts: &EigenOptions) -> Result<(f64, StateVector)> {
    let pair = eigen::lowest(h, opts)?;
    Ok((pair.value, StateVector::from_real(&pair.vector)))
}

#[derive(Debug, Clone, Copy)]
pub struct GroundTruthOptions {
    pub eigen: EigenOptions,
    /// Strength of the on-site interaction that selects the reference state
    /// among the degenerate non-interacting ground states. `None` means
    /// `U / 100` (or `t / 100` when `U = 0`).
    pub reference_epsilon: Option<f64>,
    pub qubit_cap: usize,
}

impl Default for GroundTruthOptions {
    fn default() -> Self {
        Self { eigen: EigenOptions::default(), reference_epsilon: None, qubit_cap: DEFAULT_QUBIT_CAP }
    }
}

impl GroundTruthOptions {
    pub fn epsilon_for(&self, lattice: &LatticeSpec) -> f64 {
        self.reference_epsilon.unwrap_or(if lattice.u != 0.0 {
            0.01 * lattice.u.abs()
        } else {
            0.01 * lattice.t
        })
    }
}

/// Exact reference data for one lattice, expressed in the particle-number
/// sector that contains the interacting ground state.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub lattice: LatticeSpec,
    pub basis: Basis,
    /// Hamiltonian restricted to `basis`.
    pub hamiltonian: SparseOperator,
    /// Reference state `|psi_0>` the circuits start from.
    pub psi0: StateVector,
    /// Interacting ground state `|psi_g>`.
    pub psig: StateVector,
    pub eg: f64,
    pub e0_expectation: f64,
    pub epsilon: f64,
}

impl GroundTruth {
    pub fn compute(lattice: &LatticeSpec) -> Result<Self> {
        Self::compute_with(lattice, &GroundTruthOptions::default())
    }

    pub fn compute_with(lattice: &LatticeSpec, opts: &GroundTruthOptions) -> Result<Self> {
        check_qubit_cap(lattice, opts.qubit_cap)?;
        let (sector, eg, psig) = global_ground_state(lattice, &opts.eigen)?;
        let basis = Basis::sector(lattice, sector)?;
        let hamiltonian = hamiltonian(lattice, &basis);
        let epsilon = opts.epsilon_for(lattice);
        let psi0 = noninteracting_reference_state(lattice, sector, epsilon, &opts.eigen)?;
        let e0_expectation = psi0.expectation(&hamiltonian);
        Ok(Self { lattice: *lattice, basis, hamiltonian, psi0, psig, eg, e0_expectation, epsilon })
    }

    pub fn sector(&self) -> Sector {
        self.basis.sector_label().expect("ground truth lives in a sector")
    }

    /// `|<psi_g|psi_0>|`.
    pub fn initial_overlap(&self) -> f64 {
        self.psig.fidelity(&self.psi0)
    }
}

/// Ground state of the full Fock space, searched sector by sector.
///
/// Sectors are visited in order of the non-interacting lower bound
/// `E_0(N_up) + E_0(N_down) + min(0, U) min(N_up, N_down)` and the scan stops
/// once the bound exceeds the best energy found. Ties within `1e-9 t` go to
/// the smaller total particle number, then to the larger `N_up`.
pub fn global_ground_state(lattice: &LatticeSpec, opts: &EigenOptions) -> Result<(Sector, f64, StateVector)> {
    let m = lattice.sites();
    let eps = single_particle_energies(lattice);
    let filled = |k: usize| eps[..k].iter().sum::<f64>();
    let mut candidates: Vec<(f64, Sector)> = Vec::with_capacity((m + 1) * (m + 1));
    for up in 0..=m {
        for down in 0..=m {
            let bound = filled(up) + filled(down) + lattice.u.min(0.0) * up.min(down) as f64;
            candidates.push((bound, Sector { up, down }));
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tol = 1e-9 * lattice.t;
    let rank = |s: &Sector| (s.up + s.down, std::cmp::Reverse(s.up));
    let mut best: Option<(Sector, f64, StateVector)> = None;
    for (bound, sector) in candidates {
        if let Some((_, e, _)) = &best {
            if bound > e + tol {
                break;
            }
        }
        let basis = Basis::sector(lattice, sector)?;
        let h = hamiltonian(lattice, &basis);
        let (e, psi) = ground_state(&h, opts)?;
        let better = match &best {
            None => true,
            Some((bs, be, _)) => e < be - tol || ((e - be).abs() <= tol && rank(&sector) < rank(bs)),
        };
        if better {
            best = Some((sector, e, psi));
        }
    }
    best.ok_or_else(|| Error::Domain("no sector evaluated".into()))
}

/// Ground state of `H(U = 0) + epsilon * sum_j n_{j,up} n_{j,down}` in `sector`.
///
/// A weak on-site term lifts the degeneracy of the non-interacting ground
/// space towards the branch that connects to the interacting ground state.
/// Errors if the perturbed ground state is still degenerate.
pub fn noninteracting_reference_state(
    lattice: &LatticeSpec,
    sector: Sector,
    epsilon: f64,
    opts: &EigenOptions,
) -> Result<StateVector> {
    let basis = Basis::sector(lattice, sector)?;
    let h = hamiltonian(&lattice.with_u(0.0), &basis);
    let h = h.add_scaled(&double_occupancy(lattice, &basis), epsilon)?;
    let pair = eigen::lowest(&h, opts)?;
    if let Some(next) = pair.next_value {
        if next - pair.value < 1e-9 * lattice.t {
            return Err(Error::Degeneracy { found: 2, cap: 1 });
        }
    }
    Ok(StateVector::from_real(&pair.vector))
}
