//! Gate compilation of `exp(i theta H_alpha)`.
//!
//! * on-site terms become one diagonal gate `exp(i theta U n_j n_{j+M})`;
//! * a hop between qubits `p < q` becomes a t gate
//!   `exp(-i theta t (s+_p s-_q + s+_q s-_p))`, sandwiched between CZ-type gates
//!   `exp(i pi n_l (1 - n_p))` for every qubit `p < l < q`. Each CZ flips the
//!   sign of the hop when `l` is occupied, which reproduces the
//!   Jordan-Wigner string.
//!
//! The terms of one group commute, so the compiled product equals the group
//! exponential exactly.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::Range;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::basis::{Basis, Sector};
use crate::error::{domain, Result};
use crate::hamiltonian::group_operator;
use crate::lattice::{term_group, GroupTerms, LatticeSpec, NUM_GROUPS};
use crate::noise::NoiseTable;
use crate::statevector::{run_circuit, StateVector};
use crate::vha::ParameterSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    TGate,
    OnsiteGate,
    CZGate,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::TGate => "T",
            GateKind::OnsiteGate => "ONSITE",
            GateKind::CZGate => "CZ",
        }
    }
}

/// One two-qubit rotation `exp(i angle A)`; `A` is fixed by `kind`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    /// Zero-based qubits. For a CZ gate the first is the control.
    pub qubits: (usize, usize),
    /// Total rotation angle. For t gates this is `theta * t` and enters as
    /// `exp(-i angle (s+s- + h.c.))`.
    pub angle: f64,
}

/// Position of one `(step, group)` factor inside a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// One-based step index `k`.
    pub step: usize,
    /// One-based group index `alpha`.
    pub alpha: usize,
    pub gates: Range<usize>,
}

/// Gates in application order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    gates: Vec<GateOp>,
    layout: Vec<Segment>,
}

impl Circuit {
    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn layout(&self) -> &[Segment] {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// One line per gate: `index kind q1 q2 angle over_rotation`.
    pub fn dump(&self, noise: Option<&NoiseTable>) -> String {
        let mut out = String::from("# index kind qubit_a qubit_b angle over_rotation\n");
        for (i, g) in self.gates.iter().enumerate() {
            let delta = noise.map_or(0.0, |n| n.deltas()[i]);
            let _ = writeln!(
                out,
                "{i} {} {} {} {:.17e} {:.17e}",
                g.kind.name(),
                g.qubits.0,
                g.qubits.1,
                g.angle,
                delta
            );
        }
        out
    }
}

/// Gates for `exp(i theta H_alpha)`, terms ordered by their lowest qubit.
pub fn compile_group(lattice: &LatticeSpec, alpha: usize, theta: f64) -> Result<Vec<GateOp>> {
    let group = term_group(lattice, alpha)?;
    let m = lattice.sites();
    let mut gates = Vec::new();
    match group.terms {
        GroupTerms::Sites(sites) => {
            for j in sites {
                gates.push(GateOp { kind: GateKind::OnsiteGate, qubits: (j, j + m), angle: theta * lattice.u });
            }
        }
        GroupTerms::Hops(edges) => {
            let mut hops: Vec<(usize, usize)> =
                edges.iter().flat_map(|e| [(e.j, e.jprime), (e.j + m, e.jprime + m)]).collect();
            hops.sort_unstable();
            for (p, q) in hops {
                let cz = |l| GateOp { kind: GateKind::CZGate, qubits: (l, p), angle: PI };
                gates.extend((p + 1..q).map(cz));
                gates.push(GateOp { kind: GateKind::TGate, qubits: (p, q), angle: theta * lattice.t });
                gates.extend((p + 1..q).rev().map(cz));
            }
        }
    }
    Ok(gates)
}

/// The full ansatz circuit: steps `k = 1..n` in order, groups `1..5` within
/// each step. The first gate acts on the state first.
pub fn compile_vha(lattice: &LatticeSpec, params: &ParameterSet) -> Result<Circuit> {
    if params.steps() == 0 {
        return domain("ansatz needs at least one step");
    }
    let mut circuit = Circuit::default();
    for (k, row) in params.rows().iter().enumerate() {
        for alpha in 1..=NUM_GROUPS {
            let start = circuit.gates.len();
            circuit.gates.extend(compile_group(lattice, alpha, row[alpha - 1])?);
            circuit.layout.push(Segment { step: k + 1, alpha, gates: start..circuit.gates.len() });
        }
    }
    Ok(circuit)
}

/// Two-qubit gates per ansatz step.
pub fn gates_per_step(lattice: &LatticeSpec) -> usize {
    (1..=NUM_GROUPS).map(|a| compile_group(lattice, a, 0.0).map_or(0, |g| g.len())).sum()
}

/// Largest entry of `|U_compiled - exp(i theta H_alpha)|` over the full Fock
/// space, computed one particle-number sector at a time. Only for `2M <= 12`.
pub fn oracle_check(lattice: &LatticeSpec, alpha: usize, theta: f64) -> Result<f64> {
    if lattice.qubits() > 12 {
        return domain(format!("oracle check refuses {} qubits (limit 12)", lattice.qubits()));
    }
    let gates = compile_group(lattice, alpha, theta)?;
    let circuit = Circuit { layout: vec![], gates };
    let noise = NoiseTable::zeros(circuit.len());
    let m = lattice.sites();
    let full_dim = 1usize << lattice.qubits();
    let mut worst = 0.0f64;
    for up in 0..=m {
        for down in 0..=m {
            let basis = Basis::sector(lattice, Sector { up, down })?;
            let exact = dense_group_exponential(lattice, alpha, theta, &basis)?;
            for col in 0..basis.dim() {
                let mut psi = StateVector::basis_state(full_dim, basis.state(col));
                run_circuit(&mut psi, &circuit, &noise)?;
                for (s, amp) in psi.amplitudes().iter().enumerate() {
                    let expected = basis.index_of(s).map_or(Complex64::new(0.0, 0.0), |row| exact[(row, col)]);
                    worst = worst.max((amp - expected).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// `exp(i theta H_alpha)` restricted to `basis`, via a symmetric eigendecomposition.
fn dense_group_exponential(
    lattice: &LatticeSpec,
    alpha: usize,
    theta: f64,
    basis: &Basis,
) -> Result<DMatrix<Complex64>> {
    let h = group_operator(lattice, alpha, basis)?.to_dense();
    let n = h.nrows();
    let eig = SymmetricEigen::new(h);
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let phase = Complex64::from_polar(1.0, theta * eig.eigenvalues[k]);
        for i in 0..n {
            let vik = eig.eigenvectors[(i, k)];
            if vik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += phase * vik * eig.eigenvectors[(j, k)];
            }
        }
    }
    Ok(out)
}
