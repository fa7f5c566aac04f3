//! Rectangular Hubbard lattice: geometry, Jordan-Wigner qubit ordering and
//! the five commuting term groups.
//!
//! Sites are numbered row-major. Spin-up orbitals occupy qubits `0..M` and
//! spin-down orbitals `M..2M`, so a hop between horizontal neighbours is
//! adjacent in the Jordan-Wigner order while a vertical hop crosses
//! `ncols - 1` intermediate qubits.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Number of term groups per ansatz step.
pub const NUM_GROUPS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub ncols: usize,
    pub nrows: usize,
    /// Hopping amplitude.
    pub t: f64,
    /// On-site interaction.
    #[serde(rename = "U")]
    pub u: f64,
}

impl LatticeSpec {
    pub fn new(ncols: usize, nrows: usize, t: f64, u: f64) -> Result<Self> {
        if ncols == 0 || nrows == 0 {
            return domain(format!("lattice dimensions must be positive, got {ncols}x{nrows}"));
        }
        if t.is_nan() || t <= 0.0 || !t.is_finite() {
            return domain(format!("hopping amplitude must be positive, got {t}"));
        }
        if !u.is_finite() {
            return domain(format!("on-site interaction must be finite, got {u}"));
        }
        Ok(Self { ncols, nrows, t, u })
    }

    /// Hubbard model at the default coupling `U = 2t`.
    pub fn with_default_coupling(ncols: usize, nrows: usize) -> Result<Self> {
        Self::new(ncols, nrows, 1.0, 2.0)
    }

    /// Site count `M`.
    pub fn sites(&self) -> usize {
        self.ncols * self.nrows
    }

    /// Qubit count `2M`.
    pub fn qubits(&self) -> usize {
        2 * self.sites()
    }

    /// Same geometry with a different on-site interaction.
    pub fn with_u(&self, u: f64) -> Self {
        Self { u, ..*self }
    }

    /// One-based Jordan-Wigner label of the orbital at one-based `(col, row)`.
    ///
    /// Equals `j = (row - 1) * ncols + col` for spin up and `j + M` for spin
    /// down.
    pub fn site_index(&self, col: usize, row: usize, spin: Spin) -> Result<usize> {
        Ok(self.qubit(col, row, spin)? + 1)
    }

    /// Zero-based bit position of the orbital at one-based `(col, row)`.
    pub fn qubit(&self, col: usize, row: usize, spin: Spin) -> Result<usize> {
        if col == 0 || col > self.ncols || row == 0 || row > self.nrows {
            return domain(format!(
                "site ({col}, {row}) outside a {}x{} lattice",
                self.ncols, self.nrows
            ));
        }
        let site = (row - 1) * self.ncols + (col - 1);
        Ok(self.orbital(site, spin))
    }

    /// Bit position of zero-based `site` with the given spin.
    pub fn orbital(&self, site: usize, spin: Spin) -> usize {
        match spin {
            Spin::Up => site,
            Spin::Down => site + self.sites(),
        }
    }

    /// Label such as `3x2` (columns first).
    pub fn label(&self) -> String {
        format!("{}x{}", self.ncols, self.nrows)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    fn of(one_based: usize) -> Self {
        if one_based % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Nearest-neighbour bond between zero-based sites `j < jprime`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub j: usize,
    pub jprime: usize,
    pub direction: Direction,
    pub parity: Parity,
}

impl Edge {
    /// Group index (1..=4) this edge belongs to.
    pub fn group(&self) -> usize {
        match (self.direction, self.parity) {
            (Direction::Horizontal, Parity::Odd) => 1,
            (Direction::Horizontal, Parity::Even) => 2,
            (Direction::Vertical, Parity::Odd) => 3,
            (Direction::Vertical, Parity::Even) => 4,
        }
    }
}

/// All nearest-neighbour bonds with open boundaries, horizontal first.
///
/// A horizontal bond takes the parity of its left column, a vertical bond
/// the parity of its upper row (both one-based).
pub fn enumerate_edges(lattice: &LatticeSpec) -> Vec<Edge> {
    let (nc, nr) = (lattice.ncols, lattice.nrows);
    let mut edges = Vec::with_capacity((nc - 1) * nr + nc * (nr - 1));
    for row in 0..nr {
        for col in 0..nc - 1 {
            let j = row * nc + col;
            edges.push(Edge {
                j,
                jprime: j + 1,
                direction: Direction::Horizontal,
                parity: Parity::of(col + 1),
            });
        }
    }
    for row in 0..nr - 1 {
        for col in 0..nc {
            let j = row * nc + col;
            edges.push(Edge {
                j,
                jprime: j + nc,
                direction: Direction::Vertical,
                parity: Parity::of(row + 1),
            });
        }
    }
    edges
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupTerms {
    /// Hopping bonds; each is compiled once per spin.
    Hops(Vec<Edge>),
    /// Zero-based sites carrying an on-site interaction.
    Sites(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermGroup {
    /// One-based group index, 1..=5.
    pub alpha: usize,
    pub terms: GroupTerms,
}

impl TermGroup {
    pub fn len(&self) -> usize {
        match &self.terms {
            GroupTerms::Hops(e) => e.len(),
            GroupTerms::Sites(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The five term groups: horizontal-odd, horizontal-even, vertical-odd,
/// vertical-even hops, then all on-site terms. Empty groups are kept.
pub fn term_groups(lattice: &LatticeSpec) -> Vec<TermGroup> {
    let edges = enumerate_edges(lattice);
    let mut groups: Vec<TermGroup> = (1..=4)
        .map(|alpha| TermGroup {
            alpha,
            terms: GroupTerms::Hops(edges.iter().copied().filter(|e| e.group() == alpha).collect()),
        })
        .collect();
    groups.push(TermGroup { alpha: 5, terms: GroupTerms::Sites((0..lattice.sites()).collect()) });
    groups
}

/// Term group `alpha` (1..=5).
pub fn term_group(lattice: &LatticeSpec, alpha: usize) -> Result<TermGroup> {
    if !(1..=NUM_GROUPS).contains(&alpha) {
        return domain(format!("group index must be in 1..=5, got {alpha}"));
    }
    Ok(term_groups(lattice).swap_remove(alpha - 1))
}
