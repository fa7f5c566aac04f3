//! Occupation-number bases: the full Fock space or one fixed
//! `(N_up, N_down)` particle-number sector.
//!
//! Every gate and every Hamiltonian term conserves the particle number of
//! each spin species, so any state that starts in a sector stays there.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::lattice::LatticeSpec;

/// Default upper bound on the qubit count `2M`.
pub const DEFAULT_QUBIT_CAP: usize = 20;

const ABSENT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sector {
    pub up: usize,
    pub down: usize,
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.up, self.down)
    }
}

/// Ordered list of occupation bit strings spanning a subspace.
#[derive(Debug, Clone)]
pub struct Basis {
    qubits: usize,
    sites: usize,
    sector: Option<Sector>,
    /// Sector members in increasing order; empty for the full space.
    states: Vec<u32>,
    /// Inverse of `states` over all `2^qubits` strings; empty for the full space.
    lookup: Vec<u32>,
}

pub(crate) fn check_qubit_cap(lattice: &LatticeSpec, cap: usize) -> Result<()> {
    if lattice.qubits() > cap {
        return Err(crate::Error::DimensionCap {
            ncols: lattice.ncols,
            nrows: lattice.nrows,
            qubits: lattice.qubits(),
            cap,
        });
    }
    Ok(())
}

impl Basis {
    /// The whole `2^(2M)`-dimensional Fock space.
    pub fn full(lattice: &LatticeSpec) -> Result<Self> {
        check_qubit_cap(lattice, DEFAULT_QUBIT_CAP)?;
        Ok(Self {
            qubits: lattice.qubits(),
            sites: lattice.sites(),
            sector: None,
            states: Vec::new(),
            lookup: Vec::new(),
        })
    }

    /// All strings with `sector.up` spin-up and `sector.down` spin-down particles.
    pub fn sector(lattice: &LatticeSpec, sector: Sector) -> Result<Self> {
        check_qubit_cap(lattice, DEFAULT_QUBIT_CAP)?;
        let m = lattice.sites();
        if sector.up > m || sector.down > m {
            return domain(format!("sector {sector} does not fit {m} sites"));
        }
        let ups = fixed_weight_strings(m, sector.up);
        let downs = fixed_weight_strings(m, sector.down);
        let mut states = Vec::with_capacity(ups.len() * downs.len());
        for &d in &downs {
            for &u in &ups {
                states.push(u | (d << m));
            }
        }
        let mut lookup = vec![ABSENT; 1usize << (2 * m)];
        for (i, &s) in states.iter().enumerate() {
            lookup[s as usize] = i as u32;
        }
        Ok(Self { qubits: 2 * m, sites: m, sector: Some(sector), states, lookup })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn sector_label(&self) -> Option<Sector> {
        self.sector
    }

    pub fn is_full(&self) -> bool {
        self.sector.is_none()
    }

    pub fn dim(&self) -> usize {
        match self.sector {
            None => 1usize << self.qubits,
            Some(_) => self.states.len(),
        }
    }

    /// Occupation bit string of basis vector `i`.
    #[inline]
    pub fn state(&self, i: usize) -> usize {
        match self.sector {
            None => i,
            Some(_) => self.states[i] as usize,
        }
    }

    /// Position of bit string `s` in this basis, if it belongs to it.
    #[inline]
    pub fn index_of(&self, s: usize) -> Option<usize> {
        match self.sector {
            None => (s < (1usize << self.qubits)).then_some(s),
            Some(_) => match self.lookup.get(s) {
                Some(&i) if i != ABSENT => Some(i as usize),
                _ => None,
            },
        }
    }

    /// `(N_up, N_down)` of bit string `s`.
    pub fn occupation(&self, s: usize) -> Sector {
        let mask = (1usize << self.sites) - 1;
        Sector {
            up: (s & mask).count_ones() as usize,
            down: (s >> self.sites).count_ones() as usize,
        }
    }
}

/// All `m`-bit strings with exactly `k` bits set, ascending.
fn fixed_weight_strings(m: usize, k: usize) -> Vec<u32> {
    (0u32..(1u32 << m)).filter(|s| s.count_ones() as usize == k).collect()
}

/// Number of ways to choose `k` of `n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_dimensions() {
        let l = LatticeSpec::with_default_coupling(3, 3).unwrap();
        let b = Basis::sector(&l, Sector { up: 3, down: 3 }).unwrap();
        assert_eq!(b.dim(), binomial(9, 3) * binomial(9, 3));
        assert_eq!(b.dim(), 7056);
    }

    #[test]
    fn lookup_inverts_states() {
        let l = LatticeSpec::with_default_coupling(2, 2).unwrap();
        let b = Basis::sector(&l, Sector { up: 2, down: 1 }).unwrap();
        for i in 0..b.dim() {
            let s = b.state(i);
            assert_eq!(b.index_of(s), Some(i));
            assert_eq!(b.occupation(s), Sector { up: 2, down: 1 });
        }
        assert_eq!(b.index_of(0), None);
    }

    #[test]
    fn full_basis_is_identity_map() {
        let l = LatticeSpec::with_default_coupling(2, 2).unwrap();
        let b = Basis::full(&l).unwrap();
        assert_eq!(b.dim(), 256);
        assert_eq!(b.state(77), 77);
        assert_eq!(b.index_of(255), Some(255));
        assert_eq!(b.index_of(256), None);
    }

    #[test]
    fn cap_is_enforced() {
        let l = LatticeSpec::with_default_coupling(4, 3).unwrap();
        assert!(matches!(Basis::full(&l), Err(crate::Error::DimensionCap { qubits: 24, .. })));
    }

    #[test]
    fn sector_out_of_range() {
        let l = LatticeSpec::with_default_coupling(2, 2).unwrap();
        assert!(Basis::sector(&l, Sector { up: 5, down: 0 }).is_err());
    }
}
