//! Fano-lattice form of the chain. The cell-wise rotation
//! `p = (a + b)/sqrt(2)`, `f = (a - b)/sqrt(2)` turns every cell into a
//! chain site `p` with hopping `-2d` to its neighbours and one side state `f`
//! that only couples to its own `p`.

use crate::error::{Error, Result};
use crate::linalg::{self, match_multisets, ComplexMatrix};
use crate::params::FiniteLattice;
use crate::spectra::assemble_hamiltonian;
use crate::ComplexEnergy;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoChain {
    pub n_cells: usize,
    /// Mean on-site energy `(eps_a + eps_b)/2`.
    pub eps_plus: ComplexEnergy,
    /// Half difference `(eps_a - eps_b)/2`, the chain to side-state coupling.
    pub eps_minus: ComplexEnergy,
    /// `eps_plus - t`.
    pub chain_onsite: ComplexEnergy,
    /// `eps_plus + t`.
    pub fano_onsite: ComplexEnergy,
    /// Magnitude `2d` of the chain hopping; the matrix element is `-2d`.
    pub chain_hopping: f64,
}

pub fn detangle(fl: &FiniteLattice) -> FanoChain {
    let (ea, eb) = (fl.onsite_a(), fl.onsite_b());
    let eps_plus = (ea + eb) * 0.5;
    let eps_minus = (ea - eb) * 0.5;
    let t = fl.params().t();
    FanoChain {
        n_cells: fl.n_cells(),
        eps_plus,
        eps_minus,
        chain_onsite: eps_plus - t,
        fano_onsite: eps_plus + t,
        chain_hopping: 2.0 * fl.params().d(),
    }
}

impl FanoChain {
    /// `2N x 2N` Hamiltonian in the order `p_1, f_1, p_2, f_2, ...`.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        let n = 2 * self.n_cells;
        let mut h = ComplexMatrix::zeros(n, n);
        let hop = ComplexEnergy::new(-self.chain_hopping, 0.0);
        for cell in 0..self.n_cells {
            let (p, f) = (2 * cell, 2 * cell + 1);
            h[(p, p)] = self.chain_onsite;
            h[(f, f)] = self.fano_onsite;
            h[(p, f)] = self.eps_minus;
            h[(f, p)] = self.eps_minus;
            if cell + 1 < self.n_cells {
                h[(p, p + 2)] = hop;
                h[(p + 2, p)] = hop;
            }
        }
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport {
    pub n_values: usize,
    /// Largest eigenvalue distance under the optimal pairing.
    pub max_distance: f64,
    pub tol: f64,
}

/// Compares the spectra of the original and detangled Hamiltonians.
pub fn verify_equivalence(fl: &FiniteLattice, tol: f64) -> Result<EquivalenceReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "must be positive",
        });
    }
    let original = linalg::eigenvalues(&assemble_hamiltonian(fl))?;
    let detangled = linalg::eigenvalues(&detangle(fl).hamiltonian())?;
    let m = match_multisets(&original, &detangled)?;
    if !(m.max_distance <= tol) {
        return Err(Error::EquivalenceFailure {
            max_distance: m.max_distance,
            tol,
        });
    }
    Ok(EquivalenceReport {
        n_values: original.len(),
        max_distance: m.max_distance,
        tol,
    })
}
