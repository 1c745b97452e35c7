//! Hamiltonians on trees and their spectra.
//!
//! All Hamiltonians here have unit couplings on bonds and an on-site potential
//! that depends only on the functionality of the node. Leaves share the
//! potential `H(1)`, which makes `E* = H(1)` the eigenvalue carried by
//! antisymmetric superpositions of leaves hanging off the same parent.

mod eigen;
mod exact;
mod leaf_pairs;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

pub use eigen::{
    bin_degeneracies, default_tolerance, eigendecompose, eigendecompose_with_limit, EigenSystem,
    Spectrum, SpectralClass,
};
pub use exact::{
    multiplicity_exact, multiplicity_exact_at_e_star, multiplicity_exact_at_e_star_on_tree,
    multiplicity_exact_on_tree, nullity_exact, rational_from_f64, MAX_DENOMINATOR,
};
pub use leaf_pairs::{leaf_pair_eigenstates, LeafPairState};

use crate::graph::TreeGraph;
use crate::{Error, Result, DEFAULT_DENSE_LIMIT};

/// On-site potential as a function of node functionality.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    /// `H(f) = f`: the connectivity matrix.
    Connectivity,
    /// `H(f) = 0`: the adjacency matrix.
    Adjacency,
    /// Explicit table `f -> H(f)`.
    Custom(BTreeMap<usize, f64>),
}

impl PotentialKind {
    pub fn value(&self, f: usize) -> Result<f64> {
        match self {
            PotentialKind::Connectivity => Ok(f as f64),
            PotentialKind::Adjacency => Ok(0.0),
            PotentialKind::Custom(table) => {
                table.get(&f).copied().ok_or(Error::IncompletePotential(f))
            }
        }
    }

    /// `H(1)`.
    pub fn e_star(&self) -> Result<f64> {
        self.value(1)
    }
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialKind::Connectivity => f.write_str("connectivity"),
            PotentialKind::Adjacency => f.write_str("adjacency"),
            PotentialKind::Custom(table) => {
                f.write_str("custom{")?;
                for (i, (k, v)) in table.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{k}:{v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// Dense real symmetric Hamiltonian of a tree.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    matrix: DMatrix<f64>,
    potential: PotentialKind,
    e_star: f64,
}

impl Hamiltonian {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn potential(&self) -> &PotentialKind {
        &self.potential
    }

    /// The distinguished eigenvalue `H(1)`.
    pub fn e_star(&self) -> f64 {
        self.e_star
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

/// Unit couplings on every bond, `H(f_j)` on the diagonal.
pub fn build_hamiltonian(g: &TreeGraph, potential: &PotentialKind) -> Result<Hamiltonian> {
    let n = g.n();
    if n > DEFAULT_DENSE_LIMIT {
        return Err(Error::SizeLimit {
            what: "dense Hamiltonian",
            n,
            limit: DEFAULT_DENSE_LIMIT,
        });
    }
    let e_star = potential.e_star()?;
    let mut matrix = DMatrix::zeros(n, n);
    for j in 0..n {
        matrix[(j, j)] = potential.value(g.functionality(j))?;
        for &k in g.neighbors(j) {
            matrix[(j, k)] = 1.0;
        }
    }
    Ok(Hamiltonian {
        matrix,
        potential: potential.clone(),
        e_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_chain, generate_sft, generate_star, SftParams};

    #[test]
    fn chain_connectivity() {
        let h = build_hamiltonian(&generate_chain(3).unwrap(), &PotentialKind::Connectivity)
            .unwrap();
        let expected = DMatrix::from_row_slice(3, 3, &[1., 1., 0., 1., 2., 1., 0., 1., 1.]);
        assert_eq!(h.matrix(), &expected);
        assert_eq!(h.e_star(), 1.0);
    }

    #[test]
    fn star_adjacency() {
        let h = build_hamiltonian(&generate_star(4).unwrap(), &PotentialKind::Adjacency).unwrap();
        let m = h.matrix();
        assert!((0..4).all(|j| m[(j, j)] == 0.0));
        assert!((1..4).all(|j| m[(0, j)] == 1.0 && m[(j, 0)] == 1.0));
        assert_eq!(m[(1, 2)], 0.0);
        assert_eq!(h.e_star(), 0.0);
    }

    #[test]
    fn custom_table() {
        let table = BTreeMap::from([(1, 5.0), (2, 7.0)]);
        let h = build_hamiltonian(&generate_chain(3).unwrap(), &PotentialKind::Custom(table))
            .unwrap();
        assert_eq!(h.matrix().diagonal().as_slice(), &[5.0, 7.0, 5.0]);
        assert_eq!(h.e_star(), 5.0);
    }

    #[test]
    fn custom_table_must_cover_every_functionality() {
        let table = BTreeMap::from([(1, 5.0)]);
        let err = build_hamiltonian(&generate_chain(3).unwrap(), &PotentialKind::Custom(table))
            .unwrap_err();
        assert!(matches!(err, Error::IncompletePotential(2)));
    }

    #[test]
    fn symmetric_with_trace_equal_to_potential_sum() {
        let g = generate_sft(&SftParams::new(120, 2.3, 9)).unwrap();
        for p in [PotentialKind::Connectivity, PotentialKind::Adjacency] {
            let h = build_hamiltonian(&g, &p).unwrap();
            assert_eq!(h.matrix(), &h.matrix().transpose());
            let expected: f64 = (0..g.n()).map(|j| p.value(g.functionality(j)).unwrap()).sum();
            assert_eq!(h.trace(), expected);
        }
    }

    #[test]
    fn dense_limit() {
        let g = generate_chain(DEFAULT_DENSE_LIMIT + 1).unwrap();
        assert!(matches!(
            build_hamiltonian(&g, &PotentialKind::Adjacency),
            Err(Error::SizeLimit { .. })
        ));
    }
}
