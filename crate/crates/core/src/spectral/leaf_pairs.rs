use nalgebra::DVector;

use super::Hamiltonian;
use crate::graph::{structural_stats, TreeGraph};
use crate::{Error, Result};

/// A normalized eigenvector at `E*` supported on the leaves of one parent.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafPairState {
    pub parent: usize,
    /// `(node, amplitude)` pairs; all other amplitudes vanish.
    pub support: Vec<(usize, f64)>,
}

impl LeafPairState {
    pub fn to_dense(&self, n: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        for &(j, a) in &self.support {
            v[j] = a;
        }
        v
    }
}

/// For every parent with leaves `l_1..l_m`, the `m - 1` orthonormal
/// combinations
///
/// `(|l_1> + ... + |l_k> - k |l_{k+1}>) / sqrt(k (k + 1))`,  `k = 1..m-1`,
///
/// which span the antisymmetric leaf superpositions `(|l_i> - |l_j>)/sqrt(2)`.
/// Each has zero overlap with the parent's row of `H` and eigenvalue `H(1)`,
/// giving `N_L - N_P` states in total. A graph without parents yields none.
pub fn leaf_pair_eigenstates(g: &TreeGraph, h: &Hamiltonian) -> Result<Vec<LeafPairState>> {
    if g.n() != h.n() {
        return Err(Error::InvalidParameter(format!(
            "Hamiltonian dimension {} does not match graph size {}",
            h.n(),
            g.n()
        )));
    }
    let stats = match structural_stats(g) {
        Ok(st) => st,
        Err(Error::NoParents) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mut states = Vec::with_capacity(stats.n_leaves - stats.n_parents);
    for &parent in &stats.parent_ids {
        let leaves: Vec<usize> = g
            .neighbors(parent)
            .iter()
            .copied()
            .filter(|&l| g.is_leaf(l))
            .collect();
        for k in 1..leaves.len() {
            let norm = ((k * (k + 1)) as f64).sqrt();
            let mut support: Vec<(usize, f64)> =
                leaves[..k].iter().map(|&l| (l, 1.0 / norm)).collect();
            support.push((leaves[k], -(k as f64) / norm));
            states.push(LeafPairState { parent, support });
        }
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_chain, generate_dendrimer, generate_star};
    use crate::spectral::{build_hamiltonian, PotentialKind};

    fn states(g: &TreeGraph) -> (Vec<LeafPairState>, Hamiltonian) {
        let h = build_hamiltonian(g, &PotentialKind::Connectivity).unwrap();
        (leaf_pair_eigenstates(g, &h).unwrap(), h)
    }

    #[test]
    fn star_four_has_two() {
        let g = generate_star(4).unwrap();
        let (vs, h) = states(&g);
        assert_eq!(vs.len(), 2);
        for v in &vs {
            let d = v.to_dense(4);
            let r = h.matrix() * &d - &d * h.e_star();
            assert!(r.norm() <= 1e-12);
            assert!((d.norm() - 1.0).abs() < 1e-15);
        }
        let first = vs[0].to_dense(4);
        assert!((first[1] - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((first[2] + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!(vs[0].to_dense(4).dot(&vs[1].to_dense(4)).abs() < 1e-15);
    }

    #[test]
    fn chain_four_has_none() {
        assert!(states(&generate_chain(4).unwrap()).0.is_empty());
        assert!(states(&generate_chain(2).unwrap()).0.is_empty());
    }

    #[test]
    fn dendrimer_three_two_has_three() {
        assert_eq!(states(&generate_dendrimer(3, 2).unwrap()).0.len(), 3);
    }

    #[test]
    fn dimension_mismatch() {
        let h = build_hamiltonian(&generate_chain(5).unwrap(), &PotentialKind::Adjacency).unwrap();
        assert!(leaf_pair_eigenstates(&generate_chain(4).unwrap(), &h).is_err());
    }
}
