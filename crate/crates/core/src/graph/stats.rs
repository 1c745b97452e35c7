use serde::Serialize;

use super::TreeGraph;
use crate::{Error, Result};

/// Leaf/parent counts and the functionality averages that enter the
/// structural bound.
///
/// A leaf has one bond. A parent is a non-leaf adjacent to at least one leaf;
/// it is also adjacent to `delta + 1` non-leaf nodes, so `delta = -1` for a
/// star center.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralStats {
    pub n: usize,
    pub n_leaves: usize,
    pub n_parents: usize,
    /// Mean functionality over all non-leaf nodes.
    pub avg_f_nonleaf: f64,
    /// Mean of `f - delta` over parents.
    pub avg_f_minus_delta_parents: f64,
    /// Mean functionality over parents.
    pub avg_f_parents: f64,
    /// `delta_j` for each entry of `parent_ids`.
    pub per_node_delta: Vec<i64>,
    /// Functionality of each entry of `parent_ids`.
    pub per_parent_f: Vec<usize>,
    pub leaf_ids: Vec<usize>,
    pub parent_ids: Vec<usize>,
}

impl StructuralStats {
    /// Leaves attached to each parent, aligned with `parent_ids`.
    pub fn leaves_per_parent(&self) -> impl Iterator<Item = usize> + '_ {
        // f - delta - 1
        self.per_parent_f
            .iter()
            .zip(&self.per_node_delta)
            .map(|(&f, &d)| (f as i64 - d - 1) as usize)
    }

    /// `N_L / (<f - delta>_P - 1)`, which equals `n_parents` on every tree.
    pub fn parents_from_leaves(&self) -> f64 {
        self.n_leaves as f64 / (self.avg_f_minus_delta_parents - 1.0)
    }

    /// `N - (N - 2)/(<f>_{N\L} - 1)`, which equals `n_leaves` on every tree.
    pub fn leaves_from_nonleaf_average(&self) -> f64 {
        let n = self.n as f64;
        n - (n - 2.0) / (self.avg_f_nonleaf - 1.0)
    }
}

/// Counts leaves and parents and computes the restricted averages.
///
/// Fails with [`Error::NoParents`] when no parent exists (only possible for
/// `N <= 2`).
pub fn structural_stats(g: &TreeGraph) -> Result<StructuralStats> {
    let n = g.n();
    let leaf_ids: Vec<usize> = (0..n).filter(|&j| g.is_leaf(j)).collect();

    let mut parent_ids = Vec::new();
    let mut per_node_delta = Vec::new();
    let mut per_parent_f = Vec::new();
    let mut nonleaf_sum = 0usize;
    let mut nonleaf_count = 0usize;
    for j in 0..n {
        let f = g.functionality(j);
        if f == 1 {
            continue;
        }
        nonleaf_sum += f;
        nonleaf_count += 1;
        let leaf_neighbors = g.neighbors(j).iter().filter(|&&k| g.is_leaf(k)).count();
        if leaf_neighbors > 0 {
            let nonleaf_neighbors = f - leaf_neighbors;
            parent_ids.push(j);
            per_node_delta.push(nonleaf_neighbors as i64 - 1);
            per_parent_f.push(f);
        }
    }
    if parent_ids.is_empty() {
        return Err(Error::NoParents);
    }

    let n_parents = parent_ids.len();
    let sum_f_parents: usize = per_parent_f.iter().sum();
    let sum_f_minus_delta: i64 = per_parent_f
        .iter()
        .zip(&per_node_delta)
        .map(|(&f, &d)| f as i64 - d)
        .sum();

    Ok(StructuralStats {
        n,
        n_leaves: leaf_ids.len(),
        n_parents,
        avg_f_nonleaf: nonleaf_sum as f64 / nonleaf_count as f64,
        avg_f_minus_delta_parents: sum_f_minus_delta as f64 / n_parents as f64,
        avg_f_parents: sum_f_parents as f64 / n_parents as f64,
        per_node_delta,
        per_parent_f,
        leaf_ids,
        parent_ids,
    })
}
