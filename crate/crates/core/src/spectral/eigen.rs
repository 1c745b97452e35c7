use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::Hamiltonian;
use crate::{Error, Result, DEFAULT_DENSE_LIMIT};

/// Eigenvalues in ascending order with an orthonormal eigenbasis; column `k`
/// of `eigenvectors` belongs to `eigenvalues[k]`.
///
/// Within a degenerate class the basis is whatever the solver returned.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// `max_k |H v_k - lambda_k v_k|`.
    pub fn max_residual(&self, h: &Hamiltonian) -> f64 {
        let hv = h.matrix() * &self.eigenvectors;
        (0..self.n())
            .map(|k| (hv.column(k) - self.eigenvectors.column(k) * self.eigenvalues[k]).norm())
            .fold(0.0, f64::max)
    }

    /// `max |V^T V - I|` entrywise.
    pub fn max_orthonormality_error(&self) -> f64 {
        let gram = self.eigenvectors.transpose() * &self.eigenvectors;
        let n = self.n();
        (gram - DMatrix::<f64>::identity(n, n)).amax()
    }
}

/// Diagonalizes `h` with the default dense-solver limit.
pub fn eigendecompose(h: &Hamiltonian) -> Result<EigenSystem> {
    eigendecompose_with_limit(h, DEFAULT_DENSE_LIMIT)
}

pub fn eigendecompose_with_limit(h: &Hamiltonian, limit: usize) -> Result<EigenSystem> {
    let n = h.n();
    if n > limit {
        return Err(Error::SizeLimit {
            what: "dense eigensolver",
            n,
            limit,
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("empty Hamiltonian".into()));
    }
    let eig = SymmetricEigen::new(h.matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let columns: Vec<_> = order.iter().map(|&k| eig.eigenvectors.column(k)).collect();
    let eigenvectors = DMatrix::from_columns(&columns);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// One degeneracy class: representative eigenvalue and multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralClass {
    pub value: f64,
    pub multiplicity: usize,
}

/// Eigenvalues grouped into degeneracy classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    classes: Vec<SpectralClass>,
    n: usize,
    tol_abs: f64,
}

impl Spectrum {
    /// Groups ascending eigenvalues: consecutive values within `tol_abs`
    /// share a class whose representative is the class mean.
    pub fn from_sorted_eigenvalues(eigenvalues: &[f64], tol_abs: f64) -> Result<Self> {
        if !(tol_abs > 0.0) {
            return Err(Error::OutOfDomain(format!(
                "degeneracy tolerance must be positive, got {tol_abs}"
            )));
        }
        if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter("eigenvalues must be ascending".into()));
        }
        let mut classes = Vec::new();
        let mut start = 0;
        for i in 1..=eigenvalues.len() {
            if i == eigenvalues.len() || eigenvalues[i] - eigenvalues[i - 1] > tol_abs {
                if i > start {
                    let members = &eigenvalues[start..i];
                    classes.push(SpectralClass {
                        value: members.iter().sum::<f64>() / members.len() as f64,
                        multiplicity: members.len(),
                    });
                }
                start = i;
            }
        }
        Ok(Spectrum {
            classes,
            n: eigenvalues.len(),
            tol_abs,
        })
    }

    /// Builds a spectrum from explicit classes, e.g. known analytic
    /// degeneracies. Values must be strictly increasing.
    pub fn from_classes(classes: Vec<SpectralClass>, tol_abs: f64) -> Result<Self> {
        if classes.windows(2).any(|w| w[1].value <= w[0].value) {
            return Err(Error::InvalidParameter("class values must increase".into()));
        }
        if classes.iter().any(|c| c.multiplicity == 0) {
            return Err(Error::InvalidParameter("empty degeneracy class".into()));
        }
        let n = classes.iter().map(|c| c.multiplicity).sum();
        Ok(Spectrum {
            classes,
            n,
            tol_abs,
        })
    }

    pub fn classes(&self) -> &[SpectralClass] {
        &self.classes
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tol_abs(&self) -> f64 {
        self.tol_abs
    }

    /// `(E, rho(E))` pairs.
    pub fn densities(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n as f64;
        self.classes
            .iter()
            .map(move |c| (c.value, c.multiplicity as f64 / n))
    }

    /// Multiplicity of the class within `tol_abs` of `e`, or 0.
    pub fn multiplicity_at(&self, e: f64) -> usize {
        self.classes
            .iter()
            .find(|c| (c.value - e).abs() <= self.tol_abs)
            .map_or(0, |c| c.multiplicity)
    }

    pub fn density_at(&self, e: f64) -> f64 {
        self.multiplicity_at(e) as f64 / self.n as f64
    }
}

/// `1e-8 * (lambda_max - lambda_min + 1)`.
pub fn default_tolerance(eigenvalues: &[f64]) -> f64 {
    let (lo, hi) = eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let width = if eigenvalues.is_empty() { 0.0 } else { hi - lo };
    1e-8 * (width + 1.0)
}

pub fn bin_degeneracies(ev: &EigenSystem, tol_abs: f64) -> Result<Spectrum> {
    Spectrum::from_sorted_eigenvalues(ev.eigenvalues(), tol_abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        generate_chain, generate_dendrimer, generate_sft, generate_star, generate_vicsek,
        Label, SftParams, TreeGraph,
    };
    use crate::spectral::{build_hamiltonian, PotentialKind};

    fn spectrum_of(g: &TreeGraph) -> Vec<f64> {
        let h = build_hamiltonian(g, &PotentialKind::Connectivity).unwrap();
        eigendecompose(&h).unwrap().eigenvalues().to_vec()
    }

    fn assert_close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn chain_three() {
        // (1 - l) l (l - 3)
        assert_close(&spectrum_of(&generate_chain(3).unwrap()), &[0.0, 1.0, 3.0]);
    }

    #[test]
    fn star_four() {
        assert_close(&spectrum_of(&generate_star(4).unwrap()), &[0.0, 1.0, 1.0, 4.0]);
    }

    #[test]
    fn single_node() {
        let g = TreeGraph::from_edges(1, &[], Label::default()).unwrap();
        let table = [(0usize, 2.5), (1, 1.0)].into_iter().collect();
        let h = build_hamiltonian(&g, &PotentialKind::Custom(table)).unwrap();
        assert_eq!(eigendecompose(&h).unwrap().eigenvalues(), &[2.5]);
    }

    #[test]
    fn solver_limit() {
        let h = build_hamiltonian(&generate_chain(10).unwrap(), &PotentialKind::Adjacency)
            .unwrap();
        assert!(matches!(
            eigendecompose_with_limit(&h, 9),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn residual_and_orthonormality_on_all_families() {
        let graphs = [
            generate_chain(50).unwrap(),
            generate_star(40).unwrap(),
            generate_dendrimer(3, 5).unwrap(),
            generate_vicsek(4, 2).unwrap(),
            generate_sft(&SftParams::new(150, 2.4, 1)).unwrap(),
        ];
        for g in &graphs {
            for p in [PotentialKind::Connectivity, PotentialKind::Adjacency] {
                let h = build_hamiltonian(g, &p).unwrap();
                let es = eigendecompose(&h).unwrap();
                let norm = h.matrix().norm();
                assert!(es.max_residual(&h) <= 1e-9 * norm);
                assert!(es.max_orthonormality_error() <= 1e-9);
                assert!(es.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
                let sum: f64 = es.eigenvalues().iter().sum();
                assert!((sum - h.trace()).abs() < 1e-9 * (1.0 + h.trace().abs()));
            }
        }
    }

    #[test]
    fn binning_examples() {
        let sp = Spectrum::from_sorted_eigenvalues(&[0.0, 1.0, 1.0, 4.0], 1e-8).unwrap();
        let got: Vec<_> = sp.classes().iter().map(|c| (c.value, c.multiplicity)).collect();
        assert_eq!(got, vec![(0.0, 1), (1.0, 2), (4.0, 1)]);

        let sp = Spectrum::from_sorted_eigenvalues(&[0.0, 1.0, 3.0], 1e-8).unwrap();
        assert!(sp.classes().iter().all(|c| c.multiplicity == 1));
        assert_eq!(sp.classes().len(), 3);

        let sp = Spectrum::from_sorted_eigenvalues(&[1.0, 1.0 + 1e-12], 1e-8).unwrap();
        assert_eq!(sp.classes().len(), 1);
        assert_eq!(sp.classes()[0].multiplicity, 2);
    }

    #[test]
    fn binning_rejects_bad_input() {
        assert!(Spectrum::from_sorted_eigenvalues(&[0.0], 0.0).is_err());
        assert!(Spectrum::from_sorted_eigenvalues(&[1.0, 0.0], 1e-8).is_err());
    }

    #[test]
    fn densities_sum_to_one() {
        let g = generate_dendrimer(3, 4).unwrap();
        let vals = spectrum_of(&g);
        let sp = Spectrum::from_sorted_eigenvalues(&vals, default_tolerance(&vals)).unwrap();
        let total: f64 = sp.densities().map(|(_, r)| r).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let mults: usize = sp.classes().iter().map(|c| c.multiplicity).sum();
        assert_eq!(mults, g.n());
        assert!(sp
            .classes()
            .windows(2)
            .all(|w| w[1].value - w[0].value > sp.tol_abs()));
    }
}
