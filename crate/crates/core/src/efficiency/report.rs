use serde::Serialize;

use super::bounds::{chi_exact, chi_lower_from_density, chi_structural, rho_star_structural, DeltaMode};
use crate::format::{serialize_opt_real, serialize_real};
use crate::graph::{structural_stats, TreeGraph};
use crate::spectral::{
    bin_degeneracies, build_hamiltonian, default_tolerance, eigendecompose,
    multiplicity_exact_at_e_star, multiplicity_exact_at_e_star_on_tree, PotentialKind,
};
use crate::{Error, Result};

/// Where the multiplicity of `E*` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiplicitySource {
    /// Exact rational nullity of `H - E*`.
    ExactNullity,
    /// Degeneracy class of the floating-point spectrum (irrational potentials).
    Eigensolver,
}

/// Efficiency figures of one graph under one potential.
///
/// `chi_exact` is absent in structural-only mode. The structural values are
/// absent when the graph has no parents or an average is degenerate; in that
/// case `rho_star_structural` is 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyReport {
    pub label: String,
    pub potential: String,
    pub n: usize,
    #[serde(serialize_with = "serialize_real")]
    pub e_star: f64,
    #[serde(serialize_with = "serialize_opt_real")]
    pub chi_exact: Option<f64>,
    #[serde(serialize_with = "serialize_real")]
    pub chi_spectral_lb: f64,
    /// Structural bound with measured `<f - delta>` over parents.
    #[serde(serialize_with = "serialize_opt_real")]
    pub chi_structural: Option<f64>,
    /// Structural bound with `delta = 0`.
    #[serde(serialize_with = "serialize_opt_real")]
    pub chi_structural_delta0: Option<f64>,
    #[serde(serialize_with = "serialize_real")]
    pub rho_star_exact: f64,
    #[serde(serialize_with = "serialize_real")]
    pub rho_star_structural: f64,
    pub multiplicity_e_star: usize,
    pub multiplicity_source: MultiplicitySource,
    /// States at `E*` beyond the `N_L - N_P` leaf-pair states.
    pub e_star_extra_states: i64,
}

impl EfficiencyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Structural {
    rho: f64,
    leaf_pair_states: usize,
    measured: Option<f64>,
    delta0: Option<f64>,
}

fn structural_part(g: &TreeGraph) -> Result<Structural> {
    let n = g.n();
    match structural_stats(g) {
        Ok(st) => Ok(Structural {
            rho: rho_star_structural(&st, n)?,
            leaf_pair_states: st.n_leaves - st.n_parents,
            measured: chi_structural(&st, n, DeltaMode::Measured).ok(),
            delta0: chi_structural(&st, n, DeltaMode::ForceZero).ok(),
        }),
        Err(Error::NoParents) => Ok(Structural {
            rho: 0.0,
            leaf_pair_states: 0,
            measured: None,
            delta0: None,
        }),
        Err(e) => Err(e),
    }
}

fn assemble(
    g: &TreeGraph,
    potential: &PotentialKind,
    chi: Option<f64>,
    multiplicity: usize,
    source: MultiplicitySource,
) -> Result<EfficiencyReport> {
    let n = g.n();
    let st = structural_part(g)?;
    let rho_star_exact = multiplicity as f64 / n as f64;
    Ok(EfficiencyReport {
        label: g.label().to_string(),
        potential: potential.to_string(),
        n,
        e_star: potential.e_star()?,
        chi_exact: chi,
        chi_spectral_lb: chi_lower_from_density(rho_star_exact, n)?,
        chi_structural: st.measured,
        chi_structural_delta0: st.delta0,
        rho_star_exact,
        rho_star_structural: st.rho,
        multiplicity_e_star: multiplicity,
        multiplicity_source: source,
        e_star_extra_states: multiplicity as i64 - st.leaf_pair_states as i64,
    })
}

/// Full analysis: dense spectrum for `chi`, exact nullity for `rho(E*)` when
/// the potential is rational.
pub fn analyze(g: &TreeGraph, potential: &PotentialKind) -> Result<EfficiencyReport> {
    let h = build_hamiltonian(g, potential)?;
    let es = eigendecompose(&h)?;
    let sp = bin_degeneracies(&es, default_tolerance(es.eigenvalues()))?;
    let (multiplicity, source) = match multiplicity_exact_at_e_star(&h) {
        Ok(m) => (m, MultiplicitySource::ExactNullity),
        Err(Error::UnsupportedExactMode(_)) => {
            (sp.multiplicity_at(h.e_star()), MultiplicitySource::Eigensolver)
        }
        Err(e) => return Err(e),
    };
    assemble(g, potential, Some(chi_exact(&sp)), multiplicity, source)
}

/// Analysis without diagonalization: no `chi_exact`, `rho(E*)` from the
/// exact nullity assembled on the tree. Needs a rational potential.
pub fn analyze_structural_only(g: &TreeGraph, potential: &PotentialKind) -> Result<EfficiencyReport> {
    let m = multiplicity_exact_at_e_star_on_tree(g, potential)?;
    assemble(g, potential, None, m, MultiplicitySource::ExactNullity)
}
