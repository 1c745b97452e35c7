use crate::graph::StructuralStats;
use crate::spectral::Spectrum;
use crate::{Error, Result};

/// `chi = sum_E rho(E)^2`.
pub fn chi_exact(sp: &Spectrum) -> f64 {
    sp.densities().map(|(_, rho)| rho * rho).sum()
}

/// Flat-density lower bound `rho*^2 + (1 - rho*)/n` built from the density
/// of a single eigenvalue.
pub fn chi_lower_from_density(rho_star: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho_star) {
        return Err(Error::OutOfDomain(format!(
            "spectral density must lie in [0, 1], got {rho_star}"
        )));
    }
    if n == 0 {
        return Err(Error::OutOfDomain("network size must be positive".into()));
    }
    Ok(rho_star * rho_star + (1.0 - rho_star) / n as f64)
}

/// Leaf-pair lower estimate of `rho(E*)`: `(N_L - N_P)/n`.
pub fn rho_star_structural(st: &StructuralStats, n: usize) -> Result<f64> {
    if st.n_parents == 0 {
        return Err(Error::NoParents);
    }
    if n == 0 {
        return Err(Error::OutOfDomain("network size must be positive".into()));
    }
    Ok((st.n_leaves - st.n_parents) as f64 / n as f64)
}

/// Which parent average enters the structural bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMode {
    /// `<f - delta>` over parents as measured on the graph.
    Measured,
    /// `delta = 0`: `<f>` over parents.
    ForceZero,
}

/// Structural bound to order `1/n` in terms of the non-leaf average `a` and
/// the parent average `b`:
///
/// ```text
/// (1 - 1/(a-1))^2 (1 - 1/(b-1))^2
///   + (1/n) [1 - (a-2)/(a-1) (b-2)/(b-1) + 4 (a-2)/(a-1)^2 ((b-2)/(b-1))^2]
/// ```
pub fn chi_structural_from_averages(a: f64, b: f64, n: usize) -> Result<f64> {
    if !(a > 1.0) {
        return Err(Error::DegenerateAverage {
            name: "<f> over non-leaves",
            value: a,
        });
    }
    if !(b > 1.0) {
        return Err(Error::DegenerateAverage {
            name: "parent average",
            value: b,
        });
    }
    if n == 0 {
        return Err(Error::OutOfDomain("network size must be positive".into()));
    }
    let ra = (a - 2.0) / (a - 1.0);
    let rb = (b - 2.0) / (b - 1.0);
    let leading = ra * ra * rb * rb;
    let correction = 1.0 - ra * rb + 4.0 * (a - 2.0) / ((a - 1.0) * (a - 1.0)) * rb * rb;
    Ok(leading + correction / n as f64)
}

pub fn chi_structural(st: &StructuralStats, n: usize, mode: DeltaMode) -> Result<f64> {
    if st.n_parents == 0 {
        return Err(Error::NoParents);
    }
    let b = match mode {
        DeltaMode::Measured => st.avg_f_minus_delta_parents,
        DeltaMode::ForceZero => st.avg_f_parents,
    };
    chi_structural_from_averages(st.avg_f_nonleaf, b, n)
}
