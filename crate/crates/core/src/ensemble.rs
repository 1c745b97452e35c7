//! Deterministic Monte Carlo over scale-free tree realizations.
//!
//! Realization `i` of a run is grown from a seed derived from the master seed
//! and `i` alone, evaluated independently, and aggregated in index order, so
//! the result does not depend on how many worker threads ran it.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::efficiency::{
    avg_f_sft, chi_lower_from_density, chi_sft_finite, chi_sft_infinite, chi_structural,
    DeltaMode,
};
use crate::graph::{generate_sft, structural_stats, SftParams, TreeGraph};
use crate::spectral::{multiplicity_exact_at_e_star_on_tree, PotentialKind};
use crate::{Error, Result, DEFAULT_DENSE_LIMIT};

/// How `1 - chi_lb` is evaluated on each realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    /// Flat-density bound with the exact multiplicity of `E*` (connectivity
    /// potential).
    SpectralExact,
    /// Structural bound with `delta = 0`.
    StructuralDelta0,
    /// Structural bound with measured `<f - delta>` over parents.
    StructuralMeasured,
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::SpectralExact => "spectral-exact",
            Estimator::StructuralDelta0 => "structural-delta0",
            Estimator::StructuralMeasured => "structural-measured",
        })
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral-exact" => Ok(Estimator::SpectralExact),
            "structural-delta0" => Ok(Estimator::StructuralDelta0),
            "structural-measured" => Ok(Estimator::StructuralMeasured),
            other => Err(Error::InvalidParameter(format!("unknown estimator '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleConfig {
    pub n: usize,
    pub s: f64,
    pub f_max: usize,
    pub r: usize,
    pub master_seed: u64,
    pub estimator: Estimator,
}

impl EnsembleConfig {
    /// `f_max = n - 1`, structural `delta = 0` estimator.
    pub fn new(n: usize, s: f64, r: usize, master_seed: u64) -> Self {
        EnsembleConfig {
            n,
            s,
            f_max: n.saturating_sub(1),
            r,
            master_seed,
            estimator: Estimator::StructuralDelta0,
        }
    }

    pub fn with_f_max(mut self, f_max: usize) -> Self {
        self.f_max = f_max;
        self
    }

    pub fn with_estimator(mut self, estimator: Estimator) -> Self {
        self.estimator = estimator;
        self
    }

    fn sft_params(&self, index: usize) -> SftParams {
        SftParams::new(self.n, self.s, realization_seed(self.master_seed, index as u64))
            .with_f_max(self.f_max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidParameter("ensemble needs r >= 1".into()));
        }
        if self.estimator == Estimator::SpectralExact && self.n > DEFAULT_DENSE_LIMIT {
            return Err(Error::SizeLimit {
                what: "spectral-exact estimator",
                n: self.n,
                limit: DEFAULT_DENSE_LIMIT,
            });
        }
        self.sft_params(0).validate()
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of realization `index`: a bijective 64-bit mix of
/// `master + (index + 1) * golden`, hence injective in `index`.
pub fn realization_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Realization {
    pub seed: u64,
    pub one_minus_chi_lb: f64,
    /// Mean functionality over non-leaf nodes of this realization.
    pub avg_f_nonleaf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub config: EnsembleConfig,
    pub mean_one_minus_chi_lb: f64,
    /// Sample standard deviation over `sqrt(r)`; 0 for `r = 1`.
    pub std_error: f64,
    pub realized_avg_f_mean: f64,
    pub per_realization: Vec<Realization>,
}

fn avg_f_nonleaf(g: &TreeGraph) -> f64 {
    let (sum, count) = (0..g.n())
        .map(|j| g.functionality(j))
        .filter(|&f| f > 1)
        .fold((0usize, 0usize), |(s, c), f| (s + f, c + 1));
    if count == 0 {
        0.0
    } else {
        sum as f64 / count as f64
    }
}

/// `1 - chi_lb` of one realized tree under `estimator`. A tree without
/// parents contributes `rho* = 0`.
pub fn one_minus_chi_lb(g: &TreeGraph, estimator: Estimator) -> Result<f64> {
    let n = g.n();
    let chi = match estimator {
        Estimator::SpectralExact => {
            if n > DEFAULT_DENSE_LIMIT {
                return Err(Error::SizeLimit {
                    what: "spectral-exact estimator",
                    n,
                    limit: DEFAULT_DENSE_LIMIT,
                });
            }
            let m = multiplicity_exact_at_e_star_on_tree(g, &PotentialKind::Connectivity)?;
            chi_lower_from_density(m as f64 / n as f64, n)?
        }
        Estimator::StructuralDelta0 | Estimator::StructuralMeasured => {
            let mode = if estimator == Estimator::StructuralDelta0 {
                DeltaMode::ForceZero
            } else {
                DeltaMode::Measured
            };
            match structural_stats(g) {
                Ok(st) => chi_structural(&st, n, mode)?,
                Err(Error::NoParents) => chi_lower_from_density(0.0, n)?,
                Err(e) => return Err(e),
            }
        }
    };
    Ok(1.0 - chi)
}

/// Realization `index` of `cfg`.
pub fn realization(cfg: &EnsembleConfig, index: usize) -> Result<Realization> {
    let params = cfg.sft_params(index);
    let g = generate_sft(&params)?;
    Ok(Realization {
        seed: params.seed,
        one_minus_chi_lb: one_minus_chi_lb(&g, cfg.estimator)?,
        avg_f_nonleaf: avg_f_nonleaf(&g),
    })
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))
}

fn run_in(cfg: &EnsembleConfig, pool: &rayon::ThreadPool) -> Result<EnsembleResult> {
    cfg.validate()?;
    let per_realization: Vec<Realization> = pool.install(|| {
        (0..cfg.r)
            .into_par_iter()
            .map(|i| realization(cfg, i))
            .collect::<Result<_>>()
    })?;

    let r = per_realization.len() as f64;
    let mean = per_realization.iter().map(|x| x.one_minus_chi_lb).sum::<f64>() / r;
    let std_error = if per_realization.len() > 1 {
        let ss: f64 = per_realization
            .iter()
            .map(|x| (x.one_minus_chi_lb - mean).powi(2))
            .sum();
        (ss / (r - 1.0)).sqrt() / r.sqrt()
    } else {
        0.0
    };
    let realized_avg_f_mean = per_realization.iter().map(|x| x.avg_f_nonleaf).sum::<f64>() / r;
    Ok(EnsembleResult {
        config: cfg.clone(),
        mean_one_minus_chi_lb: mean,
        std_error,
        realized_avg_f_mean,
        per_realization,
    })
}

/// Runs `cfg.r` realizations on `workers` threads.
pub fn run_ensemble(cfg: &EnsembleConfig, workers: usize) -> Result<EnsembleResult> {
    run_in(cfg, &pool(workers)?)
}

/// One sweep row: Monte Carlo estimate plus analytic columns. `status` is
/// `"ok"` or the kind of the first error met on the row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: EnsembleConfig,
    pub avg_f_analytic: Option<f64>,
    pub mc_mean: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub analytic_finite: Option<f64>,
    /// Only defined for `s > 2`.
    pub analytic_infinite: Option<f64>,
    pub status: String,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

fn sweep_row(cfg: &EnsembleConfig, pool: &rayon::ThreadPool) -> SweepRow {
    let mut status: Option<&'static str> = None;
    let mut note = |e: &Error| {
        status.get_or_insert(e.kind());
    };

    let mc = run_in(cfg, pool).map_err(|e| note(&e)).ok();
    let avg_f_analytic = avg_f_sft(cfg.s, cfg.f_max).map_err(|e| note(&e)).ok();
    let analytic_finite = chi_sft_finite(cfg.s, cfg.f_max, cfg.n)
        .map(|c| 1.0 - c)
        .map_err(|e| note(&e))
        .ok();
    let analytic_infinite = if cfg.s > 2.0 {
        chi_sft_infinite(cfg.s).map(|c| 1.0 - c).map_err(|e| note(&e)).ok()
    } else {
        None
    };
    SweepRow {
        config: cfg.clone(),
        avg_f_analytic,
        mc_mean: mc.as_ref().map(|m| m.mean_one_minus_chi_lb),
        mc_stderr: mc.as_ref().map(|m| m.std_error),
        analytic_finite,
        analytic_infinite,
        status: status.unwrap_or("ok").to_string(),
    }
}

/// Runs every configuration in order. Row failures are recorded in the row
/// status and never abort the sweep.
pub fn sweep(cfgs: &[EnsembleConfig], workers: usize) -> Result<Vec<SweepRow>> {
    if cfgs.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one configuration".into()));
    }
    let pool = pool(workers)?;
    Ok(cfgs.iter().map(|c| sweep_row(c, &pool)).collect())
}
