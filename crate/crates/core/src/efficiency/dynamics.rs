//! Time-domain return quantities.
//!
//! `alpha(t) = (1/N) sum_j <j|exp(-iHt)|j> = sum_E rho(E) exp(-iEt)` depends on
//! the spectrum only, while `pi(t) = (1/N) sum_j |<j|exp(-iHt)|j>|^2` needs the
//! eigenvectors. Cauchy-Schwarz gives `|alpha(t)|^2 <= pi(t)` at every `t`.

use serde::Serialize;

use crate::spectral::{default_tolerance, EigenSystem, Spectrum};
use crate::{Error, Result};

/// Default number of samples on a time grid.
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub abs_alpha_sq: Vec<f64>,
    pub pi_bar: Vec<f64>,
}

/// `|alpha(t)|^2 = |sum_E rho(E) exp(-iEt)|^2`.
pub fn return_amplitude_series(sp: &Spectrum, times: &[f64]) -> Vec<f64> {
    let densities: Vec<(f64, f64)> = sp.densities().collect();
    times
        .iter()
        .map(|&t| {
            let (re, im) = densities.iter().fold((0.0, 0.0), |(re, im), &(e, rho)| {
                let (sin, cos) = (e * t).sin_cos();
                (re + rho * cos, im - rho * sin)
            });
            re * re + im * im
        })
        .collect()
}

/// `pi(t) = (1/N) sum_j |sum_k exp(-i E_k t) |<j|k>|^2|^2`.
///
/// Eigenpairs are first merged into degeneracy classes (default tolerance),
/// replacing `|<j|k>|^2` by the diagonal of the class projector, which does
/// not depend on the basis chosen inside a degenerate class.
pub fn mean_return_probability_series(es: &EigenSystem, times: &[f64]) -> Vec<f64> {
    let n = es.n();
    let values = es.eigenvalues();
    let vectors = es.eigenvectors();
    let tol = default_tolerance(values);

    let mut class_energy = Vec::new();
    // weights[c * n + j]
    let mut weights: Vec<f64> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || values[i] - values[i - 1] > tol {
            let members = start..i;
            class_energy.push(values[members.clone()].iter().sum::<f64>() / members.len() as f64);
            let offset = weights.len();
            weights.resize(offset + n, 0.0);
            for k in members {
                let col = vectors.column(k);
                for j in 0..n {
                    weights[offset + j] += col[j] * col[j];
                }
            }
            start = i;
        }
    }
    // sum_c w_jc = |<j|j>|^2 = 1 for an orthonormal basis; remove solver drift
    let classes = class_energy.len();
    for j in 0..n {
        let total: f64 = (0..classes).map(|c| weights[c * n + j]).sum();
        if total > 0.0 {
            (0..classes).for_each(|c| weights[c * n + j] /= total);
        }
    }

    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    times
        .iter()
        .map(|&t| {
            re.iter_mut().for_each(|x| *x = 0.0);
            im.iter_mut().for_each(|x| *x = 0.0);
            for (c, &e) in class_energy.iter().enumerate() {
                let (sin, cos) = (e * t).sin_cos();
                let w = &weights[c * n..(c + 1) * n];
                for j in 0..n {
                    re[j] += w[j] * cos;
                    im[j] -= w[j] * sin;
                }
            }
            re.iter().zip(&im).map(|(a, b)| a * a + b * b).sum::<f64>() / n as f64
        })
        .collect()
}

/// Both return quantities on the same grid.
pub fn time_series(sp: &Spectrum, es: &EigenSystem, times: &[f64]) -> TimeSeries {
    TimeSeries {
        times: times.to_vec(),
        abs_alpha_sq: return_amplitude_series(sp, times),
        pi_bar: mean_return_probability_series(es, times),
    }
}

/// Trapezoidal mean of `values` over `[times[0], times[last]]`.
pub fn time_average(values: &[f64], times: &[f64]) -> Result<f64> {
    if values.len() != times.len() {
        return Err(Error::OutOfDomain(format!(
            "{} values for {} times",
            values.len(),
            times.len()
        )));
    }
    if times.len() < 2 {
        return Err(Error::OutOfDomain("time average needs at least 2 samples".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::OutOfDomain("times must be strictly increasing".into()));
    }
    let integral: f64 = times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (v[0] + v[1]) * (t[1] - t[0]))
        .sum();
    Ok(integral / (times[times.len() - 1] - times[0]))
}

/// `samples` equally spaced times on `[0, t_max]`, both ends included.
pub fn uniform_grid(t_max: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 || !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::OutOfDomain(format!(
            "time grid needs t_max > 0 and at least 2 samples, got t_max = {t_max}, samples = {samples}"
        )));
    }
    let step = t_max / (samples - 1) as f64;
    Ok((0..samples).map(|i| i as f64 * step).collect())
}

/// `50 N / (lambda_max - lambda_min)`; a spectrum of zero width uses `50 N`.
pub fn default_t_max(eigenvalues: &[f64]) -> f64 {
    let n = eigenvalues.len().max(1) as f64;
    let lo = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = hi - lo;
    if width > 0.0 && width.is_finite() {
        50.0 * n / width
    } else {
        50.0 * n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efficiency::chi_exact;
    use crate::graph::{generate_chain, generate_star, TreeGraph};
    use crate::spectral::{bin_degeneracies, build_hamiltonian, eigendecompose, PotentialKind};

    fn system(g: &TreeGraph) -> (Spectrum, EigenSystem) {
        let h = build_hamiltonian(g, &PotentialKind::Connectivity).unwrap();
        let es = eigendecompose(&h).unwrap();
        let sp = bin_degeneracies(&es, default_tolerance(es.eigenvalues())).unwrap();
        (sp, es)
    }

    #[test]
    fn unit_at_time_zero() {
        let (sp, es) = system(&generate_star(6).unwrap());
        assert!((return_amplitude_series(&sp, &[0.0])[0] - 1.0).abs() < 1e-14);
        assert!((mean_return_probability_series(&es, &[0.0])[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_class_is_constant() {
        let sp = Spectrum::from_sorted_eigenvalues(&[2.0, 2.0, 2.0], 1e-8).unwrap();
        for v in return_amplitude_series(&sp, &[0.0, 0.7, 13.0, 1e4]) {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn chain_three_long_time_average() {
        let (sp, es) = system(&generate_chain(3).unwrap());
        let times = uniform_grid(200.0, 10_000).unwrap();
        let alpha = return_amplitude_series(&sp, &times);
        let avg = time_average(&alpha, &times).unwrap();
        assert!((avg - 1.0 / 3.0).abs() < 0.01);
        let pi = mean_return_probability_series(&es, &times);
        assert!(time_average(&pi, &times).unwrap() >= chi_exact(&sp) - 1e-3);
    }

    #[test]
    fn star_four_bounds_and_average() {
        let (sp, es) = system(&generate_star(4).unwrap());
        let times = uniform_grid(200.0, 10_000).unwrap();
        let alpha = return_amplitude_series(&sp, &times);
        let pi = mean_return_probability_series(&es, &times);
        assert!(alpha.iter().zip(&pi).all(|(a, p)| *a <= p + 1e-12 && *p <= 1.0 + 1e-12));
        assert!((time_average(&alpha, &times).unwrap() - 0.375).abs() < 0.01);
    }

    #[test]
    fn constant_average_and_errors() {
        let times = uniform_grid(5.0, 11).unwrap();
        assert!((time_average(&[0.25; 11], &times).unwrap() - 0.25).abs() < 1e-15);
        assert!(time_average(&[1.0], &[0.0]).is_err());
        assert!(time_average(&[1.0, 2.0], &[0.0]).is_err());
        assert!(time_average(&[1.0, 2.0], &[1.0, 1.0]).is_err());
        assert!(uniform_grid(0.0, 10).is_err());
        assert!(uniform_grid(1.0, 1).is_err());
    }

    #[test]
    fn default_window() {
        assert_eq!(default_t_max(&[0.0, 1.0, 3.0]), 50.0);
        assert_eq!(default_t_max(&[2.0]), 50.0);
    }
}
