use serde::Serialize;

use crate::{Error, Result};

/// Least-squares estimate of a critical exponent from log-log data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaFit {
    pub slope: f64,
    pub intercept: f64,
    /// `(ln offset, ln order_parameter)`, ascending in offset.
    pub window: Vec<(f64, f64)>,
    /// Largest absolute deviation of a window point from the fitted line.
    pub residual: f64,
}

/// Fits `ln(one_minus_chi) = intercept + slope * ln(offset)` by unweighted
/// least squares. `offset` is the distance `|sigma - sigma_c|` to the
/// critical point; the slope estimates the exponent.
pub fn kappa_fit(points: &[(f64, f64)]) -> Result<KappaFit> {
    if points.len() < 3 {
        return Err(Error::OutOfDomain(format!(
            "exponent fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let mut window = Vec::with_capacity(points.len());
    for &(offset, value) in points {
        if !(offset > 0.0 && value > 0.0) || !offset.is_finite() || !value.is_finite() {
            return Err(Error::OutOfDomain(format!(
                "fit points must be positive and finite, got ({offset}, {value})"
            )));
        }
        window.push((offset.ln(), value.ln()));
    }
    window.sort_by(|a, b| a.0.total_cmp(&b.0));
    if window.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::OutOfDomain("fit offsets must be distinct".into()));
    }

    let m = window.len() as f64;
    let mean_x = window.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = window.iter().map(|p| p.1).sum::<f64>() / m;
    let (sxx, sxy) = window.iter().fold((0.0, 0.0), |(sxx, sxy), &(x, y)| {
        let dx = x - mean_x;
        (sxx + dx * dx, sxy + dx * (y - mean_y))
    });
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = window
        .iter()
        .map(|&(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(KappaFit {
        slope,
        intercept,
        window,
        residual,
    })
}
