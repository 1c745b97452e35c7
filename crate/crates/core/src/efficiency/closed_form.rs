//! Closed-form efficiency values: the scale-free average functionality, its
//! finite and infinite-size bounds, and the infinite-size limits for
//! dendrimers and Vicsek fractals.

use num_rational::Ratio;
use num_traits::One;

use super::bounds::chi_structural_from_averages;
use super::zeta::zeta;
use crate::{Error, Result};

/// Exact rational used by the deterministic-family limits.
pub type Exact = Ratio<i128>;

const MAX_EXACT_F: u64 = 1_000_000_000;

/// `sum_{f=2}^{f_max} f^(1-s) / sum_{f=2}^{f_max} f^-s`.
pub fn avg_f_sft(s: f64, f_max: usize) -> Result<f64> {
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::OutOfDomain(format!("scale-free exponent needs s > 1, got {s}")));
    }
    if f_max < 2 {
        return Err(Error::OutOfDomain(format!("f_max must be at least 2, got {f_max}")));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for f in (2..=f_max).rev() {
        let w = (f as f64).powf(-s);
        num += f as f64 * w;
        den += w;
    }
    Ok(num / den)
}

/// Infinite-size scale-free bound `1 - 4 (zeta(s) - 1)/(zeta(s-1) - zeta(s))`.
///
/// This is the leading behaviour for `s` slightly above 2; far from the
/// transition it is not a bound and may leave `[0, 1]`.
pub fn chi_sft_infinite(s: f64) -> Result<f64> {
    if !(s > 2.0) || s.is_nan() {
        return Err(Error::OutOfDomain(format!(
            "infinite-size scale-free limit needs s > 2, got {s}"
        )));
    }
    let zs = zeta(s)?;
    let zs1 = zeta(s - 1.0)?;
    Ok(1.0 - 4.0 * (zs - 1.0) / (zs1 - zs))
}

/// Finite-size scale-free bound: the structural bound with `delta = 0` and
/// both averages set to [`avg_f_sft`].
pub fn chi_sft_finite(s: f64, f_max: usize, n: usize) -> Result<f64> {
    let f = avg_f_sft(s, f_max)?;
    if !(f > 2.0) {
        return Err(Error::DegenerateAverage {
            name: "scale-free <f>",
            value: f,
        });
    }
    chi_structural_from_averages(f, f, n)
}

/// Infinite-size leading term `(1 - 1/(<f> - 1))^4`.
pub fn chi_infinite_from_avg_f(avg_f: f64) -> Result<f64> {
    if !(avg_f > 1.0) {
        return Err(Error::DegenerateAverage {
            name: "<f>",
            value: avg_f,
        });
    }
    Ok((1.0 - 1.0 / (avg_f - 1.0)).powi(4))
}

fn check_f(f: u64) -> Result<i128> {
    if f < 3 {
        return Err(Error::OutOfDomain(format!("functionality must be at least 3, got {f}")));
    }
    if f > MAX_EXACT_F {
        return Err(Error::OutOfDomain(format!(
            "functionality {f} exceeds exact-arithmetic range"
        )));
    }
    Ok(i128::from(f))
}

/// Dendrimer limit `(1 - 2/f)^2`.
pub fn chi_dendrimer_inf(f: u64) -> Result<Exact> {
    let f = check_f(f)?;
    let r = Exact::new(f - 2, f);
    Ok(r * r)
}

/// Vicsek-fractal limit `1 - 6 (f - 1)/(f (f + 2) - 2)`.
pub fn chi_vicsek_inf(f: u64) -> Result<Exact> {
    let f = check_f(f)?;
    Ok(Exact::one() - Exact::new(6 * (f - 1), f * (f + 2) - 2))
}

/// Dendrimer lower bound `(1 - 1/(f - 1))^4`.
pub fn chi_lb_dendrimer_inf(f: u64) -> Result<Exact> {
    let f = check_f(f)?;
    let r = Exact::new(f - 2, f - 1);
    Ok((r * r) * (r * r))
}

/// Vicsek-fractal lower bound `(1 - (4f - 5)/(f^2 - 1))^2`.
pub fn chi_lb_vicsek_inf(f: u64) -> Result<Exact> {
    let f = check_f(f)?;
    let r = Exact::one() - Exact::new(4 * f - 5, f * f - 1);
    Ok(r * r)
}

pub fn exact_to_f64(r: &Exact) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn avg_f_examples() {
        for s in [1.5, 2.5, 7.0] {
            assert_eq!(avg_f_sft(s, 2).unwrap(), 2.0);
        }
        assert!((avg_f_sft(80.0, 1000).unwrap() - 2.0).abs() < 1e-12);

        // independent summation in the opposite order
        let (s, f_max) = (2.5, 100);
        let num: f64 = (2..=f_max).map(|f| (f as f64).powf(1.0 - s)).sum();
        let den: f64 = (2..=f_max).map(|f| (f as f64).powf(-s)).sum();
        assert!((avg_f_sft(s, f_max).unwrap() - num / den).abs() < 1e-13);
        assert!(avg_f_sft(1.0, 10).is_err());
        assert!(avg_f_sft(2.5, 1).is_err());
    }

    #[test]
    fn avg_f_decreases_with_s() {
        let vals: Vec<f64> = [1.5, 2.0, 2.5, 3.0, 4.0]
            .iter()
            .map(|&s| avg_f_sft(s, 500).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn sft_infinite_near_transition() {
        let s = 2.01;
        let one_minus = 1.0 - chi_sft_infinite(s).unwrap();
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        let leading = 4.0 * (z2 - 1.0) * (s - 2.0);
        assert!((one_minus - 0.0258).abs() < 1e-3);
        assert!((one_minus - leading).abs() / leading < 0.02);

        let s = 2.1;
        let expected = 1.0 - 4.0 * (zeta(s).unwrap() - 1.0) / (zeta(s - 1.0).unwrap() - zeta(s).unwrap());
        assert_eq!(chi_sft_infinite(s).unwrap(), expected);

        assert!(chi_sft_infinite(2.0 + 1e-9).unwrap() > 1.0 - 1e-8);
        assert!(chi_sft_infinite(2.0).is_err());
        assert!(chi_sft_infinite(1.5).is_err());
    }

    #[test]
    fn sft_finite_limits() {
        for n in [10, 100, 10_000] {
            let v = chi_sft_finite(60.0, n - 1, n).unwrap();
            assert!((v - 1.0 / n as f64).abs() < 1e-9);
        }
        // large n approaches the leading term
        let s = 2.5;
        let f = avg_f_sft(s, 1000).unwrap();
        let big = chi_sft_finite(s, 1000, 1_000_000_000).unwrap();
        assert!((big - chi_infinite_from_avg_f(f).unwrap()).abs() < 1e-8);
        assert!(matches!(
            chi_sft_finite(3.0, 2, 100),
            Err(Error::DegenerateAverage { .. })
        ));
    }

    #[test]
    fn deterministic_limits() {
        assert_eq!(chi_dendrimer_inf(3).unwrap(), Exact::new(1, 9));
        assert_eq!(chi_vicsek_inf(4).unwrap(), Exact::new(2, 11));
        assert_eq!(chi_lb_dendrimer_inf(3).unwrap(), Exact::new(1, 16));
        assert_eq!(chi_lb_vicsek_inf(4).unwrap(), Exact::new(16, 225));
        for f in 3..200 {
            assert!(chi_lb_dendrimer_inf(f).unwrap() <= chi_dendrimer_inf(f).unwrap());
            assert!(chi_lb_vicsek_inf(f).unwrap() <= chi_vicsek_inf(f).unwrap());
        }
        let big = 1_000_000;
        assert!(1.0 - exact_to_f64(&chi_dendrimer_inf(big).unwrap()) < 1e-5);
        assert!(1.0 - exact_to_f64(&chi_vicsek_inf(big).unwrap()) < 1e-5);
        assert!(chi_dendrimer_inf(2).is_err());
        assert!(chi_lb_vicsek_inf(2).is_err());
    }
}
