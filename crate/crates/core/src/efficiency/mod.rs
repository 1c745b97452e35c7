//! Transport efficiency `chi`, its lower bounds, closed-form limits, the
//! critical-exponent fit and the time-domain return quantities.

mod bounds;
mod closed_form;
mod dynamics;
mod kappa;
mod report;
mod zeta;

pub use bounds::{
    chi_exact, chi_lower_from_density, chi_structural, chi_structural_from_averages,
    rho_star_structural, DeltaMode,
};
pub use closed_form::{
    avg_f_sft, chi_dendrimer_inf, chi_infinite_from_avg_f, chi_lb_dendrimer_inf,
    chi_lb_vicsek_inf, chi_sft_finite, chi_sft_infinite, chi_vicsek_inf, exact_to_f64, Exact,
};
pub use dynamics::{
    default_t_max, mean_return_probability_series, return_amplitude_series, time_average,
    time_series, uniform_grid, TimeSeries, DEFAULT_SAMPLES,
};
pub use kappa::{kappa_fit, KappaFit};
pub use report::{analyze, analyze_structural_only, EfficiencyReport, MultiplicitySource};
pub use zeta::zeta;
