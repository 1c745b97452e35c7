//! Text output shared by the command-line front end: 17-significant-digit
//! reals, spectrum, sweep and time-series CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serializer;

use crate::efficiency::TimeSeries;
use crate::ensemble::SweepRow;
use crate::graph::FORMAT_HEADER;
use crate::spectral::Spectrum;

/// Scientific notation with 17 significant digits, e.g. `3.7500000000000000e-1`.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

/// Serializes a finite real as a JSON number with 17 significant digits and a
/// non-finite one as `null`.
pub fn serialize_real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        let n = serde_json::Number::from_str(&fmt_real(*x)).map_err(serde::ser::Error::custom)?;
        s.serialize_some(&n)
    } else {
        s.serialize_none()
    }
}

pub fn serialize_opt_real<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => serialize_real(v, s),
        None => s.serialize_none(),
    }
}

/// `eigenvalue,multiplicity,density`, ascending.
pub fn spectrum_csv(sp: &Spectrum) -> String {
    let mut out = format!("{FORMAT_HEADER}\neigenvalue,multiplicity,density\n");
    let n = sp.n() as f64;
    for c in sp.classes() {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_real(c.value),
            c.multiplicity,
            fmt_real(c.multiplicity as f64 / n)
        );
    }
    out
}

pub const SWEEP_COLUMNS: &str = "s,n,f_max,r,avg_f_analytic,one_minus_chi_mc_mean,\
one_minus_chi_mc_stderr,one_minus_chi_analytic_finite,one_minus_chi_analytic_infinite,status";

/// Sweep table; missing values are empty fields.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{FORMAT_HEADER}\n{SWEEP_COLUMNS}\n");
    for row in rows {
        let c = &row.config;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_real(c.s),
            c.n,
            c.f_max,
            c.r,
            fmt_opt(row.avg_f_analytic),
            fmt_opt(row.mc_mean),
            fmt_opt(row.mc_stderr),
            fmt_opt(row.analytic_finite),
            fmt_opt(row.analytic_infinite),
            row.status
        );
    }
    out
}

/// `t,abs_alpha_sq,pi_bar` followed by a comment row with both time
/// averages and `chi_exact`.
pub fn timeseries_csv(ts: &TimeSeries, avg_alpha: f64, avg_pi: f64, chi_exact: f64) -> String {
    let mut out = format!("{FORMAT_HEADER}\nt,abs_alpha_sq,pi_bar\n");
    for ((t, a), p) in ts.times.iter().zip(&ts.abs_alpha_sq).zip(&ts.pi_bar) {
        let _ = writeln!(out, "{},{},{}", fmt_real(*t), fmt_real(*a), fmt_real(*p));
    }
    let _ = writeln!(
        out,
        "# avg_abs_alpha_sq={} avg_pi_bar={} chi_exact={}",
        fmt_real(avg_alpha),
        fmt_real(avg_pi),
        fmt_real(chi_exact)
    );
    out
}
