use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use qtree::efficiency::{
    analyze, analyze_structural_only, chi_dendrimer_inf, chi_exact, chi_lb_dendrimer_inf,
    chi_lb_vicsek_inf, chi_sft_infinite, chi_vicsek_inf, default_t_max, exact_to_f64, kappa_fit,
    time_average, time_series, uniform_grid, zeta, Exact, KappaFit,
};
use qtree::ensemble::{sweep, EnsembleConfig, Estimator};
use qtree::format::{fmt_real, sweep_csv, timeseries_csv};
use qtree::graph::{
    generate_chain, generate_dendrimer, generate_sft, generate_star, generate_vicsek,
    read_edge_list, write_edge_list, SftParams, TreeGraph, FORMAT_HEADER,
};
use qtree::spectral::{
    bin_degeneracies, build_hamiltonian, default_tolerance, eigendecompose, PotentialKind,
};
use qtree::Error;

use crate::manifest::{manifest_path, RunManifest};
use crate::{
    AllRowsFailed, ChiArgs, ClosedFamily, ClosedFormArgs, Cli, Command, Family, FitKappaArgs,
    GenArgs, ReplayArgs, SweepArgs, TimeseriesArgs,
};

struct Outcome {
    out: PathBuf,
    master_seed: Option<u64>,
}

pub fn dispatch(command: Command, argv: Vec<String>) -> Result<()> {
    let start = Instant::now();
    let (name, parameters, outcome) = match command {
        Command::Gen(a) => ("gen", serde_json::to_value(&a)?, cmd_gen(&a)?),
        Command::Chi(a) => ("chi", serde_json::to_value(&a)?, cmd_chi(&a)?),
        Command::Sweep(a) => ("sweep", serde_json::to_value(&a)?, cmd_sweep(&a)?),
        Command::FitKappa(a) => ("fit-kappa", serde_json::to_value(&a)?, cmd_fit_kappa(&a)?),
        Command::Timeseries(a) => ("timeseries", serde_json::to_value(&a)?, cmd_timeseries(&a)?),
        Command::ClosedForm(a) => ("closed-form", serde_json::to_value(&a)?, cmd_closed_form(&a)?),
        Command::Replay(a) => return cmd_replay(&a),
    };
    let manifest = RunManifest {
        format: 1,
        command: name.to_string(),
        argv,
        parameters,
        master_seed: outcome.master_seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: vec![outcome.out.clone()],
        duration_seconds: start.elapsed().as_secs_f64(),
    };
    manifest.write(&manifest_path(&outcome.out))
}

fn write_output(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidParameter(msg.into()).into()
}

fn require<T>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| invalid(format!("--{flag} is required for {family}")))
}

fn read_graph(path: &Path) -> Result<TreeGraph> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_edge_list(BufReader::new(file)).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_potential(spec: &str) -> Result<PotentialKind> {
    match spec {
        "connectivity" => Ok(PotentialKind::Connectivity),
        "adjacency" => Ok(PotentialKind::Adjacency),
        other => match other.strip_prefix("custom=") {
            Some(path) => read_potential_table(Path::new(path)),
            None => Err(invalid(format!(
                "unknown potential '{other}' (connectivity, adjacency or custom=<path>)"
            ))),
        },
    }
}

/// Two columns `f,value`; `#` comments and a non-numeric header line are skipped.
fn read_potential_table(path: &Path) -> Result<PotentialKind> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read potential table {}", path.display()))?;
    let mut table = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
        if fields.len() != 2 {
            return Err(parse_err(format!("expected 'f,value', got '{line}'")).into());
        }
        let f = match fields[0].parse::<usize>() {
            Ok(f) => f,
            Err(_) if table.is_empty() && fields[1].parse::<f64>().is_err() => continue,
            Err(e) => return Err(parse_err(format!("bad functionality '{}': {e}", fields[0])).into()),
        };
        let v: f64 = fields[1]
            .parse()
            .map_err(|e| parse_err(format!("bad value '{}': {e}", fields[1])))?;
        if !v.is_finite() {
            return Err(parse_err(format!("non-finite value for f = {f}")).into());
        }
        if table.insert(f, v).is_some() {
            return Err(parse_err(format!("duplicate entry for f = {f}")).into());
        }
    }
    Ok(PotentialKind::Custom(table))
}

/// `start:stop:step`, stop included up to rounding.
fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| invalid(format!("bad range '{spec}': {e}")))?;
    let [start, stop, step] = parts[..] else {
        return Err(invalid(format!("range '{spec}' must be start:stop:step")));
    };
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(invalid(format!("range '{spec}' needs step > 0 and stop >= start")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn cmd_gen(a: &GenArgs) -> Result<Outcome> {
    let g = match a.family {
        Family::Chain => generate_chain(require(a.n, "n", "chain")?)?,
        Family::Star => generate_star(require(a.n, "n", "star")?)?,
        Family::Dendrimer => generate_dendrimer(
            require(a.f, "f", "dendrimer")?,
            require(a.g, "g", "dendrimer")?,
        )?,
        Family::Vicsek => {
            generate_vicsek(require(a.f, "f", "vicsek")?, require(a.g, "g", "vicsek")?)?
        }
        Family::Sft => {
            let n = require(a.n, "n", "sft")?;
            let mut p = SftParams::new(n, require(a.s, "s", "sft")?, a.seed);
            if let Some(f_max) = a.f_max {
                p = p.with_f_max(f_max);
            }
            generate_sft(&p)?
        }
    };
    let file = File::create(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    let mut w = BufWriter::new(file);
    write_edge_list(&g, &mut w)?;
    w.flush().with_context(|| format!("cannot write {}", a.out.display()))?;
    Ok(Outcome {
        out: a.out.clone(),
        master_seed: (a.family == Family::Sft).then_some(a.seed),
    })
}

fn cmd_chi(a: &ChiArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?;
    let potential = parse_potential(&a.potential)?;
    let report = if a.structural_only {
        analyze_structural_only(&g, &potential)?
    } else {
        match analyze(&g, &potential) {
            Err(e @ Error::SizeLimit { .. }) => {
                return Err(anyhow::Error::new(e).context("rerun with --structural-only"))
            }
            other => other?,
        }
    };
    write_output(&a.out, &(report.to_json() + "\n"))?;
    Ok(Outcome {
        out: a.out.clone(),
        master_seed: None,
    })
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn sweep_configs(a: &SweepArgs) -> Result<Vec<EnsembleConfig>> {
    let grid = match &a.s_range {
        Some(spec) => parse_range(spec)?,
        None => a.s.clone(),
    };
    if grid.is_empty() || a.n.is_empty() {
        return Err(invalid("sweep needs at least one s and one n"));
    }
    let estimator: Estimator = a.estimator.parse()?;
    let mut cfgs = Vec::new();
    for &n in &a.n {
        let r = match (a.r, a.paper_r) {
            (_, true) => (1_000_000 / n.max(1)).max(1),
            (Some(r), false) => r,
            (None, false) => return Err(invalid("either --r or --paper-r is required")),
        };
        for &s in &grid {
            let cfg = EnsembleConfig::new(n, s, r, a.seed).with_estimator(estimator);
            cfgs.push(match a.f_max {
                Some(f_max) => cfg.with_f_max(f_max),
                None => cfg,
            });
        }
    }
    Ok(cfgs)
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome> {
    let cfgs = sweep_configs(a)?;
    let rows = sweep(&cfgs, a.workers.unwrap_or_else(default_workers))?;
    write_output(&a.out, &sweep_csv(&rows))?;
    if rows.iter().all(|r| !r.is_ok()) {
        return Err(AllRowsFailed.into());
    }
    Ok(Outcome {
        out: a.out.clone(),
        master_seed: Some(a.seed),
    })
}

enum Offset {
    Identity,
    Inverse,
    Shift(f64),
}

impl Offset {
    fn parse(spec: &str) -> Result<Self> {
        match spec {
            "identity" => Ok(Offset::Identity),
            "inv" => Ok(Offset::Inverse),
            other => match other.strip_prefix("sub:").map(str::parse::<f64>) {
                Some(Ok(c)) if c.is_finite() => Ok(Offset::Shift(c)),
                _ => Err(invalid(format!(
                    "unknown offset '{other}' (identity, inv or sub:<c>)"
                ))),
            },
        }
    }

    fn apply(&self, x: f64) -> f64 {
        match self {
            Offset::Identity => x,
            Offset::Inverse => 1.0 / x,
            Offset::Shift(c) => x - c,
        }
    }
}

/// Reads `(x, y)` pairs by column name, skipping `#` lines and rows where
/// either field is empty.
fn read_columns(path: &Path, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let Some((_, header)) = lines.next() else {
        return Err(Error::Parse { line: 1, msg: "missing header".into() }.into());
    };
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let col = |name: &str| {
        names.iter().position(|c| *c == name).ok_or_else(|| {
            invalid(format!("column '{name}' not found (have {})", names.join(",")))
        })
    };
    let (xi, yi) = (col(x)?, col(y)?);
    let mut out = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let (Some(xs), Some(ys)) = (fields.get(xi), fields.get(yi)) else {
            return Err(Error::Parse { line: i + 1, msg: "short row".into() }.into());
        };
        if xs.is_empty() || ys.is_empty() {
            continue;
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("bad number '{s}': {e}"),
            })
        };
        out.push((parse(xs)?, parse(ys)?));
    }
    Ok(out)
}

#[derive(Serialize)]
struct KappaOutput<'a> {
    x_column: &'a str,
    y_column: &'a str,
    offset: &'a str,
    points: usize,
    #[serde(flatten)]
    fit: KappaFit,
}

fn cmd_fit_kappa(a: &FitKappaArgs) -> Result<Outcome> {
    let offset = Offset::parse(&a.offset)?;
    let points: Vec<(f64, f64)> = read_columns(&a.input, &a.x_column, &a.y_column)?
        .into_iter()
        .map(|(x, y)| (offset.apply(x), y))
        .filter(|&(x, _)| a.min_offset.is_none_or(|lo| x >= lo))
        .filter(|&(x, _)| a.max_offset.is_none_or(|hi| x <= hi))
        .collect();
    let fit = kappa_fit(&points)?;
    let out = KappaOutput {
        x_column: &a.x_column,
        y_column: &a.y_column,
        offset: &a.offset,
        points: points.len(),
        fit,
    };
    write_output(&a.out, &(serde_json::to_string_pretty(&out)? + "\n"))?;
    Ok(Outcome {
        out: a.out.clone(),
        master_seed: None,
    })
}

fn cmd_timeseries(a: &TimeseriesArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?;
    let potential = parse_potential(&a.potential)?;
    let h = build_hamiltonian(&g, &potential)?;
    let es = eigendecompose(&h)?;
    let sp = bin_degeneracies(&es, default_tolerance(es.eigenvalues()))?;
    let t_max = a.t_max.unwrap_or_else(|| default_t_max(es.eigenvalues()));
    let times = uniform_grid(t_max, a.samples)?;
    let ts = time_series(&sp, &es, &times);
    let avg_alpha = time_average(&ts.abs_alpha_sq, &ts.times)?;
    let avg_pi = time_average(&ts.pi_bar, &ts.times)?;
    write_output(&a.out, &timeseries_csv(&ts, avg_alpha, avg_pi, chi_exact(&sp)))?;
    Ok(Outcome {
        out: a.out.clone(),
        master_seed: None,
    })
}

fn exact_str(r: &Exact) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn cmd_closed_form(a: &ClosedFormArgs) -> Result<Outcome> {
    let mut out = format!("{FORMAT_HEADER}\n");
    match a.family {
        ClosedFamily::Dendrimer | ClosedFamily::Vicsek => {
            if a.f_min < 3 || a.f_max < a.f_min {
                return Err(invalid("closed forms need 3 <= f_min <= f_max"));
            }
            out.push_str(
                "f,avg_f_nonleaf,sigma,chi_inf,chi_lb_inf,one_minus_chi_inf,\
                 one_minus_chi_lb_inf,chi_inf_exact,chi_lb_inf_exact\n",
            );
            for f in a.f_min..=a.f_max {
                let (chi, lb, avg_f) = if a.family == ClosedFamily::Dendrimer {
                    (chi_dendrimer_inf(f)?, chi_lb_dendrimer_inf(f)?, f as f64)
                } else {
                    (chi_vicsek_inf(f)?, chi_lb_vicsek_inf(f)?, (f as f64 + 4.0) / 3.0)
                };
                let (c, l) = (exact_to_f64(&chi), exact_to_f64(&lb));
                let one = Exact::from_integer(1);
                let _ = writeln!(
                    out,
                    "{f},{},{},{},{},{},{},{},{}",
                    fmt_real(avg_f),
                    fmt_real(1.0 / avg_f),
                    fmt_real(c),
                    fmt_real(l),
                    fmt_real(exact_to_f64(&(one - chi))),
                    fmt_real(exact_to_f64(&(one - lb))),
                    exact_str(&chi),
                    exact_str(&lb)
                );
            }
        }
        ClosedFamily::Sft => {
            let grid = if let Some(spec) = &a.log_offsets {
                log_offsets(spec)?.into_iter().map(|d| 2.0 + d).collect()
            } else if let Some(spec) = &a.s_range {
                parse_range(spec)?
            } else {
                a.s.clone()
            };
            if grid.is_empty() {
                return Err(invalid("sft closed form needs --s, --s-range or --log-offsets"));
            }
            out.push_str("s,offset,avg_f_inf,chi_lb_inf,one_minus_chi_lb_inf,status\n");
            for s in grid {
                let row = zeta(s - 1.0)
                    .and_then(|z1| Ok((z1 - 1.0) / (zeta(s)? - 1.0)))
                    .and_then(|avg_f| Ok((avg_f, chi_sft_infinite(s)?)));
                match row {
                    Ok((avg_f, chi)) => {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},ok",
                            fmt_real(s),
                            fmt_real(s - 2.0),
                            fmt_real(avg_f),
                            fmt_real(chi),
                            fmt_real(1.0 - chi)
                        );
                    }
                    Err(e) => {
                        let _ = writeln!(out, "{},{},,,,{}", fmt_real(s), fmt_real(s - 2.0), e.kind());
                    }
                }
            }
        }
    }
    write_output(&a.out, &out)?;
    Ok(Outcome {
        out: a.out.clone(),
        master_seed: None,
    })
}

/// `lo:hi:points`, geometric, both ends included.
fn log_offsets(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, k] = parts[..] else {
        return Err(invalid(format!("log grid '{spec}' must be lo:hi:points")));
    };
    let bad = |e: &dyn std::fmt::Display| invalid(format!("bad log grid '{spec}': {e}"));
    let lo: f64 = lo.parse().map_err(|e| bad(&e))?;
    let hi: f64 = hi.parse().map_err(|e| bad(&e))?;
    let k: usize = k.parse().map_err(|e| bad(&e))?;
    if !(lo > 0.0 && hi > lo && k >= 2) {
        return Err(invalid(format!("log grid '{spec}' needs 0 < lo < hi and points >= 2")));
    }
    let ratio = (hi / lo).ln();
    Ok((0..k)
        .map(|i| lo * (ratio * i as f64 / (k - 1) as f64).exp())
        .collect())
}

fn cmd_replay(a: &ReplayArgs) -> Result<()> {
    let manifest = RunManifest::read(&a.manifest)?;
    let mut argv: Vec<OsString> = vec!["qtree".into()];
    argv.extend(manifest.argv.iter().map(OsString::from));
    if let Some(out) = &a.out {
        argv.push("--out".into());
        argv.push(out.into());
    }
    if let Some(w) = a.workers {
        if manifest.command != "sweep" {
            bail!(invalid("--workers only applies to sweep manifests"));
        }
        argv.push("--workers".into());
        argv.push(w.to_string().into());
    }
    let cli = <Cli as clap::Parser>::try_parse_from(&argv)
        .map_err(|e| invalid(format!("manifest arguments do not parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!(invalid("a manifest cannot replay another replay"));
    }
    let recorded = argv[1..]
        .iter()
        .map(|s| s.to_string_lossy().into_owned())
        .collect();
    dispatch(cli.command, recorded)
}
