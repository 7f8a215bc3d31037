use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use dmed_core::divergence::dmin_discrete;
use dmed_core::moments::{dmin_sup_gap, feasibility, moments_of};
use dmed_core::simulator::{aggregate, run_replications};
use dmed_core::table::{self, ROWS};
use dmed_core::{lower_principal, upper_principal, DiscreteDistribution, DivergenceResult, MomentVector};
use serde::Serialize;
use serde_json::json;

use crate::config::SimConfig;
use crate::error::CliError;
use crate::format::sig3;

pub const TABLE_SEED: u64 = 20_240_601;

fn print_json(value: &serde_json::Value) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    let written = serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from).and_then(|()| writeln!(out));
    match written {
        // a closed pipe (e.g. `| head`) is not an error
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn dist_json(d: &DiscreteDistribution) -> serde_json::Value {
    json!({ "support": d.support(), "weights": d.weights() })
}

fn divergence_json(r: &DivergenceResult) -> serde_json::Value {
    // serde_json has no infinity; spell it out
    let value = if r.value.is_infinite() { json!("inf") } else { json!(r.value) };
    json!({ "value": value, "nu_star": r.nu_star, "branch": r.branch().to_string() })
}

fn moment_vector(values: &[f64]) -> Result<MomentVector, CliError> {
    Ok(MomentVector::new(values.to_vec())?)
}

fn check_mu(mu: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&mu) {
        Ok(())
    } else {
        Err(CliError::Parse(format!("mu = {mu} outside [0, 1]")))
    }
}

/// Parses `"x:w,x:w"`.
pub fn parse_dist(text: &str) -> Result<DiscreteDistribution, CliError> {
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, w) = part
            .split_once(':')
            .ok_or_else(|| CliError::Parse(format!("atom {part:?} is not of the form x:w")))?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| CliError::Parse(format!("bad number {s:?} in {part:?}")));
        support.push(num(x)?);
        weights.push(num(w)?);
    }
    Ok(DiscreteDistribution::new(support, weights)?)
}

pub fn dmin_moments(values: &[f64], mu: f64) -> Result<(), CliError> {
    check_mu(mu)?;
    let m = moment_vector(values)?;
    let status = feasibility(&m).status;
    let upper = upper_principal(&m)?;
    let lower = lower_principal(&m)?;
    let r = dmin_discrete(&upper, mu);
    let mut out = divergence_json(&r);
    out["moments"] = json!(m.values());
    out["mu"] = json!(mu);
    out["feasibility"] = json!(status.to_string());
    out["upper"] = dist_json(&upper);
    out["lower"] = dist_json(&lower);
    out["gap"] = match dmin_sup_gap(&m, mu) {
        Ok(g) if g.is_finite() => json!(g),
        Ok(_) => json!("inf"),
        Err(_) => serde_json::Value::Null,
    };
    print_json(&out)
}

pub fn dmin_dist(text: &str, mu: f64) -> Result<(), CliError> {
    check_mu(mu)?;
    let d = parse_dist(text)?;
    let mut out = divergence_json(&dmin_discrete(&d, mu));
    out["dist"] = dist_json(&d);
    out["mu"] = json!(mu);
    print_json(&out)
}

pub fn rep(values: &[f64]) -> Result<(), CliError> {
    let m = moment_vector(values)?;
    let status = feasibility(&m).status;
    let upper = upper_principal(&m)?;
    let lower = lower_principal(&m)?;
    let side = |d: &DiscreteDistribution| {
        let mut v = dist_json(d);
        v["reconstructed"] = json!(moments_of(d, m.degree()).values());
        v
    };
    print_json(&json!({
        "moments": m.values(),
        "feasibility": status.to_string(),
        "upper": side(&upper),
        "lower": side(&lower),
    }))
}

#[derive(Serialize)]
struct RoundedRow {
    dist: String,
    mean: String,
    mu: String,
    d1: String,
    d2: String,
    d3: String,
    dmin: String,
    condition: bool,
}

pub fn table1(out: Option<&Path>, seed: u64, samples: usize) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Parse("--samples must be positive".into()));
    }
    let mut rows = Vec::new();
    for (i, row) in ROWS.iter().enumerate() {
        rows.push(table::compute(row, samples, seed.wrapping_add(i as u64))?);
    }
    match out {
        Some(path) => {
            let mut w = csv::Writer::from_path(path)?;
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        None => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            for r in rows {
                w.serialize(RoundedRow {
                    dist: r.dist,
                    mean: sig3(r.mean),
                    mu: sig3(r.mu),
                    d1: sig3(r.d1),
                    d2: sig3(r.d2),
                    d3: sig3(r.d3),
                    dmin: sig3(r.dmin),
                    condition: r.condition,
                })?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub struct Overrides {
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub horizon: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    policy: &'a str,
    checkpoint: u64,
    mean: f64,
    stderr: f64,
    runs: usize,
}

#[derive(Serialize)]
struct TraceRow<'a> {
    policy: &'a str,
    run: usize,
    seed: u64,
    checkpoint: u64,
    regret: f64,
}

pub fn simulate(config: &Path, o: Overrides) -> Result<(), CliError> {
    let text = fs::read_to_string(config).map_err(|e| CliError::Io(format!("{}: {e}", config.display())))?;
    let mut cfg = SimConfig::parse(&text).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", config.display())),
        other => other,
    })?;
    if let Some(seed) = o.seed {
        cfg.master_seed = seed;
    }
    if let Some(runs) = o.runs {
        if runs == 0 {
            return Err(CliError::Parse("--runs must be at least 1".into()));
        }
        cfg.runs = runs;
    }
    if let Some(horizon) = o.horizon {
        if horizon < cfg.arms.len() as u64 {
            return Err(CliError::Parse(format!("--horizon {horizon} is shorter than the {} arms", cfg.arms.len())));
        }
        cfg.horizon = horizon;
    }
    let dir = o.out.or(cfg.output.clone()).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;

    let mut summary = csv::Writer::from_path(dir.join("summary.csv"))?;
    let mut traces = csv::Writer::from_path(dir.join("traces.csv"))?;
    for kind in &cfg.policies {
        let name = kind.to_string();
        let runs = run_replications(&cfg.arms, *kind, cfg.horizon, cfg.runs, cfg.master_seed)?;
        let s = aggregate(&runs)?;
        for (i, &checkpoint) in s.checkpoints.iter().enumerate() {
            summary.serialize(SummaryRow { policy: &name, checkpoint, mean: s.mean[i], stderr: s.stderr[i], runs: s.runs })?;
        }
        for (run, t) in runs.iter().enumerate() {
            for (&checkpoint, &regret) in t.checkpoints.iter().zip(&t.regret) {
                traces.serialize(TraceRow { policy: &name, run, seed: t.seed, checkpoint, regret })?;
            }
        }
        eprintln!("{name}: mean regret {:.3} ± {:.3} at n = {}", s.final_mean(), s.final_stderr(), cfg.horizon);
    }
    summary.flush()?;
    traces.flush()?;
    Ok(())
}
