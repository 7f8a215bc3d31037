//! The six-row beta divergence table: `D^(1..3)_min` from analytic moments,
//! a Monte Carlo plug-in `D_min`, and whether `E[1/(1-X)] <= 1/(1-mu)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distribution::DiscreteDistribution;
use crate::divergence::{dmin_discrete, dmin_samples};
use crate::moments::numeric::gauss_rule;
use crate::moments::{beta_moments, dminm};
use crate::simulator::ArmSpec;
use crate::{Error, Result};

/// One row of the table with its published values.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub label: &'static str,
    pub alpha: f64,
    pub beta: f64,
    pub scale: f64,
    pub mu: f64,
    /// `D^(1)`, `D^(2)`, `D^(3)`, `D_min` as printed (3 significant digits).
    pub reference: [f64; 4],
    pub reference_condition: bool,
}

impl TableRow {
    pub fn spec(&self) -> ArmSpec {
        if self.scale == 1.0 {
            ArmSpec::Beta { alpha: self.alpha, beta: self.beta }
        } else {
            ArmSpec::ScaledBeta { alpha: self.alpha, beta: self.beta, scale: self.scale }
        }
    }
}

pub const ROWS: [TableRow; 6] = [
    row("Be(2,2)", 2.0, 2.0, 1.0, 0.6, [0.0204, 0.0703, 0.0843, 0.0984], false),
    row("Be(0.5,0.5)", 0.5, 0.5, 1.0, 0.6, [0.0204, 0.0366, 0.0400, 0.0408], false),
    row("Be(1,3)", 1.0, 3.0, 1.0, 0.6, [0.253, 0.459, 0.522, 0.583], true),
    row("Be(0.25,0.75)", 0.25, 0.75, 1.0, 0.6, [0.253, 0.348, 0.391, 0.431], false),
    row("Be(2,2)/2", 2.0, 2.0, 0.5, 0.3, [0.00617, 0.0373, 0.0490, 0.0576], true),
    row("Be(0.5,0.5)/2", 0.5, 0.5, 0.5, 0.3, [0.00617, 0.0239, 0.0337, 0.0401], true),
];

const fn row(
    label: &'static str,
    alpha: f64,
    beta: f64,
    scale: f64,
    mu: f64,
    reference: [f64; 4],
    reference_condition: bool,
) -> TableRow {
    TableRow { label, alpha, beta, scale, mu, reference, reference_condition }
}

/// Computed values for one row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableResult {
    pub dist: String,
    pub mean: f64,
    pub mu: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub dmin: f64,
    pub condition: bool,
}

/// `E[1/(1 - cX)]` for `X ~ Be(alpha, beta)`; infinite when `c = 1` and
/// `beta <= 1`.
///
/// For `c < 1` this is the hypergeometric series `2F1(1, alpha; alpha+beta; c)`,
/// summed until the terms drop below machine precision.
pub fn beta_reciprocal_mean(alpha: f64, beta: f64, scale: f64) -> f64 {
    if scale >= 1.0 {
        return if beta > 1.0 { (alpha + beta - 1.0) / (beta - 1.0) } else { f64::INFINITY };
    }
    let (mut term, mut sum, mut k) = (1.0, 1.0, 0.0);
    while term > f64::EPSILON * sum {
        term *= scale * (alpha + k) / (alpha + beta + k);
        sum += term;
        k += 1.0;
    }
    sum
}

/// `E[1/(1-X)] <= 1/(1-mu)` for the row's law.
pub fn condition(row: &TableRow) -> bool {
    beta_reciprocal_mean(row.alpha, row.beta, row.scale) <= 1.0 / (1.0 - row.mu)
}

/// Moment divergences `D^(1..3)_min` from the analytic moments.
pub fn moment_columns(row: &TableRow) -> Result<[f64; 3]> {
    let m = beta_moments(row.alpha, row.beta, row.scale, 3)?;
    Ok([dminm(&m.truncate(1), row.mu)?, dminm(&m.truncate(2), row.mu)?, dminm(&m, row.mu)?])
}

/// Plug-in `D_min` of `samples` draws from the row's law.
pub fn monte_carlo_dmin(row: &TableRow, samples: usize, seed: u64) -> Result<f64> {
    let sampler = row.spec().sampler()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..samples).map(|_| sampler.sample(&mut rng)).collect();
    Ok(dmin_samples(&xs, row.mu)?.value)
}

/// `nodes`-point Gauss rule of `scale * X`, `X ~ Be(alpha, beta)`, from the
/// shifted Jacobi recurrence.
pub fn beta_gauss_rule(alpha: f64, beta: f64, scale: f64, nodes: usize) -> Result<DiscreteDistribution> {
    beta_moments(alpha, beta, scale, 1)?;
    if nodes == 0 {
        return Err(Error::InvalidParameter("quadrature needs at least one node".into()));
    }
    // Jacobi weight (1-t)^a (1+t)^b on [-1, 1] with x = (1+t)/2
    let (a, b) = (beta - 1.0, alpha - 1.0);
    let mut rec_a = Vec::with_capacity(nodes);
    let mut rec_b = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let t = if k == 0.0 { (b - a) / (a + b + 2.0) } else { (b - a) * (a + b) / (s * (s + 2.0)) };
        rec_a.push(0.5 * (1.0 + t));
        let u = if k == 0.0 {
            1.0
        } else if k == 1.0 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
        } else {
            4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0))
        };
        rec_b.push(if k == 0.0 { 1.0 } else { 0.25 * u });
    }
    let atoms = gauss_rule(&rec_a, &rec_b).into_iter().map(|(x, w)| (scale * x.clamp(0.0, 1.0), w)).collect();
    Ok(DiscreteDistribution::from_atoms(atoms))
}

/// `D_min` of the row's law by Gauss-Jacobi quadrature.
pub fn quadrature_dmin(row: &TableRow, nodes: usize) -> Result<f64> {
    let rule = beta_gauss_rule(row.alpha, row.beta, row.scale, nodes)?;
    Ok(dmin_discrete(&rule, row.mu).value)
}

pub fn compute(row: &TableRow, samples: usize, seed: u64) -> Result<TableResult> {
    let [d1, d2, d3] = moment_columns(row)?;
    Ok(TableResult {
        dist: row.label.to_string(),
        mean: row.spec().mean(),
        mu: row.mu,
        d1,
        d2,
        d3,
        dmin: monte_carlo_dmin(row, samples, seed)?,
        condition: condition(row),
    })
}
