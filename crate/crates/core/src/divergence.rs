//! `D_min(F, mu)`: the smallest KL divergence from `F` to any distribution on
//! `[0, 1]` whose mean is at least `mu`.
//!
//! Only the dual is computed. For `E_F[X] < mu < 1`,
//!
//! ```text
//! D_min(F, mu) = max_{0 <= nu <= 1/(1-mu)} E_F[log(1 - (X - mu) nu)]
//! ```
//!
//! The objective is concave in `nu` and its derivative
//! `E_F[(mu - X) / (1 - (X - mu) nu)]` is strictly decreasing, positive at
//! `nu = 0`. The maximiser sits on the right end of the domain exactly when
//! `E_F[1/(1-X)] <= 1/(1-mu)`; otherwise it is the unique interior root of the
//! derivative, located here by bisection.

use serde::Serialize;

use crate::distribution::DiscreteDistribution;
use crate::{Error, Result, TAU_ONE};

/// Absolute tolerance on `nu` for the bisection.
pub const NU_TOL: f64 = 1e-12;

const MAX_BISECTIONS: usize = 400;

/// Which case of the three-way split produced a [`DivergenceResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `E_F[X] >= mu`.
    Zero,
    /// `E_F[X] < mu = 1`.
    Infinite,
    /// Maximiser at `nu = 1/(1-mu)`.
    Boundary,
    /// Maximiser strictly inside the domain.
    Interior,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Zero => "zero",
            Branch::Infinite => "infinite",
            Branch::Boundary => "boundary",
            Branch::Interior => "interior",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceResult {
    /// Divergence in nats, possibly `+inf`.
    pub value: f64,
    pub nu_star: f64,
    pub at_boundary: bool,
    pub infinite: bool,
}

impl DivergenceResult {
    const ZERO: Self = Self { value: 0.0, nu_star: 0.0, at_boundary: false, infinite: false };
    const INFINITE: Self = Self { value: f64::INFINITY, nu_star: 0.0, at_boundary: false, infinite: true };

    pub fn branch(&self) -> Branch {
        if self.infinite {
            Branch::Infinite
        } else if self.at_boundary {
            Branch::Boundary
        } else if self.nu_star == 0.0 {
            Branch::Zero
        } else {
            Branch::Interior
        }
    }
}

fn nu_upper(mu: f64) -> f64 {
    1.0 / (1.0 - mu)
}

fn check_mu(mu: f64) -> Result<()> {
    if (0.0..=1.0).contains(&mu) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("mu = {mu} outside [0, 1]")))
    }
}

// The routines below work on any weighted atom stream so the sample-list path
// can skip sorting and merging.

fn objective<I>(atoms: I, mu: f64, nu: f64) -> f64
where
    I: Iterator<Item = (f64, f64)>,
{
    let at_upper = mu < 1.0 && nu == nu_upper(mu);
    let mut total = 0.0;
    for (x, w) in atoms {
        // At the right end, 1 - (x - mu) nu equals (1 - x) / (1 - mu) exactly.
        let arg = if at_upper { (1.0 - x) / (1.0 - mu) } else { 1.0 - (x - mu) * nu };
        if arg <= 0.0 {
            return f64::NEG_INFINITY;
        }
        total += w * arg.ln();
    }
    total
}

fn derivative<I>(atoms: I, mu: f64, nu: f64) -> f64
where
    I: Iterator<Item = (f64, f64)>,
{
    atoms.map(|(x, w)| w * (mu - x) / (1.0 - (x - mu) * nu)).sum()
}

fn reciprocal_condition<I>(atoms: I, mu: f64) -> bool
where
    I: Iterator<Item = (f64, f64)>,
{
    let mut total = 0.0;
    for (x, w) in atoms {
        if x >= 1.0 - TAU_ONE {
            return false;
        }
        total += w / (1.0 - x);
    }
    total <= nu_upper(mu)
}

fn bisect_root<I>(atoms: I, mu: f64) -> f64
where
    I: Iterator<Item = (f64, f64)> + Clone,
{
    let upper = nu_upper(mu);
    let mut lo = 0.0;
    let mut hi = upper - 1e-15 * upper;
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= NU_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if derivative(atoms.clone(), mu, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn dmin_atoms<I>(atoms: I, mean: f64, mu: f64) -> DivergenceResult
where
    I: Iterator<Item = (f64, f64)> + Clone,
{
    if mean >= mu {
        return DivergenceResult::ZERO;
    }
    if mu >= 1.0 {
        return DivergenceResult::INFINITE;
    }
    if reciprocal_condition(atoms.clone(), mu) {
        let nu = nu_upper(mu);
        let log_term: f64 = atoms.map(|(x, w)| w * (-x).ln_1p()).sum();
        let value = (log_term - (-mu).ln_1p()).max(0.0);
        return DivergenceResult { value, nu_star: nu, at_boundary: true, infinite: false };
    }
    let nu = bisect_root(atoms.clone(), mu);
    let value = objective(atoms, mu, nu).max(0.0);
    DivergenceResult { value, nu_star: nu, at_boundary: false, infinite: false }
}

/// `E_F[log(1 - (X - mu) nu)]`, or `-inf` when some atom makes the logarithm
/// argument nonpositive.
pub fn dual_objective(dist: &DiscreteDistribution, mu: f64, nu: f64) -> Result<f64> {
    check_mu(mu)?;
    let upper = if mu < 1.0 { nu_upper(mu) } else { 0.0 };
    if !(0.0..=upper).contains(&nu) {
        return Err(Error::NuOutOfDomain { nu, upper });
    }
    Ok(objective(dist.atoms(), mu, nu))
}

/// Derivative of [`dual_objective`] in `nu`.
pub fn dual_derivative(dist: &DiscreteDistribution, mu: f64, nu: f64) -> f64 {
    derivative(dist.atoms(), mu, nu)
}

/// `E_F[1/(1-X)] <= 1/(1-mu)`; false whenever an atom sits at 1.
pub fn boundary_condition(dist: &DiscreteDistribution, mu: f64) -> bool {
    reciprocal_condition(dist.atoms(), mu)
}

/// The maximiser of [`dual_objective`] over `[0, 1/(1-mu)]`.
pub fn nu_star(dist: &DiscreteDistribution, mu: f64) -> Result<f64> {
    let mean = dist.mean();
    if mean >= mu || mu >= 1.0 {
        return Err(Error::Precondition(format!("nu_star needs mean < mu < 1, got mean = {mean}, mu = {mu}")));
    }
    if boundary_condition(dist, mu) {
        Ok(nu_upper(mu))
    } else {
        Ok(bisect_root(dist.atoms(), mu))
    }
}

/// `D_min(F, mu)` for a finitely supported `F`.
///
/// `mu` outside `[0, 1]` is clamped to the interval.
pub fn dmin_discrete(dist: &DiscreteDistribution, mu: f64) -> DivergenceResult {
    dmin_atoms(dist.atoms(), dist.mean(), mu.clamp(0.0, 1.0))
}

/// Plug-in estimate of `D_min` from a sample: the divergence of the empirical
/// distribution.
pub fn dmin_empirical_plugin(samples: &[f64], mu: f64) -> Result<DivergenceResult> {
    let dist = DiscreteDistribution::empirical(samples)?;
    Ok(dmin_discrete(&dist, mu))
}

/// Same value as [`dmin_empirical_plugin`] without building the merged
/// distribution. Samples are assumed to lie in `[0, 1]`.
pub fn dmin_samples(samples: &[f64], mu: f64) -> Result<DivergenceResult> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let w = 1.0 / samples.len() as f64;
    let mean = samples.iter().sum::<f64>() * w;
    Ok(dmin_atoms(samples.iter().map(move |&x| (x, w)), mean, mu.clamp(0.0, 1.0)))
}
