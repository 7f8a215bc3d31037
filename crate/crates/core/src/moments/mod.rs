//! Truncated moment sequences on `[0, 1]`.
//!
//! A feasible vector `(M_1, ..., M_d)` has two distinguished representations:
//! the upper principal one (contains the atom 1) and the lower principal one
//! (does not). Among all distributions sharing these moments, the upper one
//! minimises `D_min(., mu)` and the lower one maximises it; the lower one also
//! minimises `E[1/(1-X)]`. For `d <= 3` both are available in closed form, and
//! [`numeric`] handles any degree.

mod closed;
pub(crate) mod numeric;

use serde::Serialize;

use crate::distribution::DiscreteDistribution;
use crate::divergence::dmin_discrete;
use crate::{Error, Result, TAU_ONE};

pub use closed::{dminm_closed_form, nu2, nu3};

pub(crate) type Atoms = Vec<(f64, f64)>;

/// Slack allowed on atoms and weights before a representation is declared
/// infeasible; values inside the slack are clamped.
pub const CLAMP_TOL: f64 = 1e-10;

/// Largest reconstruction error accepted for a representation.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

// Weights at or below this are rounding residue and are dropped.
const NEGLIGIBLE_WEIGHT: f64 = 1e-13;

/// First `d` raw moments, with `M_0 = 1` implicit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentVector {
    values: Vec<f64>,
}

impl MomentVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("moment vector needs degree >= 1".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite moment {bad}")));
        }
        Ok(Self { values })
    }

    pub fn degree(&self) -> usize {
        self.values.len()
    }

    /// `M_k`, with `M_0 = 1`.
    pub fn get(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            self.values[k - 1]
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values[0]
    }

    /// The first `d` moments.
    pub fn truncate(&self, d: usize) -> Self {
        assert!(d >= 1 && d <= self.degree(), "cannot truncate degree {} to {d}", self.degree());
        Self { values: self.values[..d].to_vec() }
    }
}

impl std::fmt::Display for MomentVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityStatus {
    Interior,
    Boundary,
    Infeasible,
}

impl std::fmt::Display for FeasibilityStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FeasibilityStatus::Interior => "interior",
            FeasibilityStatus::Boundary => "boundary",
            FeasibilityStatus::Infeasible => "infeasible",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub status: FeasibilityStatus,
    /// The unique representing distribution of a boundary point.
    pub witness: Option<DiscreteDistribution>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

/// `(E[X], ..., E[X^d])`.
pub fn moments_of(dist: &DiscreteDistribution, d: usize) -> MomentVector {
    assert!(d >= 1, "degree must be positive");
    let values = (1..=d).map(|k| dist.expect(|x| x.powi(k as i32))).collect();
    MomentVector { values }
}

/// Moments of `scale * X` for `X ~ Be(alpha, beta)`.
pub fn beta_moments(alpha: f64, beta: f64, scale: f64, d: usize) -> Result<MomentVector> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParameter(format!("beta parameters must be positive, got ({alpha}, {beta})")));
    }
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::InvalidParameter(format!("scale {scale} outside (0, 1]")));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("moment vector needs degree >= 1".into()));
    }
    let mut ratio = 1.0;
    let values = (0..d)
        .map(|k| {
            let k = k as f64;
            ratio *= scale * (alpha + k) / (alpha + beta + k);
            ratio
        })
        .collect();
    Ok(MomentVector { values })
}

/// Clamps a raw representation into a distribution and checks that it
/// reproduces `m`.
fn finalize(m: &MomentVector, raw: Atoms) -> Result<DiscreteDistribution> {
    let mut atoms = Vec::with_capacity(raw.len());
    for (x, w) in raw {
        if !x.is_finite() || !w.is_finite() {
            return Err(Error::InfeasibleMoments(format!("{m}: non-finite representation")));
        }
        if w < -CLAMP_TOL {
            return Err(Error::InfeasibleMoments(format!("{m}: negative weight {w} at {x}")));
        }
        if w <= NEGLIGIBLE_WEIGHT {
            continue;
        }
        if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&x) {
            return Err(Error::InfeasibleMoments(format!("{m}: atom {x} outside [0, 1]")));
        }
        atoms.push((x.clamp(0.0, 1.0), w));
    }
    if atoms.is_empty() {
        return Err(Error::InfeasibleMoments(format!("{m}: empty representation")));
    }
    let dist = DiscreteDistribution::from_atoms(atoms);
    let rebuilt = moments_of(&dist, m.degree());
    let err = rebuilt.values.iter().zip(&m.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if err > RECONSTRUCTION_TOL {
        return Err(Error::InfeasibleMoments(format!("{m}: representation misses the moments by {err:e}")));
    }
    Ok(dist)
}

fn representation(m: &MomentVector, side: Side, closed_forms: bool) -> Result<DiscreteDistribution> {
    let raw = match (side, closed_forms && m.degree() <= 3) {
        (Side::Upper, true) => closed::upper(m)?,
        (Side::Lower, true) => closed::lower(m)?,
        (side, _) => numeric::principal(m, side)?,
    };
    finalize(m, raw)
}

/// Upper principal representation: the solution with `ceil(d/2) + 1` atoms
/// that includes 1 (and 0 for odd `d`). Zero-weight atoms are dropped.
pub fn upper_principal(m: &MomentVector) -> Result<DiscreteDistribution> {
    representation(m, Side::Upper, true)
}

/// Lower principal representation: `ceil((d+1)/2)` atoms, excluding 1, with an
/// atom at 0 for even `d`.
pub fn lower_principal(m: &MomentVector) -> Result<DiscreteDistribution> {
    representation(m, Side::Lower, true)
}

/// [`upper_principal`] through the general-degree solver, whatever `d` is.
pub fn upper_principal_numeric(m: &MomentVector) -> Result<DiscreteDistribution> {
    representation(m, Side::Upper, false)
}

/// [`lower_principal`] through the general-degree solver, whatever `d` is.
pub fn lower_principal_numeric(m: &MomentVector) -> Result<DiscreteDistribution> {
    representation(m, Side::Lower, false)
}

/// Classifies `m` by constructing both principal representations.
///
/// A boundary point is one with a representation of index at most `d/2`;
/// it is then represented uniquely and the representation is returned.
pub fn feasibility(m: &MomentVector) -> Feasibility {
    let (upper, lower) = match (upper_principal(m), lower_principal(m)) {
        (Ok(u), Ok(l)) => (u, l),
        _ => return Feasibility { status: FeasibilityStatus::Infeasible, witness: None },
    };
    let half = m.degree() as f64 / 2.0;
    if upper.index() <= half {
        Feasibility { status: FeasibilityStatus::Boundary, witness: Some(upper) }
    } else if lower.index() <= half {
        Feasibility { status: FeasibilityStatus::Boundary, witness: Some(lower) }
    } else {
        Feasibility { status: FeasibilityStatus::Interior, witness: None }
    }
}

/// `D^(d)_min(m, mu)`: the infimum of `D_min(F, mu)` over all `F` with
/// moments `m`, attained at the upper principal representation.
pub fn dminm(m: &MomentVector, mu: f64) -> Result<f64> {
    let upper = upper_principal(m)?;
    if m.mean() >= mu {
        return Ok(0.0);
    }
    Ok(dmin_discrete(&upper, mu).value)
}

/// `D^(d)_min` of a vector of empirical moments that may sit a rounding
/// error outside the moment space.
///
/// The mean is clamped into `[0, 1]`; if the full vector is still
/// infeasible, the highest moments are dropped one at a time.
pub fn dminm_clamped(m: &MomentVector, mu: f64) -> f64 {
    if m.mean() >= mu {
        return 0.0;
    }
    for d in (2..=m.degree()).rev() {
        if let Ok(v) = dminm(&m.truncate(d), mu) {
            return v;
        }
    }
    let m1 = MomentVector { values: vec![m.mean().clamp(0.0, 1.0)] };
    dminm(&m1, mu).expect("a mean in [0, 1] is always feasible")
}

/// `sup_{F: m(F) = m} D_min(F, mu) - D^(d)_min(m, mu)`, attained at the lower
/// principal representation.
pub fn dmin_sup_gap(m: &MomentVector, mu: f64) -> Result<f64> {
    let lower = lower_principal(m)?;
    let inf = dminm(m, mu)?;
    if inf == 0.0 {
        return Ok(dmin_discrete(&lower, mu).value);
    }
    if inf.is_infinite() {
        return Err(Error::Precondition(format!("gap is undefined at mu = {mu}: both extremes are infinite")));
    }
    Ok((dmin_discrete(&lower, mu).value - inf).max(0.0))
}

/// `min_{F: m(F) = m} E_F[1/(1-X)]`, attained at the lower principal
/// representation; `+inf` if that representation has an atom at 1.
pub fn min_reciprocal_expectation(m: &MomentVector) -> Result<f64> {
    let lower = lower_principal(m)?;
    if lower.support().iter().any(|&x| x >= 1.0 - TAU_ONE) {
        return Ok(f64::INFINITY);
    }
    Ok(lower.expect(|x| 1.0 / (1.0 - x)))
}
