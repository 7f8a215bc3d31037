//! Closed-form principal representations and `D^(d)_min` for `d <= 3`.

use super::{Atoms, MomentVector};
use crate::{Error, Result};

/// Below this, `M_1 - M_2` (and friends) are treated as zero and the
/// degenerate branch is taken.
pub(crate) const DEGENERATE_TOL: f64 = 1e-12;

fn infeasible(m: &MomentVector, why: &str) -> Error {
    Error::InfeasibleMoments(format!("{m}: {why}"))
}

pub(crate) fn upper(m: &MomentVector) -> Result<Atoms> {
    let m1 = m.get(1);
    match m.degree() {
        1 => Ok(vec![(0.0, 1.0 - m1), (1.0, m1)]),
        2 => {
            let m2 = m.get(2);
            let den = 1.0 - 2.0 * m1 + m2;
            if den < DEGENERATE_TOL {
                return Ok(vec![(1.0, 1.0)]);
            }
            Ok(vec![((m1 - m2) / (1.0 - m1), (1.0 - m1).powi(2) / den), (1.0, (m2 - m1 * m1) / den)])
        }
        3 => {
            let (m2, m3) = (m.get(2), m.get(3));
            if m1 - m2 < DEGENERATE_TOL {
                return Ok(vec![(0.0, 1.0 - m1), (1.0, m1)]);
            }
            let den = m1 - 2.0 * m2 + m3;
            if m2 - m3 <= 0.0 || den <= 0.0 {
                return Err(infeasible(m, "no three-point upper representation"));
            }
            let f2 = (m1 - m2).powi(3) / ((m2 - m3) * den);
            let f3 = (m1 * m3 - m2 * m2) / den;
            Ok(vec![(0.0, 1.0 - f2 - f3), ((m2 - m3) / (m1 - m2), f2), (1.0, f3)])
        }
        d => Err(Error::Precondition(format!("closed forms cover d <= 3, got d = {d}"))),
    }
}

pub(crate) fn lower(m: &MomentVector) -> Result<Atoms> {
    let m1 = m.get(1);
    match m.degree() {
        1 => Ok(vec![(m1, 1.0)]),
        2 => {
            let m2 = m.get(2);
            if m2 < DEGENERATE_TOL {
                return Ok(vec![(0.0, 1.0)]);
            }
            if m1 <= 0.0 {
                return Err(infeasible(m, "positive second moment with nonpositive mean"));
            }
            let f = m1 * m1 / m2;
            Ok(vec![(0.0, 1.0 - f), (m2 / m1, f)])
        }
        3 => {
            let (m2, m3) = (m.get(2), m.get(3));
            let var = m2 - m1 * m1;
            if var < DEGENERATE_TOL {
                return Ok(vec![(m1, 1.0)]);
            }
            // nodes are the roots of the degree-2 orthogonal polynomial x^2 + c1 x + c0
            let c1 = (m1 * m2 - m3) / var;
            let c0 = -m2 - c1 * m1;
            let (xa, xb) = quadratic_roots(c1, c0).ok_or_else(|| infeasible(m, "complex lower nodes"))?;
            if (xa - xb).abs() < DEGENERATE_TOL {
                return Ok(vec![(xa, 1.0)]);
            }
            let fa = (m1 - xb) / (xa - xb);
            Ok(vec![(xa, fa), (xb, 1.0 - fa)])
        }
        d => Err(Error::Precondition(format!("closed forms cover d <= 3, got d = {d}"))),
    }
}

// Real roots of x^2 + b x + c, without cancellation.
fn quadratic_roots(b: f64, c: f64) -> Option<(f64, f64)> {
    let mut disc = b * b - 4.0 * c;
    if disc < 0.0 {
        if disc < -1e-12 {
            return None;
        }
        disc = 0.0;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return Some((0.0, 0.0));
    }
    let (r1, r2) = (q, c / q);
    Some((r1.min(r2), r1.max(r2)))
}

fn xlogy_ratio(p: f64, q: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * (p / q).ln()
    }
}

fn weighted_log(terms: &[(f64, f64)]) -> f64 {
    terms.iter().filter(|t| t.0 != 0.0).map(|&(f, arg)| f * arg.ln()).sum()
}

/// Bernoulli KL form of `D^(1)_min`.
fn dminm1(m1: f64, mu: f64) -> f64 {
    xlogy_ratio(1.0 - m1, 1.0 - mu) + xlogy_ratio(m1, mu)
}

/// The two-point dual root for `d = 2`.
pub fn nu2(m1: f64, m2: f64, mu: f64) -> f64 {
    (1.0 - m1) * (m1 - mu) / ((1.0 - m1) * mu * mu - (1.0 - m2) * mu + m1 - m2)
}

/// The three-point dual root for `d = 3` (requires `M_1 > M_2`).
///
/// This is the `(-b + sqrt(b^2 + 4ac)) / (2a)` root, evaluated as
/// `2c / (b + sqrt(..))` when `b > 0` so that `a -> 0` reduces to `c / b`.
pub fn nu3(m1: f64, m2: f64, m3: f64, mu: f64) -> Result<f64> {
    let shifted = [-mu, (m2 - m3) / (m1 - m2) - mu, 1.0 - mu];
    let a = shifted[0] * shifted[1] * shifted[2];
    let b = (m2 - 2.0 * mu * m1 + mu * mu) + shifted.iter().sum::<f64>() * (mu - m1);
    let c = mu - m1;
    let disc = b * b + 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::Numeric(format!("negative discriminant {disc} in the d = 3 dual root")));
    }
    let root = disc.sqrt();
    if b > 0.0 {
        Ok(2.0 * c / (b + root))
    } else if a != 0.0 {
        Ok((-b + root) / (2.0 * a))
    } else {
        Err(Error::Numeric("degenerate d = 3 dual root".into()))
    }
}

/// `D^(d)_min(m, mu)` from the explicit `d = 1, 2, 3` formulas.
///
/// Independent of the generic bisection path; used to cross-check it.
pub fn dminm_closed_form(m: &MomentVector, mu: f64) -> Result<f64> {
    let m1 = m.get(1);
    if m1 >= mu {
        return Ok(0.0);
    }
    if mu >= 1.0 {
        return Ok(f64::INFINITY);
    }
    match m.degree() {
        1 => Ok(dminm1(m1, mu)),
        2 => {
            let m2 = m.get(2);
            let den = 1.0 - 2.0 * m1 + m2;
            let nu = nu2(m1, m2, mu);
            let x = (m1 - m2) / (1.0 - m1);
            let value = weighted_log(&[
                ((1.0 - m1).powi(2) / den, 1.0 - (x - mu) * nu),
                ((m2 - m1 * m1) / den, 1.0 - (1.0 - mu) * nu),
            ]);
            Ok(value)
        }
        3 => {
            let (m2, m3) = (m.get(2), m.get(3));
            if m1 - m2 < DEGENERATE_TOL {
                return Ok(dminm1(m1, mu));
            }
            let den = m1 - 2.0 * m2 + m3;
            let f2 = (m1 - m2).powi(3) / ((m2 - m3) * den);
            let f3 = (m1 * m3 - m2 * m2) / den;
            let f1 = 1.0 - f2 - f3;
            let nu = nu3(m1, m2, m3, mu)?;
            let shifted = [-mu, (m2 - m3) / (m1 - m2) - mu, 1.0 - mu];
            Ok(weighted_log(&[
                (f1, 1.0 - shifted[0] * nu),
                (f2, 1.0 - shifted[1] * nu),
                (f3, 1.0 - shifted[2] * nu),
            ]))
        }
        d => Err(Error::Precondition(format!("closed forms cover d <= 3, got d = {d}"))),
    }
}
