//! Principal representations for arbitrary degree.
//!
//! Every principal representation is a set of fixed endpoint atoms plus `k`
//! free nodes. Multiplying the measure by a polynomial that vanishes on the
//! fixed atoms leaves a `k`-point measure whose first `2k` moments are known,
//! so the free nodes are its Gauss nodes:
//!
//! | side  | parity     | fixed atoms | modifier   |
//! |-------|------------|-------------|------------|
//! | upper | d = 2k     | {1}         | 1 - x      |
//! | upper | d = 2k - 1 | {0, 1}      | x (1 - x)  |
//! | lower | d = 2k - 1 | {}          | 1          |
//! | lower | d = 2k     | {0}         | x          |
//!
//! The Gauss rule is built with the Chebyshev algorithm and the Golub-Welsch
//! eigenproblem, then polished by Newton iteration on the square system
//! `sum_i f_i x_i^m = M_m, m = 0..=d`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{Atoms, MomentVector, Side};
use crate::{Error, Result};

/// Orthogonal-polynomial norms below this mark a measure with fewer atoms.
const NORM_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Modifier {
    One,
    X,
    OneMinusX,
    XOneMinusX,
}

impl Modifier {
    fn eval(self, x: f64) -> f64 {
        match self {
            Modifier::One => 1.0,
            Modifier::X => x,
            Modifier::OneMinusX => 1.0 - x,
            Modifier::XOneMinusX => x * (1.0 - x),
        }
    }

    /// `j`-th moment of the modified measure.
    fn moment(self, m: &MomentVector, j: usize) -> f64 {
        match self {
            Modifier::One => m.get(j),
            Modifier::X => m.get(j + 1),
            Modifier::OneMinusX => m.get(j) - m.get(j + 1),
            Modifier::XOneMinusX => m.get(j + 1) - m.get(j + 2),
        }
    }
}

struct Layout {
    fixed: &'static [f64],
    free: usize,
    modifier: Modifier,
}

fn layout(d: usize, side: Side) -> Layout {
    let even = d.is_multiple_of(2);
    match (side, even) {
        (Side::Upper, true) => Layout { fixed: &[1.0], free: d / 2, modifier: Modifier::OneMinusX },
        (Side::Upper, false) => Layout { fixed: &[0.0, 1.0], free: (d - 1) / 2, modifier: Modifier::XOneMinusX },
        (Side::Lower, false) => Layout { fixed: &[], free: d.div_ceil(2), modifier: Modifier::One },
        (Side::Lower, true) => Layout { fixed: &[0.0], free: d / 2, modifier: Modifier::X },
    }
}

/// Recurrence coefficients `(alpha, beta)` of the monic orthogonal
/// polynomials of a measure from its moments `mom[0..2n]`.
///
/// Stops early when the measure turns out to have fewer than `n` atoms.
fn chebyshev_recurrence(mom: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let len = 2 * n;
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    if n == 0 || mom[0] <= NORM_TOL {
        if mom[0] < -NORM_TOL {
            return Err(Error::InfeasibleMoments(format!("negative mass {} in a modified measure", mom[0])));
        }
        return Ok((alpha, beta));
    }
    alpha.push(mom[1] / mom[0]);
    beta.push(mom[0]);
    let mut prev = vec![0.0; len];
    let mut cur = mom[..len].to_vec();
    for k in 1..n {
        let mut next = vec![0.0; len];
        for l in k..(len - k) {
            next[l] = cur[l + 1] - alpha[k - 1] * cur[l] - beta[k - 1] * prev[l];
        }
        if next[k] <= NORM_TOL {
            if next[k] < -NORM_TOL {
                return Err(Error::InfeasibleMoments("moment matrix is not positive semidefinite".into()));
            }
            break;
        }
        alpha.push(next[k + 1] / next[k] - cur[k] / cur[k - 1]);
        beta.push(next[k] / cur[k - 1]);
        prev = cur;
        cur = next;
    }
    Ok((alpha, beta))
}

/// Gauss nodes and weights from the recurrence (Golub-Welsch).
pub(crate) fn gauss_rule(alpha: &[f64], beta: &[f64]) -> Atoms {
    let n = alpha.len();
    if n == 0 {
        return Vec::new();
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        jacobi[(k, k)] = alpha[k];
        if k + 1 < n {
            let off = beta[k + 1].sqrt();
            jacobi[(k, k + 1)] = off;
            jacobi[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut rule: Atoms = (0..n)
        .map(|j| (eig.eigenvalues[j], beta[0] * eig.eigenvectors[(0, j)].powi(2)))
        .collect();
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Initial representation from the Gauss rule of the modified measure.
fn initial(m: &MomentVector, lay: &Layout) -> Result<Atoms> {
    let mom: Vec<f64> = (0..2 * lay.free).map(|j| lay.modifier.moment(m, j)).collect();
    let (alpha, beta) = if lay.free == 0 {
        (Vec::new(), Vec::new())
    } else {
        chebyshev_recurrence(&mom, lay.free)?
    };
    let mut atoms: Atoms = gauss_rule(&alpha, &beta)
        .into_iter()
        .map(|(x, w)| {
            let scale = lay.modifier.eval(x);
            (x, if scale.abs() > f64::EPSILON { w / scale } else { 0.0 })
        })
        .collect();
    let free_mass: f64 = atoms.iter().map(|a| a.1).sum();
    let free_mean: f64 = atoms.iter().map(|a| a.0 * a.1).sum();
    match lay.fixed {
        [] => {}
        [x] => atoms.push((*x, 1.0 - free_mass)),
        [_, _] => {
            let at_one = m.get(1) - free_mean;
            atoms.push((0.0, 1.0 - free_mass - at_one));
            atoms.push((1.0, at_one));
        }
        _ => unreachable!(),
    }
    Ok(atoms)
}

fn residual(m: &MomentVector, atoms: &[(f64, f64)]) -> DVector<f64> {
    let d = m.degree();
    DVector::from_fn(d + 1, |k, _| {
        atoms.iter().map(|&(x, f)| f * x.powi(k as i32)).sum::<f64>() - m.get(k)
    })
}

/// Newton iteration in the free nodes and all weights, with step halving.
fn newton_polish(m: &MomentVector, atoms: &mut Atoms, free: usize) {
    let d = m.degree();
    let n_atoms = atoms.len();
    // unknowns: the first `free` atoms' positions, then every weight
    if free + n_atoms != d + 1 {
        return;
    }
    let mut res = residual(m, atoms);
    let mut norm = res.amax();
    for _ in 0..NEWTON_MAX_ITER {
        if norm <= NEWTON_TOL {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(d + 1, d + 1);
        for k in 0..=d {
            for (i, &(x, f)) in atoms.iter().enumerate() {
                if i < free && k > 0 {
                    jac[(k, i)] = f * k as f64 * x.powi(k as i32 - 1);
                }
                jac[(k, free + i)] = x.powi(k as i32);
            }
        }
        let Some(step) = jac.lu().solve(&res) else { return };
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let trial: Atoms = atoms
                .iter()
                .enumerate()
                .map(|(i, &(x, f))| {
                    let nx = if i < free { x - lambda * step[i] } else { x };
                    (nx, f - lambda * step[free + i])
                })
                .collect();
            let trial_res = residual(m, &trial);
            let trial_norm = trial_res.amax();
            if trial_norm < norm {
                *atoms = trial;
                res = trial_res;
                norm = trial_norm;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
}

/// Principal representation of the requested side, before clamping.
pub(crate) fn principal(m: &MomentVector, side: Side) -> Result<Atoms> {
    let lay = layout(m.degree(), side);
    let mut atoms = initial(m, &lay)?;
    let full = atoms.iter().take(lay.free).filter(|a| a.1 > 1e-10 && a.0 > 0.0 && a.0 < 1.0).count();
    if full == lay.free && atoms.len() == lay.free + lay.fixed.len() {
        newton_polish(m, &mut atoms, lay.free);
    }
    Ok(atoms)
}
