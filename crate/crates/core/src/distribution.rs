//! Finitely supported probability distributions on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Support points closer than this are merged.
pub const MERGE_TOL: f64 = 1e-14;

/// Largest deviation of the total weight from 1 accepted by
/// [`DiscreteDistribution::new`]; the weights are renormalised afterwards.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// A probability distribution with finitely many atoms in `[0, 1]`.
///
/// The support is strictly increasing, every stored weight is positive and
/// the weights sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    support: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteDistribution {
    /// Builds a distribution from (possibly unsorted) atoms.
    ///
    /// Zero-weight atoms are dropped, near-duplicate atoms are merged and the
    /// weights are renormalised.
    pub fn new(support: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} support points but {} weights",
                support.len(),
                weights.len()
            )));
        }
        let mut atoms = Vec::with_capacity(support.len());
        for (&x, &w) in support.iter().zip(&weights) {
            if !x.is_finite() || !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidDistribution(format!("support point {x} outside [0, 1]")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidDistribution(format!("weight {w} is not a nonnegative number")));
            }
            if w > 0.0 {
                atoms.push((x, w));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if atoms.is_empty() || (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self::from_atoms(atoms))
    }

    /// Empirical distribution of a sample list.
    pub fn empirical(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        if let Some(&bad) = samples.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidDistribution(format!("sample {bad} outside [0, 1]")));
        }
        let w = 1.0 / samples.len() as f64;
        Ok(Self::from_atoms(samples.iter().map(|&x| (x, w)).collect()))
    }

    /// A single atom at `x`.
    pub fn point_mass(x: f64) -> Result<Self> {
        Self::new(vec![x], vec![1.0])
    }

    // Atoms are assumed valid (inside [0, 1], positive weights).
    pub(crate) fn from_atoms(mut atoms: Vec<(f64, f64)>) -> Self {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut support: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut weights: Vec<f64> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match support.last() {
                Some(&last) if x - last < MERGE_TOL => *weights.last_mut().unwrap() += w,
                _ => {
                    support.push(x);
                    weights.push(w);
                }
            }
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Self { support, weights }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + Clone + '_ {
        self.support.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        self.expect(|x| x)
    }

    /// `E[u(X)]`.
    pub fn expect(&self, u: impl Fn(f64) -> f64) -> f64 {
        self.atoms().map(|(x, w)| w * u(x)).sum()
    }

    /// Index in the sense of moment-space theory: the number of atoms, with
    /// atoms at the endpoints 0 and 1 counted one half.
    pub fn index(&self) -> f64 {
        self.support
            .iter()
            .map(|&x| if x == 0.0 || x == 1.0 { 0.5 } else { 1.0 })
            .sum()
    }
}

impl std::fmt::Display for DiscreteDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.atoms().map(|(x, w)| format!("{x}:{w}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
