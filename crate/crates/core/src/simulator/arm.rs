use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Gamma;
use serde::{Deserialize, Serialize};

use crate::distribution::DiscreteDistribution;
use crate::moments::{beta_moments, moments_of, MomentVector};
use crate::{Error, Result};

/// Reward law of one arm. Every variant produces rewards in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ArmSpec {
    Beta { alpha: f64, beta: f64 },
    /// `scale * X` for `X ~ Be(alpha, beta)`, `scale` in `(0, 1]`.
    ScaledBeta { alpha: f64, beta: f64, scale: f64 },
    Bernoulli { p: f64 },
    Discrete { support: Vec<f64>, weights: Vec<f64> },
}

impl ArmSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ArmSpec::Beta { alpha, beta } => beta_moments(*alpha, *beta, 1.0, 1).map(drop),
            ArmSpec::ScaledBeta { alpha, beta, scale } => beta_moments(*alpha, *beta, *scale, 1).map(drop),
            ArmSpec::Bernoulli { p } if (0.0..=1.0).contains(p) => Ok(()),
            ArmSpec::Bernoulli { p } => Err(Error::InvalidParameter(format!("bernoulli p = {p} outside [0, 1]"))),
            ArmSpec::Discrete { support, weights } => DiscreteDistribution::new(support.clone(), weights.clone()).map(drop),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            ArmSpec::Beta { alpha, beta } => alpha / (alpha + beta),
            ArmSpec::ScaledBeta { alpha, beta, scale } => scale * alpha / (alpha + beta),
            ArmSpec::Bernoulli { p } => *p,
            ArmSpec::Discrete { support, weights } => {
                let total: f64 = weights.iter().sum();
                support.iter().zip(weights).map(|(x, w)| x * w).sum::<f64>() / total
            }
        }
    }

    /// Analytic raw moments up to degree `d`.
    pub fn moments(&self, d: usize) -> Result<MomentVector> {
        match self {
            ArmSpec::Beta { alpha, beta } => beta_moments(*alpha, *beta, 1.0, d),
            ArmSpec::ScaledBeta { alpha, beta, scale } => beta_moments(*alpha, *beta, *scale, d),
            ArmSpec::Bernoulli { p } => {
                self.validate()?;
                MomentVector::new(vec![*p; d])
            }
            ArmSpec::Discrete { support, weights } => {
                if d == 0 {
                    return Err(Error::InvalidParameter("moment vector needs degree >= 1".into()));
                }
                Ok(moments_of(&DiscreteDistribution::new(support.clone(), weights.clone())?, d))
            }
        }
    }

    pub fn sampler(&self) -> Result<ArmSampler> {
        self.validate()?;
        let gamma = |shape: f64| Gamma::new(shape, 1.0).map_err(|e| Error::InvalidParameter(e.to_string()));
        Ok(match self {
            ArmSpec::Beta { alpha, beta } => ArmSampler::Beta { a: gamma(*alpha)?, b: gamma(*beta)?, scale: 1.0 },
            ArmSpec::ScaledBeta { alpha, beta, scale } => {
                ArmSampler::Beta { a: gamma(*alpha)?, b: gamma(*beta)?, scale: *scale }
            }
            ArmSpec::Bernoulli { p } => ArmSampler::Bernoulli(*p),
            ArmSpec::Discrete { support, weights } => ArmSampler::Discrete {
                support: support.clone(),
                index: WeightedIndex::new(weights).map_err(|e| Error::InvalidDistribution(e.to_string()))?,
            },
        })
    }
}

/// Prepared sampler for an [`ArmSpec`].
#[derive(Debug, Clone)]
pub enum ArmSampler {
    Beta { a: Gamma<f64>, b: Gamma<f64>, scale: f64 },
    Bernoulli(f64),
    Discrete { support: Vec<f64>, index: WeightedIndex<f64> },
}

impl ArmSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ArmSampler::Beta { a, b, scale } => loop {
                // X = G_a / (G_a + G_b); both draws can underflow for tiny shapes
                let x = a.sample(rng);
                let y = b.sample(rng);
                if x + y > 0.0 {
                    break scale * (x / (x + y)).clamp(0.0, 1.0);
                }
            },
            ArmSampler::Bernoulli(p) => {
                if rng.random::<f64>() < *p {
                    1.0
                } else {
                    0.0
                }
            }
            ArmSampler::Discrete { support, index } => support[index.sample(rng)],
        }
    }
}
