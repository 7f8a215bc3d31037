//! Seeded bandit campaigns and regret accounting.
//!
//! Replication `r` of a campaign with master seed `s` runs on
//! `ChaCha8Rng::seed_from_u64(replication_seed(s, r))`; rewards are drawn from
//! that single stream in pull order.

mod arm;

use rayon::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use arm::{ArmSampler, ArmSpec};

use crate::policies::{PolicyKind, PolicyState};
use crate::{Error, Result};

/// Regret of one replication, sampled at the checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretTrace {
    pub checkpoints: Vec<u64>,
    pub regret: Vec<f64>,
    pub pulls: Vec<u64>,
    pub seed: u64,
}

/// Pointwise mean and standard error over replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretSummary {
    pub checkpoints: Vec<u64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub runs: usize,
}

impl RegretSummary {
    pub fn final_mean(&self) -> f64 {
        *self.mean.last().expect("summary has at least one checkpoint")
    }

    pub fn final_stderr(&self) -> f64 {
        *self.stderr.last().expect("summary has at least one checkpoint")
    }

    /// Mean regret at checkpoint `n`, if it is one.
    pub fn at(&self, n: u64) -> Option<f64> {
        self.checkpoints.iter().position(|&c| c == n).map(|i| self.mean[i])
    }
}

/// `{10^k, 3 * 10^k}` up to `horizon`, plus `horizon` itself.
pub fn checkpoints(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 1u64;
    while decade <= horizon {
        out.push(decade);
        if let Some(three) = decade.checked_mul(3).filter(|&t| t <= horizon) {
            out.push(three);
        }
        match decade.checked_mul(10) {
            Some(next) => decade = next,
            None => break,
        }
    }
    if out.last() != Some(&horizon) {
        out.push(horizon);
    }
    out
}

/// SplitMix64 finaliser applied to `master + (r + 1) * golden`.
pub fn replication_seed(master: u64, replication: u64) -> u64 {
    let mut z = master.wrapping_add(replication.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-arm gaps `mu* - mu_i`.
pub fn gaps(arms: &[ArmSpec]) -> Vec<f64> {
    let best = arms.iter().map(ArmSpec::mean).fold(f64::NEG_INFINITY, f64::max);
    arms.iter().map(|a| best - a.mean()).collect()
}

/// `sum_i (mu* - mu_i) T_i` from pull counts.
pub fn regret_of(gaps: &[f64], pulls: &[u64]) -> f64 {
    gaps.iter().zip(pulls).map(|(g, &t)| g * t as f64).sum()
}

/// One replication of `kind` on `arms` for `horizon` rounds.
pub fn run(arms: &[ArmSpec], kind: PolicyKind, horizon: u64, seed: u64) -> Result<RegretTrace> {
    let samplers = arms.iter().map(ArmSpec::sampler).collect::<Result<Vec<_>>>()?;
    let mut state = PolicyState::init(kind, arms.len())?;
    if horizon < arms.len() as u64 {
        return Err(Error::HorizonTooShort { horizon, arms: arms.len() });
    }
    let gaps = gaps(arms);
    let checkpoints = checkpoints(horizon);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pulls = vec![0u64; arms.len()];
    let mut regret = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for n in 1..=horizon {
        let arm = state.select_arm();
        let reward = samplers[arm].sample(&mut rng);
        state.record_reward(arm, reward)?;
        pulls[arm] += 1;
        if next.peek() == Some(&&n) {
            next.next();
            regret.push(regret_of(&gaps, &pulls));
        }
    }
    Ok(RegretTrace { checkpoints, regret, pulls, seed })
}

/// `runs` replications in parallel, returned in replication order.
pub fn run_replications(
    arms: &[ArmSpec],
    kind: PolicyKind,
    horizon: u64,
    runs: usize,
    master_seed: u64,
) -> Result<Vec<RegretTrace>> {
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    (0..runs as u64)
        .into_par_iter()
        .map(|r| run(arms, kind, horizon, replication_seed(master_seed, r)))
        .collect()
}

pub fn aggregate(traces: &[RegretTrace]) -> Result<RegretSummary> {
    let first = traces.first().ok_or_else(|| Error::InvalidParameter("no traces to aggregate".into()))?;
    if traces.iter().any(|t| t.checkpoints != first.checkpoints || t.regret.len() != first.checkpoints.len()) {
        return Err(Error::MismatchedCheckpoints);
    }
    let runs = traces.len();
    let count = runs as f64;
    let mut mean = Vec::with_capacity(first.checkpoints.len());
    let mut stderr = Vec::with_capacity(first.checkpoints.len());
    for i in 0..first.checkpoints.len() {
        let m = traces.iter().map(|t| t.regret[i]).sum::<f64>() / count;
        let se = if runs > 1 {
            let var = traces.iter().map(|t| (t.regret[i] - m).powi(2)).sum::<f64>() / (count - 1.0);
            (var / count).sqrt()
        } else {
            0.0
        };
        mean.push(m);
        stderr.push(se);
    }
    Ok(RegretSummary { checkpoints: first.checkpoints.clone(), mean, stderr, runs })
}

/// The five beta arms `(9,1), (0.7,0.3), (5,5), (0.3,0.7), (1,9)`.
pub fn five_beta_arms() -> Vec<ArmSpec> {
    [(9.0, 1.0), (0.7, 0.3), (5.0, 5.0), (0.3, 0.7), (1.0, 9.0)]
        .into_iter()
        .map(|(alpha, beta)| ArmSpec::Beta { alpha, beta })
        .collect()
}
