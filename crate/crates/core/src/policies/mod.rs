//! Index policies driven by per-arm sufficient statistics.
//!
//! The DMED family runs in loops. Arms in the current list are pulled once
//! each in ascending order; after every pull, each arm `j` not still waiting
//! in the current loop joins the next loop's list when
//!
//! ```text
//! T_j(n) * D_j <= log n - log T_j(n)
//! ```
//!
//! where `D_j` is the divergence of arm `j` against the best empirical mean.
//! The variants differ only in `D_j`: the empirical distribution itself
//! ([`PolicyKind::Dmed`]), its first `d` moments ([`PolicyKind::DmedM`]), or
//! a switch between the two on `E[1/(1-X)] <= 1/(1-mu)`
//! ([`PolicyKind::DmedMM`]).

mod stats;

use std::collections::BTreeSet;
use std::str::FromStr;

pub use stats::ArmStats;

use crate::divergence::dmin_samples;
use crate::moments::dminm_clamped;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    /// Moment-based divergence of degree `d`.
    DmedM(usize),
    /// Mixed rule on top of [`PolicyKind::DmedM`].
    DmedMM(usize),
    /// Exact empirical divergence; keeps every reward.
    Dmed,
    /// `mean + sqrt(2 log n / t)`.
    Ucb1,
}

impl PolicyKind {
    /// Number of power sums the arms must track.
    pub fn degree(&self) -> usize {
        match *self {
            PolicyKind::DmedM(d) | PolicyKind::DmedMM(d) => d,
            PolicyKind::Dmed | PolicyKind::Ucb1 => 1,
        }
    }

    fn keeps_samples(&self) -> bool {
        matches!(self, PolicyKind::Dmed)
    }

    /// The divergence this policy plugs into the loop criterion.
    pub fn divergence(&self, stats: &ArmStats, mu: f64) -> f64 {
        if stats.mean() >= mu {
            return 0.0;
        }
        match *self {
            PolicyKind::DmedM(d) => dminm_clamped(&stats.empirical_moments(d), mu),
            PolicyKind::DmedMM(d) => dmin_tilde(stats, mu, d),
            PolicyKind::Dmed => {
                let samples = stats.samples().expect("exact DMED keeps its samples");
                dmin_samples(samples, mu).expect("pulled arms have samples").value
            }
            PolicyKind::Ucb1 => 0.0,
        }
    }
}

impl std::fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolicyKind::DmedM(d) => write!(f, "dmed-m:{d}"),
            PolicyKind::DmedMM(d) => write!(f, "dmed-mm:{d}"),
            PolicyKind::Dmed => f.write_str("dmed"),
            PolicyKind::Ucb1 => f.write_str("ucb1"),
        }
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    /// Parses `dmed`, `ucb1`, `dmed-m:<d>` or `dmed-mm:<d>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, degree) = match lower.split_once(':') {
            Some((name, d)) => {
                let d: usize = d
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad degree in policy {s:?}")))?;
                if d == 0 {
                    return Err(Error::InvalidParameter(format!("degree must be positive in policy {s:?}")));
                }
                (name.to_string(), Some(d))
            }
            None => (lower.clone(), None),
        };
        match (name.as_str(), degree) {
            ("dmed", None) => Ok(PolicyKind::Dmed),
            ("ucb1", None) => Ok(PolicyKind::Ucb1),
            ("dmed-m", Some(d)) => Ok(PolicyKind::DmedM(d)),
            ("dmed-mm", Some(d)) => Ok(PolicyKind::DmedMM(d)),
            _ => Err(Error::InvalidParameter(format!(
                "unknown policy {s:?}; expected dmed, ucb1, dmed-m:<d> or dmed-mm:<d>"
            ))),
        }
    }
}

/// `t * D <= log n - log t`.
pub fn j_condition(pulls: u64, n: u64, divergence: f64) -> bool {
    let t = pulls as f64;
    t * divergence <= (n as f64).ln() - t.ln()
}

/// Whether arm `stats` joins the next loop at round `n` under `kind`.
pub fn j_event(kind: PolicyKind, stats: &ArmStats, n: u64, mu_hat_star: f64) -> bool {
    j_condition(stats.pulls(), n, kind.divergence(stats, mu_hat_star))
}

/// The mixed divergence: when the empirical `E[1/(1-X)] <= 1/(1-mu)` the
/// exact `D_min` is available from the log sum, otherwise fall back to the
/// degree-`d` moment bound.
pub fn dmin_tilde(stats: &ArmStats, mu: f64, d: usize) -> f64 {
    if stats.mean() >= mu {
        return 0.0;
    }
    if mu >= 1.0 {
        return f64::INFINITY;
    }
    let t = stats.pulls() as f64;
    if stats.reciprocal_mean() <= 1.0 / (1.0 - mu) {
        return (stats.log_sum() / t - (-mu).ln_1p()).max(0.0);
    }
    dminm_clamped(&stats.empirical_moments(d), mu)
}

/// Incremental state of one policy over `K` arms.
#[derive(Debug, Clone)]
pub struct PolicyState {
    kind: PolicyKind,
    arms: Vec<ArmStats>,
    n: u64,
    current: Vec<usize>,
    remaining: BTreeSet<usize>,
    next: BTreeSet<usize>,
    loops: u64,
}

impl PolicyState {
    /// Fresh state; the first `K` selections pull every arm once.
    pub fn init(kind: PolicyKind, arms: usize) -> Result<Self> {
        if arms < 2 {
            return Err(Error::TooFewArms(arms));
        }
        if let PolicyKind::DmedM(0) | PolicyKind::DmedMM(0) = kind {
            return Err(Error::InvalidParameter("policy degree must be positive".into()));
        }
        Ok(Self {
            kind,
            arms: (0..arms).map(|_| ArmStats::new(kind.degree(), kind.keeps_samples())).collect(),
            n: 0,
            current: (0..arms).collect(),
            remaining: (0..arms).collect(),
            next: BTreeSet::new(),
            loops: 0,
        })
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn arms(&self) -> &[ArmStats] {
        &self.arms
    }

    /// Rounds played so far.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Arms of the current loop, ascending (`L_C`).
    pub fn current(&self) -> &[usize] {
        &self.current
    }

    /// Arms of the current loop not yet pulled (`L_R`).
    pub fn remaining(&self) -> &BTreeSet<usize> {
        &self.remaining
    }

    /// Arms collected for the next loop (`L_N`).
    pub fn next(&self) -> &BTreeSet<usize> {
        &self.next
    }

    /// Completed loops.
    pub fn loops(&self) -> u64 {
        self.loops
    }

    fn initializing(&self) -> bool {
        (self.n as usize) < self.arms.len()
    }

    /// Highest empirical mean.
    pub fn best_mean(&self) -> f64 {
        self.arms.iter().map(ArmStats::mean).fold(f64::NEG_INFINITY, f64::max)
    }

    /// The arm to pull next (0-based).
    pub fn select_arm(&self) -> usize {
        if self.initializing() {
            return self.n as usize;
        }
        if self.kind == PolicyKind::Ucb1 {
            return self.ucb_choice();
        }
        *self.remaining.first().expect("the current loop is never empty")
    }

    fn ucb_choice(&self) -> usize {
        let log_n = (self.n as f64).ln();
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (i, arm) in self.arms.iter().enumerate() {
            let score = arm.mean() + (2.0 * log_n / arm.pulls() as f64).sqrt();
            if score > best_score {
                best = i;
                best_score = score;
            }
        }
        best
    }

    /// Feeds the reward of the arm returned by [`Self::select_arm`].
    pub fn record_reward(&mut self, arm: usize, reward: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::RewardOutOfRange(reward));
        }
        let expected = self.select_arm();
        if arm != expected {
            return Err(Error::WrongArm { expected, got: arm });
        }
        let init_pull = self.initializing();
        self.arms[arm].record(reward);
        self.n += 1;
        if init_pull || self.kind == PolicyKind::Ucb1 {
            return Ok(());
        }

        self.remaining.remove(&arm);
        let mu_star = self.best_mean();
        for j in 0..self.arms.len() {
            if self.remaining.contains(&j) || self.next.contains(&j) {
                continue;
            }
            if j_event(self.kind, &self.arms[j], self.n, mu_star) {
                self.next.insert(j);
            }
        }
        if self.remaining.is_empty() {
            self.current = std::mem::take(&mut self.next).into_iter().collect();
            self.remaining = self.current.iter().copied().collect();
            self.loops += 1;
        }
        Ok(())
    }
}
