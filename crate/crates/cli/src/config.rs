//! Simulation campaign files.
//!
//! ```toml
//! horizon = 10000
//! runs = 100
//! master_seed = 7
//! output = "results"
//! policies = ["dmed", "dmed-mm:3", "dmed-mm:2", "dmed-mm:1"]
//!
//! [[arms]]
//! kind = "beta"          # beta | scaled_beta | bernoulli | discrete
//! alpha = 9
//! beta = 1
//! ```
//!
//! `general_d = true` allows policy degrees above 3.

use std::path::PathBuf;

use dmed_core::{ArmSpec, PolicyKind};
use serde::Deserialize;
use toml::Spanned;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    arms: Spanned<Vec<Spanned<ArmSpec>>>,
    policies: Spanned<Vec<Spanned<String>>>,
    horizon: Spanned<u64>,
    runs: Spanned<u64>,
    #[serde(default)]
    master_seed: u64,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    general_d: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub arms: Vec<ArmSpec>,
    pub policies: Vec<PolicyKind>,
    pub horizon: u64,
    pub runs: usize,
    pub master_seed: u64,
    pub output: Option<PathBuf>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl SimConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let at = |span: std::ops::Range<usize>, msg: String| CliError::Parse(format!("line {}: {msg}", line_of(text, span.start)));

        let mut arms = Vec::new();
        for arm in raw.arms.get_ref() {
            arm.get_ref().validate().map_err(|e| at(arm.span(), e.to_string()))?;
            arms.push(arm.get_ref().clone());
        }
        if arms.len() < 2 {
            return Err(at(raw.arms.span(), format!("need at least 2 arms, got {}", arms.len())));
        }

        let mut policies = Vec::new();
        for p in raw.policies.get_ref() {
            let kind: PolicyKind = p.get_ref().parse().map_err(|e: dmed_core::Error| at(p.span(), e.to_string()))?;
            if kind.degree() > 3 && !raw.general_d {
                return Err(at(p.span(), format!("policy {kind} needs degree <= 3 unless general_d = true")));
            }
            policies.push(kind);
        }
        if policies.is_empty() {
            return Err(at(raw.policies.span(), "no policies listed".into()));
        }

        let runs = *raw.runs.get_ref();
        if runs == 0 {
            return Err(at(raw.runs.span(), "runs must be at least 1".into()));
        }
        let horizon = *raw.horizon.get_ref();
        if horizon < arms.len() as u64 {
            return Err(at(raw.horizon.span(), format!("horizon {horizon} is shorter than the {} arms", arms.len())));
        }
        Ok(SimConfig {
            arms,
            policies,
            horizon,
            runs: runs as usize,
            master_seed: raw.master_seed,
            output: raw.output,
        })
    }
}
