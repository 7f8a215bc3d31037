use crate::moments::MomentVector;
use crate::TAU_ONE;

/// Running sufficient statistics for one arm.
///
/// Power sums give the empirical moments in constant time. The log and
/// reciprocal sums feed the mixed policy; both saturate once a reward of 1 is
/// seen. The raw reward list is kept only when asked for.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmStats {
    pulls: u64,
    power_sums: Vec<f64>,
    log_sum: f64,
    recip_sum: f64,
    recip_infinite: bool,
    samples: Option<Vec<f64>>,
}

impl ArmStats {
    /// Statistics tracking power sums up to `degree` (at least 1).
    pub fn new(degree: usize, keep_samples: bool) -> Self {
        Self {
            pulls: 0,
            power_sums: vec![0.0; degree.max(1)],
            log_sum: 0.0,
            recip_sum: 0.0,
            recip_infinite: false,
            samples: keep_samples.then(Vec::new),
        }
    }

    pub fn record(&mut self, reward: f64) {
        self.pulls += 1;
        let mut power = 1.0;
        for s in &mut self.power_sums {
            power *= reward;
            *s += power;
        }
        self.log_sum += (-reward).ln_1p();
        if reward >= 1.0 - TAU_ONE {
            self.recip_infinite = true;
        } else {
            self.recip_sum += 1.0 / (1.0 - reward);
        }
        if let Some(samples) = &mut self.samples {
            samples.push(reward);
        }
    }

    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn degree(&self) -> usize {
        self.power_sums.len()
    }

    /// `S_k = sum_t X_t^k` for `k = 1..=degree`.
    pub fn power_sums(&self) -> &[f64] {
        &self.power_sums
    }

    pub fn mean(&self) -> f64 {
        self.power_sums[0] / self.pulls as f64
    }

    /// `(S_1/t, ..., S_d/t)`. Panics before the first pull or if `d` exceeds
    /// the tracked degree.
    pub fn empirical_moments(&self, d: usize) -> MomentVector {
        assert!(self.pulls > 0, "no rewards recorded");
        let t = self.pulls as f64;
        MomentVector::new(self.power_sums[..d].iter().map(|s| s / t).collect()).expect("finite power sums")
    }

    /// `sum_t log(1 - X_t)`, `-inf` once a reward of 1 was seen.
    pub fn log_sum(&self) -> f64 {
        self.log_sum
    }

    /// `(1/t) sum_t 1/(1 - X_t)`, `+inf` once a reward within `TAU_ONE` of 1
    /// was seen.
    pub fn reciprocal_mean(&self) -> f64 {
        if self.recip_infinite {
            f64::INFINITY
        } else {
            self.recip_sum / self.pulls as f64
        }
    }

    pub fn samples(&self) -> Option<&[f64]> {
        self.samples.as_deref()
    }
}
