use serde::{Deserialize, Serialize};

/// Variances below this are clamped before evaluating the density.
pub const VARIANCE_FLOOR: f64 = 1e-9;

/// A class needs at least this much accumulated weight on an attribute
/// before the attribute contributes to the posterior.
pub const MIN_DENSITY_WEIGHT: f64 = 2.0;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Weighted running mean and second moment (Welford's recurrence generalised
/// to real-valued weights; unit weights reduce to the classic form).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GaussianStat {
    weight: f64,
    mean: f64,
    m2: f64,
}

impl GaussianStat {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, value: f64, weight: f64) {
        let total = self.weight + weight;
        let delta = value - self.mean;
        self.mean += (weight / total) * delta;
        self.m2 = (self.m2 + weight * delta * (value - self.mean)).max(0.0);
        self.weight = total;
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// Population variance `M2 / W`, or `None` before any weight is seen.
    pub fn variance(&self) -> Option<f64> {
        (self.weight > 0.0).then(|| self.m2 / self.weight)
    }

    /// Log of the normal density at `value`. Returns 0 (neutral) while the
    /// accumulated weight is below [`MIN_DENSITY_WEIGHT`].
    pub fn log_density(&self, value: f64) -> f64 {
        if self.weight < MIN_DENSITY_WEIGHT {
            return 0.0;
        }
        let var = (self.m2 / self.weight).max(VARIANCE_FLOOR);
        let dev = value - self.mean;
        -0.5 * (LN_2PI + var.ln()) - dev * dev / (2.0 * var)
    }
}
