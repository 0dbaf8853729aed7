//! Online class-imbalance monitor and imbalance-aware instance weights.
//!
//! Class percentages are exponentially decayed indicators of the true label.
//! Their difference (OCIM) drives the weights: an arriving minority-class
//! instance is up-weighted by its balanced class weight, scaled by how skewed
//! the recent stream is.

use serde::{Deserialize, Serialize};

use crate::schema::BinaryLabel;

pub const MIN_WEIGHT: f64 = 1e-3;
pub const MAX_WEIGHT: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceState {
    cp_positive: f64,
    cp_negative: f64,
    alpha: f64,
    seen: u64,
}

/// Balanced class weights `1 / (2 · cp)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassWeights {
    pub positive: f64,
    pub negative: f64,
}

impl ImbalanceState {
    /// Starts balanced at (0.5, 0.5). `alpha` is the decay factor in (0, 1).
    pub fn new(alpha: f64) -> Self {
        assert!(alpha > 0.0 && alpha < 1.0, "decay factor must lie in (0, 1), got {alpha}");
        Self::with_percentages(alpha, 0.5, 0.5)
    }

    pub fn with_percentages(alpha: f64, cp_positive: f64, cp_negative: f64) -> Self {
        Self { cp_positive, cp_negative, alpha, seen: 0 }
    }

    pub fn cp_positive(&self) -> f64 {
        self.cp_positive
    }

    pub fn cp_negative(&self) -> f64 {
        self.cp_negative
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn update(&mut self, true_label: BinaryLabel) {
        let hit = |class| if class == true_label { 1.0 } else { 0.0 };
        self.cp_positive = self.alpha * self.cp_positive + (1.0 - self.alpha) * hit(BinaryLabel::Positive);
        self.cp_negative = self.alpha * self.cp_negative + (1.0 - self.alpha) * hit(BinaryLabel::Negative);
        self.seen += 1;
    }

    pub fn ocim(&self) -> f64 {
        self.cp_positive - self.cp_negative
    }

    pub fn class_weights(&self) -> ClassWeights {
        ClassWeights {
            positive: balanced_weight(self.cp_positive),
            negative: balanced_weight(self.cp_negative),
        }
    }

    /// Training weight for an arriving instance, clamped to
    /// [`MIN_WEIGHT`, `MAX_WEIGHT`]. Majority-class instances always get 1.
    pub fn instance_weight(&self, true_label: BinaryLabel) -> f64 {
        let ocim = self.ocim();
        let cw = self.class_weights();
        let w = match true_label {
            BinaryLabel::Negative if ocim > 0.0 => cw.negative / (1.0 - ocim),
            BinaryLabel::Positive if ocim < 0.0 => cw.positive / (1.0 + ocim),
            _ => return 1.0,
        };
        if w.is_nan() {
            MAX_WEIGHT
        } else {
            w.clamp(MIN_WEIGHT, MAX_WEIGHT)
        }
    }
}

fn balanced_weight(cp: f64) -> f64 {
    if cp > 0.0 {
        1.0 / (2.0 * cp)
    } else {
        f64::INFINITY
    }
}
