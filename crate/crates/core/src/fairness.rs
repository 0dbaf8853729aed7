//! Cumulative statistical parity over the classifier's own predictions, and
//! the count shifts that counteract it.
//!
//! Sign convention: `disc > 0` means the protected group receives positive
//! predictions less often than the non-protected group.

use serde::{Deserialize, Serialize};

use crate::model::{CountShift, SensitiveCounts};
use crate::schema::{BinaryLabel, SensitiveGroup};

pub const DEFAULT_GAMMA: f64 = 1.0;
pub const DEFAULT_EPSILON: f64 = 1e-6;
pub const DEFAULT_LAMBDA: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairnessState {
    pub pos_pred_protected: u64,
    pub seen_protected: u64,
    pub pos_pred_non_protected: u64,
    pub seen_non_protected: u64,
    pub gamma: f64,
    pub epsilon: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MitigationDirection {
    None,
    TowardProtected,
    TowardNonProtected,
}

impl MitigationDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            MitigationDirection::None => "none",
            MitigationDirection::TowardProtected => "toward_protected",
            MitigationDirection::TowardNonProtected => "toward_nonprotected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MitigationAction {
    pub direction: MitigationDirection,
    pub deltas: CountShift,
}

impl FairnessState {
    pub fn new(gamma: f64, epsilon: f64, lambda: f64) -> Self {
        assert!(gamma >= 0.0, "gamma must be non-negative");
        assert!(epsilon > 0.0, "epsilon must be positive");
        assert!((0.0..1.0).contains(&lambda), "lambda must lie in [0, 1)");
        Self {
            pos_pred_protected: 0,
            seen_protected: 0,
            pos_pred_non_protected: 0,
            seen_non_protected: 0,
            gamma,
            epsilon,
            lambda,
        }
    }

    pub fn record_prediction(&mut self, group: SensitiveGroup, predicted: BinaryLabel) {
        let hit = predicted.is_positive() as u64;
        match group {
            SensitiveGroup::Protected => {
                self.seen_protected += 1;
                self.pos_pred_protected += hit;
            }
            SensitiveGroup::NonProtected => {
                self.seen_non_protected += 1;
                self.pos_pred_non_protected += hit;
            }
        }
    }

    /// `P̂(ŷ=+ | S⁺) − P̂(ŷ=+ | S⁻)` with `gamma` added to each denominator.
    pub fn discrimination(&self) -> f64 {
        let rate = |pos: u64, seen: u64| {
            let denom = seen as f64 + self.gamma;
            if denom > 0.0 {
                pos as f64 / denom
            } else {
                0.0
            }
        };
        rate(self.pos_pred_non_protected, self.seen_non_protected) - rate(self.pos_pred_protected, self.seen_protected)
    }

    /// Shifts that move a `lambda` fraction of the donor cells toward the
    /// disadvantaged group's positive class (and the advantaged group's
    /// negative class). No action while `|disc| <= epsilon`.
    pub fn decide_mitigation(&self, counts: &SensitiveCounts) -> MitigationAction {
        let disc = self.discrimination();
        let lambda = self.lambda;
        if disc > self.epsilon {
            let up = lambda * counts.protected_negative;
            let down = lambda * counts.non_protected_positive;
            MitigationAction {
                direction: MitigationDirection::TowardProtected,
                deltas: CountShift::new(up, -up, -down, down),
            }
        } else if disc < -self.epsilon {
            let up = lambda * counts.non_protected_negative;
            let down = lambda * counts.protected_positive;
            MitigationAction {
                direction: MitigationDirection::TowardNonProtected,
                deltas: CountShift::new(-down, down, up, -up),
            }
        } else {
            MitigationAction { direction: MitigationDirection::None, deltas: CountShift::default() }
        }
    }
}
