//! Class-by-group count table for the sensitive attribute.
//!
//! Each group stores its total weight and its positive-class weight; the
//! negative cell is derived. Count shifts only move weight between the two
//! classes of a group, so group totals are conserved exactly.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::schema::{BinaryLabel, SensitiveGroup};

/// The four sensitive cells N(class, group).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SensitiveCounts {
    pub protected_positive: f64,
    pub protected_negative: f64,
    pub non_protected_positive: f64,
    pub non_protected_negative: f64,
}

impl SensitiveCounts {
    pub fn new(
        protected_positive: f64,
        protected_negative: f64,
        non_protected_positive: f64,
        non_protected_negative: f64,
    ) -> Self {
        Self { protected_positive, protected_negative, non_protected_positive, non_protected_negative }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [
            self.protected_positive,
            self.protected_negative,
            self.non_protected_positive,
            self.non_protected_negative,
        ]
    }

    pub fn cell(&self, class: BinaryLabel, group: SensitiveGroup) -> f64 {
        match (class, group) {
            (BinaryLabel::Positive, SensitiveGroup::Protected) => self.protected_positive,
            (BinaryLabel::Negative, SensitiveGroup::Protected) => self.protected_negative,
            (BinaryLabel::Positive, SensitiveGroup::NonProtected) => self.non_protected_positive,
            (BinaryLabel::Negative, SensitiveGroup::NonProtected) => self.non_protected_negative,
        }
    }

    pub fn protected_total(&self) -> f64 {
        self.protected_positive + self.protected_negative
    }

    pub fn non_protected_total(&self) -> f64 {
        self.non_protected_positive + self.non_protected_negative
    }

    /// Cell-wise sum with a shift.
    pub fn shifted(&self, shift: &CountShift) -> SensitiveCounts {
        SensitiveCounts {
            protected_positive: self.protected_positive + shift.protected_positive,
            protected_negative: self.protected_negative + shift.protected_negative,
            non_protected_positive: self.non_protected_positive + shift.non_protected_positive,
            non_protected_negative: self.non_protected_negative + shift.non_protected_negative,
        }
    }
}

/// Deltas for the four sensitive cells, same layout as [`SensitiveCounts`].
pub type CountShift = SensitiveCounts;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SensitiveTable {
    /// Indexed by [`SensitiveGroup::index`].
    totals: [f64; 2],
    positives: [f64; 2],
}

impl SensitiveTable {
    pub fn add(&mut self, group: SensitiveGroup, class: BinaryLabel, weight: f64) {
        let g = group.index();
        self.totals[g] += weight;
        if class.is_positive() {
            self.positives[g] += weight;
        }
    }

    pub fn group_total(&self, group: SensitiveGroup) -> f64 {
        self.totals[group.index()]
    }

    fn negatives(&self, g: usize) -> f64 {
        (self.totals[g] - self.positives[g]).max(0.0)
    }

    pub fn counts(&self) -> SensitiveCounts {
        let p = SensitiveGroup::Protected.index();
        let n = SensitiveGroup::NonProtected.index();
        SensitiveCounts {
            protected_positive: self.positives[p],
            protected_negative: self.negatives(p),
            non_protected_positive: self.positives[n],
            non_protected_negative: self.negatives(n),
        }
    }

    pub fn cell(&self, class: BinaryLabel, group: SensitiveGroup) -> f64 {
        let g = group.index();
        match class {
            BinaryLabel::Positive => self.positives[g],
            BinaryLabel::Negative => self.negatives(g),
        }
    }

    pub fn row_total(&self, class: BinaryLabel) -> f64 {
        self.cell(class, SensitiveGroup::Protected) + self.cell(class, SensitiveGroup::NonProtected)
    }

    /// Number of groups seen so far (the attribute's observed domain).
    pub fn domain_size(&self) -> usize {
        self.totals.iter().filter(|t| **t > 0.0).count()
    }

    pub fn log_likelihood(&self, group: SensitiveGroup, class: BinaryLabel) -> f64 {
        let k = self.domain_size();
        if k == 0 {
            return 0.0;
        }
        ((self.cell(class, group) + 1.0) / (self.row_total(class) + k as f64)).ln()
    }

    /// Move weight between the classes of each group. The table is left
    /// untouched when the shift is rejected.
    pub fn apply_shift(&mut self, shift: &CountShift) -> Result<(), ModelError> {
        for imbalance in [
            shift.protected_positive + shift.protected_negative,
            shift.non_protected_positive + shift.non_protected_negative,
        ] {
            if imbalance != 0.0 || !imbalance.is_finite() {
                return Err(ModelError::UnbalancedShift(imbalance));
            }
        }
        let after = self.counts().shifted(shift);
        let names = ["protected_positive", "protected_negative", "non_protected_positive", "non_protected_negative"];
        for (name, value) in names.into_iter().zip(after.as_array()) {
            if value < 0.0 {
                return Err(ModelError::NegativeCell { cell: name, value });
            }
        }
        let p = SensitiveGroup::Protected.index();
        let n = SensitiveGroup::NonProtected.index();
        self.positives[p] = after.protected_positive.min(self.totals[p]);
        self.positives[n] = after.non_protected_positive.min(self.totals[n]);
        Ok(())
    }
}
