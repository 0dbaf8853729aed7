use std::collections::HashMap;
use std::sync::Arc;

use crate::schema::BinaryLabel;

/// Weighted category counts for one nominal attribute, both classes.
///
/// The observed domain is the key set, shared across classes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NominalTable {
    pub(crate) counts: HashMap<Arc<str>, [f64; 2]>,
    pub(crate) row_totals: [f64; 2],
}

impl NominalTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: &Arc<str>, class: BinaryLabel, weight: f64) {
        let c = class.index();
        match self.counts.get_mut(value) {
            Some(cell) => cell[c] += weight,
            None => {
                let mut cell = [0.0; 2];
                cell[c] = weight;
                self.counts.insert(Arc::clone(value), cell);
            }
        }
        self.row_totals[c] += weight;
    }

    pub fn count(&self, value: &str, class: BinaryLabel) -> f64 {
        self.counts.get(value).map_or(0.0, |cell| cell[class.index()])
    }

    pub fn row_total(&self, class: BinaryLabel) -> f64 {
        self.row_totals[class.index()]
    }

    pub fn domain_size(&self) -> usize {
        self.counts.len()
    }

    /// Add-one smoothed `ln P(a = value | class)` with the observed domain
    /// size as the smoothing denominator. Neutral until anything is observed.
    pub fn log_likelihood(&self, value: &str, class: BinaryLabel) -> f64 {
        let k = self.counts.len();
        if k == 0 {
            return 0.0;
        }
        ((self.count(value, class) + 1.0) / (self.row_total(class) + k as f64)).ln()
    }
}
