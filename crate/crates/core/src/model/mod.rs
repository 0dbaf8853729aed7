//! Online mixed Naive Bayes: weighted count tables for nominal attributes and
//! weighted running moments for continuous ones, scored in log space.
//!
//! The sensitive attribute is an ordinary predictive feature, but its table is
//! kept as a class-by-group [`SensitiveTable`] so discrimination mitigation can
//! shift weight between its cells without touching the class priors.

mod gaussian;
mod nominal;
mod sensitive;
mod snapshot;

use std::sync::Arc;

pub use gaussian::{GaussianStat, MIN_DENSITY_WEIGHT, VARIANCE_FLOOR};
pub use nominal::NominalTable;
pub use sensitive::{CountShift, SensitiveCounts, SensitiveTable};
pub use snapshot::{ModelSnapshot, SNAPSHOT_VERSION};

use crate::error::ModelError;
use crate::schema::{BinaryLabel, Instance, StreamSchema};

/// Feature names the model was built for, in instance order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureLayout {
    pub nominal: Vec<String>,
    pub continuous: Vec<String>,
    pub sensitive: String,
}

impl FeatureLayout {
    pub fn from_schema(schema: &StreamSchema) -> Self {
        Self {
            nominal: schema.nominal_features().map(|a| a.name.clone()).collect(),
            continuous: schema.continuous_features().map(|a| a.name.clone()).collect(),
            sensitive: schema.sensitive_attribute().to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posterior {
    pub log_score_positive: f64,
    pub log_score_negative: f64,
    pub predicted: BinaryLabel,
}

impl Posterior {
    fn from_scores(scores: [f64; 2]) -> Self {
        let negative = scores[BinaryLabel::Negative.index()];
        let positive = scores[BinaryLabel::Positive.index()];
        // ties go to the negative class
        let predicted = if positive > negative { BinaryLabel::Positive } else { BinaryLabel::Negative };
        Self { log_score_positive: positive, log_score_negative: negative, predicted }
    }

    pub fn log_score(&self, class: BinaryLabel) -> f64 {
        match class {
            BinaryLabel::Positive => self.log_score_positive,
            BinaryLabel::Negative => self.log_score_negative,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedNaiveBayes {
    layout: Arc<FeatureLayout>,
    class_weight: [f64; 2],
    nominal: Vec<NominalTable>,
    sensitive: SensitiveTable,
    /// `gaussian[attr][class]`
    gaussian: Vec<[GaussianStat; 2]>,
}

impl MixedNaiveBayes {
    pub fn new(schema: &StreamSchema) -> Self {
        Self::with_layout(Arc::new(FeatureLayout::from_schema(schema)))
    }

    pub fn with_layout(layout: Arc<FeatureLayout>) -> Self {
        Self {
            class_weight: [0.0; 2],
            nominal: vec![NominalTable::new(); layout.nominal.len()],
            sensitive: SensitiveTable::default(),
            gaussian: vec![[GaussianStat::new(); 2]; layout.continuous.len()],
            layout,
        }
    }

    pub fn layout(&self) -> &FeatureLayout {
        &self.layout
    }

    pub fn class_weight(&self, class: BinaryLabel) -> f64 {
        self.class_weight[class.index()]
    }

    pub fn total_weight(&self) -> f64 {
        self.class_weight[0] + self.class_weight[1]
    }

    /// Add-one smoothed class prior, so a class without any weight still
    /// scores finitely. With no data both priors are 1/2.
    pub fn prior(&self, class: BinaryLabel) -> f64 {
        (self.class_weight(class) + 1.0) / (self.total_weight() + 2.0)
    }

    pub fn nominal_table(&self, index: usize) -> &NominalTable {
        &self.nominal[index]
    }

    pub fn gaussian(&self, index: usize, class: BinaryLabel) -> &GaussianStat {
        &self.gaussian[index][class.index()]
    }

    pub fn sensitive_table(&self) -> &SensitiveTable {
        &self.sensitive
    }

    pub fn check_layout(&self, instance: &Instance) -> Result<(), ModelError> {
        if instance.nominal.len() != self.nominal.len() || instance.continuous.len() != self.gaussian.len() {
            return Err(ModelError::Layout(format!(
                "expected {} nominal / {} continuous values, got {} / {}",
                self.nominal.len(),
                self.gaussian.len(),
                instance.nominal.len(),
                instance.continuous.len()
            )));
        }
        Ok(())
    }

    pub fn predict(&self, instance: &Instance) -> Posterior {
        debug_assert!(self.check_layout(instance).is_ok());
        let mut scores = [0.0; 2];
        for class in BinaryLabel::ALL {
            let mut score = self.prior(class).ln();
            for (table, value) in self.nominal.iter().zip(&instance.nominal) {
                score += table.log_likelihood(value, class);
            }
            score += self.sensitive.log_likelihood(instance.group, class);
            for (stats, &value) in self.gaussian.iter().zip(&instance.continuous) {
                score += stats[class.index()].log_density(value);
            }
            scores[class.index()] = score;
        }
        Posterior::from_scores(scores)
    }

    pub fn train(&mut self, instance: &Instance, weight: f64) -> Result<(), ModelError> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(ModelError::InvalidWeight(weight));
        }
        self.check_layout(instance)?;
        let class = instance.label;
        self.class_weight[class.index()] += weight;
        for (table, value) in self.nominal.iter_mut().zip(&instance.nominal) {
            table.add(value, class, weight);
        }
        self.sensitive.add(instance.group, class, weight);
        for (stats, &value) in self.gaussian.iter_mut().zip(&instance.continuous) {
            stats[class.index()].update(value, weight);
        }
        Ok(())
    }

    /// N(C₊,S⁻), N(C₋,S⁻), N(C₊,S⁺), N(C₋,S⁺) from the sensitive attribute's table.
    pub fn sensitive_counts(&self) -> SensitiveCounts {
        self.sensitive.counts()
    }

    /// Shift weight between the sensitive cells. Group totals, class priors
    /// and every other attribute table are unchanged. A rejected shift leaves
    /// the model as it was.
    pub fn apply_count_shift(&mut self, shift: &CountShift) -> Result<(), ModelError> {
        self.sensitive.apply_shift(shift)
    }

    pub(crate) fn set_sensitive_table(&mut self, table: SensitiveTable) {
        self.sensitive = table;
    }

    pub fn snapshot(&self) -> ModelSnapshot {
        ModelSnapshot::of(self)
    }

    pub fn restore(&mut self, snapshot: &ModelSnapshot) {
        *self = snapshot.model().clone();
    }
}
