use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FeatureLayout, GaussianStat, MixedNaiveBayes, NominalTable, SensitiveTable};
use crate::error::ModelError;

pub const SNAPSHOT_VERSION: u32 = 1;

/// Deep, independent copy of a model's statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSnapshot {
    model: MixedNaiveBayes,
}

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    version: u32,
    class_weight: [f64; 2],
    sensitive_attribute: String,
    sensitive: SensitiveTable,
    nominal: Vec<NominalDocument>,
    continuous: Vec<ContinuousDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NominalDocument {
    attribute: String,
    row_totals: [f64; 2],
    /// category -> [negative, positive]
    counts: BTreeMap<String, [f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ContinuousDocument {
    attribute: String,
    negative: GaussianStat,
    positive: GaussianStat,
}

impl ModelSnapshot {
    pub(super) fn of(model: &MixedNaiveBayes) -> Self {
        Self { model: model.clone() }
    }

    pub fn model(&self) -> &MixedNaiveBayes {
        &self.model
    }

    pub fn into_model(self) -> MixedNaiveBayes {
        self.model
    }

    /// Versioned JSON document with every count, moment and observed
    /// category. Categories are sorted, so the text is stable.
    pub fn to_json(&self) -> String {
        let m = &self.model;
        let doc = Document {
            version: SNAPSHOT_VERSION,
            class_weight: m.class_weight,
            sensitive_attribute: m.layout.sensitive.clone(),
            sensitive: m.sensitive,
            nominal: m
                .layout
                .nominal
                .iter()
                .zip(&m.nominal)
                .map(|(name, table)| NominalDocument {
                    attribute: name.clone(),
                    row_totals: table.row_totals,
                    counts: table.counts.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                })
                .collect(),
            continuous: m
                .layout
                .continuous
                .iter()
                .zip(&m.gaussian)
                .map(|(name, stats)| ContinuousDocument {
                    attribute: name.clone(),
                    negative: stats[0],
                    positive: stats[1],
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("snapshot document is always serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: Document = serde_json::from_str(text).map_err(|e| ModelError::SnapshotFormat(e.to_string()))?;
        if doc.version != SNAPSHOT_VERSION {
            return Err(ModelError::SnapshotVersion(doc.version));
        }
        let layout = FeatureLayout {
            nominal: doc.nominal.iter().map(|n| n.attribute.clone()).collect(),
            continuous: doc.continuous.iter().map(|c| c.attribute.clone()).collect(),
            sensitive: doc.sensitive_attribute,
        };
        let nominal = doc
            .nominal
            .into_iter()
            .map(|n| NominalTable {
                counts: n.counts.into_iter().map(|(k, v)| (Arc::from(k.as_str()), v)).collect(),
                row_totals: n.row_totals,
            })
            .collect();
        let gaussian = doc.continuous.into_iter().map(|c| [c.negative, c.positive]).collect();
        Ok(Self {
            model: MixedNaiveBayes {
                layout: Arc::new(layout),
                class_weight: doc.class_weight,
                nominal,
                sensitive: doc.sensitive,
                gaussian,
            },
        })
    }
}
