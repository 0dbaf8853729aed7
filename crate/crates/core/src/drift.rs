//! Drift detection on the OCIM signal and a snapshot store for recurring concepts.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::model::{MixedNaiveBayes, ModelSnapshot};

pub const DEFAULT_WINDOW: usize = 1000;
pub const DEFAULT_ETA: f64 = 0.02;
pub const DEFAULT_BUCKET_WIDTH: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftEvent {
    pub ocim: f64,
    pub mean: f64,
}

/// Fires when OCIM strays more than `eta` from its windowed mean, then stays
/// silent for one window length.
#[derive(Debug, Clone)]
pub struct DriftDetector {
    window: VecDeque<f64>,
    capacity: usize,
    sum: f64,
    eta: f64,
    cooldown: usize,
}

impl DriftDetector {
    pub fn new(window: usize, eta: f64) -> Self {
        assert!(window > 0, "drift window must be non-empty");
        assert!(eta > 0.0, "drift threshold must be positive");
        Self { window: VecDeque::with_capacity(window), capacity: window, sum: 0.0, eta, cooldown: 0 }
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    pub fn cooldown(&self) -> usize {
        self.cooldown
    }

    /// Mean over the most recent `min(seen, window)` values.
    pub fn mean(&self) -> f64 {
        if self.window.is_empty() {
            0.0
        } else {
            self.sum / self.window.len() as f64
        }
    }

    pub fn observe(&mut self, ocim: f64) -> Option<DriftEvent> {
        if self.window.len() == self.capacity {
            if let Some(old) = self.window.pop_front() {
                self.sum -= old;
            }
        }
        self.window.push_back(ocim);
        self.sum += ocim;

        if self.cooldown > 0 {
            self.cooldown -= 1;
            return None;
        }
        let mean = self.mean();
        if (ocim - mean).abs() > self.eta {
            self.cooldown = self.capacity;
            Some(DriftEvent { ocim, mean })
        } else {
            None
        }
    }
}

/// Quantized OCIM value identifying a concept.
pub type Signature = i64;

pub fn signature(ocim: f64, bucket_width: f64) -> Signature {
    assert!(bucket_width > 0.0, "bucket width must be positive");
    (ocim / bucket_width).floor() as Signature
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecurrenceAction {
    Stored,
    Restored,
}

impl RecurrenceAction {
    pub fn as_str(self) -> &'static str {
        match self {
            RecurrenceAction::Stored => "stored",
            RecurrenceAction::Restored => "restored",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RecurrenceStore {
    entries: BTreeMap<Signature, ModelSnapshot>,
}

impl RecurrenceStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, signature: Signature) -> Option<&ModelSnapshot> {
        self.entries.get(&signature)
    }

    /// A known signature restores its snapshot into `live`; an unknown one
    /// stores a snapshot of `live`, which keeps learning.
    pub fn on_drift(&mut self, signature: Signature, live: &mut MixedNaiveBayes) -> RecurrenceAction {
        match self.entries.get(&signature) {
            Some(snapshot) => {
                live.restore(snapshot);
                RecurrenceAction::Restored
            }
            None => {
                self.entries.insert(signature, live.snapshot());
                RecurrenceAction::Stored
            }
        }
    }
}
