//! Prequential (test-then-train) evaluation.
//!
//! Every instance goes through the same fixed sequence:
//! predict → record confusion and parity → update the imbalance monitor →
//! drift check (and recurrence handling) → weight → train → mitigate.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::drift::{self, DriftDetector, RecurrenceAction, RecurrenceStore};
use crate::error::RunError;
use crate::fairness::{self, FairnessState, MitigationDirection};
use crate::imbalance::ImbalanceState;
use crate::model::{MixedNaiveBayes, Posterior};
use crate::schema::{BinaryLabel, Instance, SensitiveGroup, StreamSchema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Plain mixed Naive Bayes.
    Mnb,
    /// With discrimination mitigation.
    Damnb,
    /// With discrimination mitigation, imbalance weighting and drift handling.
    Dcamnb,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Mnb, Variant::Damnb, Variant::Dcamnb];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Mnb => "mnb",
            Variant::Damnb => "damnb",
            Variant::Dcamnb => "dcamnb",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mnb" => Ok(Variant::Mnb),
            "damnb" => Ok(Variant::Damnb),
            "dcamnb" => Ok(Variant::Dcamnb),
            other => Err(format!("unknown variant `{other}` (expected mnb, damnb or dcamnb)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub alpha: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub window: usize,
    pub eta: f64,
    pub bucket_width: f64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Self {
            alpha: 0.9,
            epsilon: fairness::DEFAULT_EPSILON,
            lambda: fairness::DEFAULT_LAMBDA,
            gamma: fairness::DEFAULT_GAMMA,
            window: drift::DEFAULT_WINDOW,
            eta: drift::DEFAULT_ETA,
            bucket_width: drift::DEFAULT_BUCKET_WIDTH,
        }
    }
}

impl Hyperparameters {
    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |what: &str| Err(RunError::Config(what.to_string()));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if !(0.0..1.0).contains(&self.lambda) {
            return bad("lambda must lie in [0, 1)");
        }
        if !(self.gamma >= 0.0) {
            return bad("gamma must be non-negative");
        }
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if !(self.eta > 0.0) {
            return bad("eta must be positive");
        }
        if !(self.bucket_width > 0.0) {
            return bad("bucket width must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariantConfig {
    pub use_imbalance_weights: bool,
    pub use_mitigation: bool,
    pub use_drift_store: bool,
    pub hyper: Hyperparameters,
    pub rng_seed: u64,
}

impl VariantConfig {
    pub fn for_variant(variant: Variant) -> Self {
        let (weights, mitigation, drift) = match variant {
            Variant::Mnb => (false, false, false),
            Variant::Damnb => (false, true, false),
            Variant::Dcamnb => (true, true, true),
        };
        Self {
            use_imbalance_weights: weights,
            use_mitigation: mitigation,
            use_drift_store: drift,
            hyper: Hyperparameters::default(),
            rng_seed: 0,
        }
    }

    pub fn with_hyper(mut self, hyper: Hyperparameters) -> Self {
        self.hyper = hyper;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub recall: f64,
    pub balanced_accuracy: f64,
    pub gmean: f64,
    pub tpr: f64,
    pub tnr: f64,
    pub disc_score: f64,
}

/// Rates with an empty denominator are reported as 0.
pub fn compute_metrics(tp: u64, fp: u64, tn: u64, fn_: u64, disc: f64) -> Metrics {
    let rate = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let tpr = rate(tp, tp + fn_);
    let tnr = rate(tn, tn + fp);
    Metrics {
        recall: tpr,
        balanced_accuracy: (tpr + tnr) / 2.0,
        gmean: (tpr * tnr).sqrt(),
        tpr,
        tnr,
        disc_score: disc,
    }
}

/// Outcome of an evaluation.
///
/// For a single stream all fields describe that stream. For a shuffled run
/// the metrics are arithmetic means over `per_shuffle`, while the confusion
/// counts, `steps`, `drift_events` and `mitigations` are totals across shuffles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub steps: u64,
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub recall: f64,
    pub balanced_accuracy: f64,
    pub gmean: f64,
    pub tpr: f64,
    pub tnr: f64,
    pub disc_score: f64,
    pub drift_events: u64,
    pub mitigations: u64,
    /// Wall-clock time; kept out of serialised reports so they stay reproducible.
    #[serde(skip)]
    pub runtime_seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_shuffle: Option<Vec<EvalReport>>,
}

impl EvalReport {
    pub fn metrics(&self) -> Metrics {
        Metrics {
            recall: self.recall,
            balanced_accuracy: self.balanced_accuracy,
            gmean: self.gmean,
            tpr: self.tpr,
            tnr: self.tnr,
            disc_score: self.disc_score,
        }
    }

    fn from_counts(c: &Counters, disc: f64, runtime_seconds: f64) -> Self {
        let m = compute_metrics(c.tp, c.fp, c.tn, c.fn_, disc);
        Self {
            steps: c.steps,
            tp: c.tp,
            fp: c.fp,
            tn: c.tn,
            fn_: c.fn_,
            recall: m.recall,
            balanced_accuracy: m.balanced_accuracy,
            gmean: m.gmean,
            tpr: m.tpr,
            tnr: m.tnr,
            disc_score: m.disc_score,
            drift_events: c.drift_events,
            mitigations: c.mitigations,
            runtime_seconds,
            per_shuffle: None,
        }
    }

    /// Arithmetic mean of each metric; counts are summed.
    pub fn average(reports: Vec<EvalReport>) -> EvalReport {
        assert!(!reports.is_empty(), "cannot average zero reports");
        let n = reports.len() as f64;
        let mean = |f: fn(&EvalReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
        let sum = |f: fn(&EvalReport) -> u64| reports.iter().map(f).sum::<u64>();
        EvalReport {
            steps: sum(|r| r.steps),
            tp: sum(|r| r.tp),
            fp: sum(|r| r.fp),
            tn: sum(|r| r.tn),
            fn_: sum(|r| r.fn_),
            recall: mean(|r| r.recall),
            balanced_accuracy: mean(|r| r.balanced_accuracy),
            gmean: mean(|r| r.gmean),
            tpr: mean(|r| r.tpr),
            tnr: mean(|r| r.tnr),
            disc_score: mean(|r| r.disc_score),
            drift_events: sum(|r| r.drift_events),
            mitigations: sum(|r| r.mitigations),
            runtime_seconds: reports.iter().map(|r| r.runtime_seconds).sum(),
            per_shuffle: Some(reports),
        }
    }
}

/// Per-instance trace record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: u64,
    pub true_label: BinaryLabel,
    pub predicted: BinaryLabel,
    pub group: SensitiveGroup,
    pub weight: f64,
    pub ocim: f64,
    pub disc: f64,
    pub drift: Option<RecurrenceAction>,
    pub mitigation: MitigationDirection,
}

pub const TRACE_HEADER: &str = "step,true,pred,group,weight,ocim,disc,drift,mitigation";

impl StepRecord {
    /// One delimited trace line matching [`TRACE_HEADER`], without newline.
    pub fn to_csv_line(&self) -> String {
        let drift = match self.drift {
            None => "none",
            Some(action) => action.as_str(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.step,
            self.true_label.index(),
            self.predicted.index(),
            self.group,
            self.weight,
            self.ocim,
            self.disc,
            drift,
            self.mitigation.as_str()
        )
    }
}

/// Pipeline stages, in the order they run for every instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Predict,
    Record,
    Imbalance,
    Drift,
    Weight,
    Train,
    Mitigate,
}

/// Hook for instrumenting the step sequence.
pub trait StageObserver {
    fn on_stage(&mut self, step: u64, stage: Stage, model: &MixedNaiveBayes);
}

impl StageObserver for () {
    #[inline]
    fn on_stage(&mut self, _: u64, _: Stage, _: &MixedNaiveBayes) {}
}

#[derive(Debug, Default, Clone, Copy)]
struct Counters {
    steps: u64,
    tp: u64,
    fp: u64,
    tn: u64,
    fn_: u64,
    drift_events: u64,
    mitigations: u64,
}

impl Counters {
    fn record(&mut self, truth: BinaryLabel, predicted: BinaryLabel) {
        self.steps += 1;
        match (truth, predicted) {
            (BinaryLabel::Positive, BinaryLabel::Positive) => self.tp += 1,
            (BinaryLabel::Positive, BinaryLabel::Negative) => self.fn_ += 1,
            (BinaryLabel::Negative, BinaryLabel::Positive) => self.fp += 1,
            (BinaryLabel::Negative, BinaryLabel::Negative) => self.tn += 1,
        }
    }
}

/// The live learner plus every tracker, advanced one instance at a time.
#[derive(Debug, Clone)]
pub struct Prequential {
    config: VariantConfig,
    model: MixedNaiveBayes,
    fairness: FairnessState,
    imbalance: ImbalanceState,
    detector: DriftDetector,
    store: RecurrenceStore,
    counters: Counters,
}

impl Prequential {
    pub fn new(schema: &StreamSchema, config: VariantConfig) -> Result<Self, RunError> {
        config.hyper.validate()?;
        let h = config.hyper;
        Ok(Self {
            model: MixedNaiveBayes::new(schema),
            fairness: FairnessState::new(h.gamma, h.epsilon, h.lambda),
            imbalance: ImbalanceState::new(h.alpha),
            detector: DriftDetector::new(h.window, h.eta),
            store: RecurrenceStore::new(),
            counters: Counters::default(),
            config,
        })
    }

    pub fn model(&self) -> &MixedNaiveBayes {
        &self.model
    }

    pub fn fairness(&self) -> &FairnessState {
        &self.fairness
    }

    pub fn imbalance(&self) -> &ImbalanceState {
        &self.imbalance
    }

    pub fn store(&self) -> &RecurrenceStore {
        &self.store
    }

    pub fn step(&mut self, instance: &Instance) -> Result<StepRecord, RunError> {
        self.step_observed(instance, &mut ())
    }

    pub fn step_observed(
        &mut self,
        instance: &Instance,
        observer: &mut impl StageObserver,
    ) -> Result<StepRecord, RunError> {
        let step = self.counters.steps;
        let row_error = |source| RunError::Model { row: step as usize, source };
        self.model.check_layout(instance).map_err(row_error)?;

        observer.on_stage(step, Stage::Predict, &self.model);
        let Posterior { predicted, .. } = self.model.predict(instance);

        observer.on_stage(step, Stage::Record, &self.model);
        self.counters.record(instance.label(), predicted);
        self.fairness.record_prediction(instance.group(), predicted);

        observer.on_stage(step, Stage::Imbalance, &self.model);
        self.imbalance.update(instance.label());
        let ocim = self.imbalance.ocim();

        observer.on_stage(step, Stage::Drift, &self.model);
        let mut drift = None;
        if self.config.use_drift_store {
            if let Some(event) = self.detector.observe(ocim) {
                self.counters.drift_events += 1;
                let sig = drift::signature(event.ocim, self.config.hyper.bucket_width);
                // The sensitive table carries the accumulated mitigation shifts,
                // which belong to the stream rather than to a stored concept.
                let sensitive = *self.model.sensitive_table();
                let action = self.store.on_drift(sig, &mut self.model);
                if action == RecurrenceAction::Restored {
                    self.model.set_sensitive_table(sensitive);
                }
                drift = Some(action);
            }
        }

        observer.on_stage(step, Stage::Weight, &self.model);
        let weight = if self.config.use_imbalance_weights {
            self.imbalance.instance_weight(instance.label())
        } else {
            1.0
        };

        observer.on_stage(step, Stage::Train, &self.model);
        self.model.train(instance, weight).map_err(row_error)?;

        observer.on_stage(step, Stage::Mitigate, &self.model);
        let mut mitigation = MitigationDirection::None;
        if self.config.use_mitigation {
            let action = self.fairness.decide_mitigation(&self.model.sensitive_counts());
            if action.direction != MitigationDirection::None {
                self.model.apply_count_shift(&action.deltas).map_err(row_error)?;
                self.counters.mitigations += 1;
                mitigation = action.direction;
            }
        }

        Ok(StepRecord {
            step,
            true_label: instance.label(),
            predicted,
            group: instance.group(),
            weight,
            ocim,
            disc: self.fairness.discrimination(),
            drift,
            mitigation,
        })
    }

    pub fn report(&self, runtime_seconds: f64) -> EvalReport {
        EvalReport::from_counts(&self.counters, self.fairness.discrimination(), runtime_seconds)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: EvalReport,
    pub trace: Vec<StepRecord>,
}

/// Evaluate one ordered stream. The trace is collected only when `trace` is set.
pub fn run_stream<'a>(
    schema: &StreamSchema,
    stream: impl IntoIterator<Item = &'a Instance>,
    config: &VariantConfig,
    trace: bool,
) -> Result<RunOutput, RunError> {
    run_stream_observed(schema, stream, config, trace, &mut ())
}

pub fn run_stream_observed<'a>(
    schema: &StreamSchema,
    stream: impl IntoIterator<Item = &'a Instance>,
    config: &VariantConfig,
    trace: bool,
    observer: &mut impl StageObserver,
) -> Result<RunOutput, RunError> {
    let started = Instant::now();
    let mut run = Prequential::new(schema, *config)?;
    let mut records = Vec::new();
    for instance in stream {
        let rec = run.step_observed(instance, observer)?;
        if trace {
            records.push(rec);
        }
    }
    if run.counters.steps == 0 {
        return Err(RunError::EmptyStream);
    }
    Ok(RunOutput { report: run.report(started.elapsed().as_secs_f64()), trace: records })
}

/// Seeded Fisher–Yates permutation of `0..len`.
pub fn permutation(len: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..len).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

#[derive(Debug, Clone)]
pub struct ShuffledOutput {
    pub report: EvalReport,
    /// One trace per shuffle (empty traces when tracing is off).
    pub traces: Vec<Vec<StepRecord>>,
}

/// Run `shuffles` independent permutations seeded `rng_seed, rng_seed + 1, …`
/// and average their metrics. Runs execute in parallel; results are reduced
/// in seed order.
pub fn run_shuffled(
    schema: &StreamSchema,
    dataset: &[Instance],
    config: &VariantConfig,
    shuffles: usize,
    trace: bool,
) -> Result<ShuffledOutput, RunError> {
    if shuffles == 0 {
        return Err(RunError::NoShuffles);
    }
    if dataset.is_empty() {
        return Err(RunError::EmptyStream);
    }
    config.hyper.validate()?;
    let outputs: Vec<RunOutput> = (0..shuffles as u64)
        .into_par_iter()
        .map(|i| {
            let order = permutation(dataset.len(), config.rng_seed.wrapping_add(i));
            run_stream(schema, order.iter().map(|&j| &dataset[j]), config, trace)
        })
        .collect::<Result<_, _>>()?;
    let (reports, traces) = outputs.into_iter().map(|o| (o.report, o.trace)).unzip();
    Ok(ShuffledOutput { report: EvalReport::average(reports), traces })
}
