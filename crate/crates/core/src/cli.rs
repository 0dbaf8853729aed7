//! Run and sweep commands behind the `fairstream` binary.
//!
//! Reports are pretty-printed JSON embedding the fully resolved request;
//! traces are comma-separated with header [`TRACE_HEADER`]. Both are written
//! atomically (temporary file + rename).

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{IngestError, RunError};
use crate::harness::{
    run_shuffled, run_stream, EvalReport, Hyperparameters, StepRecord, Variant, VariantConfig, TRACE_HEADER,
};
use crate::ingest::{self, CleaningStats, Dataset, DatasetManifest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit status: 2 for usage problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Evaluate the file in its stored order.
    Stream,
    /// Average over seeded random permutations.
    Shuffled,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stream" => Ok(Mode::Stream),
            "shuffled" => Ok(Mode::Shuffled),
            other => Err(format!("unknown mode `{other}` (expected stream or shuffled)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRequest {
    pub data: PathBuf,
    pub variant: Variant,
    pub alpha: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub window: usize,
    pub eta: f64,
    pub bucket_width: f64,
    pub mode: Mode,
    pub shuffles: usize,
    pub seed: u64,
    pub report: PathBuf,
    pub trace: Option<PathBuf>,
}

impl RunRequest {
    /// Request with every tuning knob at its default.
    pub fn new(data: impl Into<PathBuf>, variant: Variant, report: impl Into<PathBuf>) -> Self {
        let h = Hyperparameters::default();
        Self {
            data: data.into(),
            variant,
            alpha: h.alpha,
            epsilon: h.epsilon,
            lambda: h.lambda,
            gamma: h.gamma,
            window: h.window,
            eta: h.eta,
            bucket_width: h.bucket_width,
            mode: Mode::Shuffled,
            shuffles: 10,
            seed: 0,
            report: report.into(),
            trace: None,
        }
    }

    pub fn hyperparameters(&self) -> Hyperparameters {
        Hyperparameters {
            alpha: self.alpha,
            epsilon: self.epsilon,
            lambda: self.lambda,
            gamma: self.gamma,
            window: self.window,
            eta: self.eta,
            bucket_width: self.bucket_width,
        }
    }

    pub fn config(&self) -> VariantConfig {
        VariantConfig::for_variant(self.variant).with_hyper(self.hyperparameters()).with_seed(self.seed)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDocument {
    pub request: RunRequest,
    pub dataset: CleaningStats,
    pub report: EvalReport,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub report: EvalReport,
    pub trace_files: Vec<PathBuf>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.report;
        write!(
            f,
            "b_acc={:.4} gmean={:.4} recall={:.4} disc={:.5} steps={} runtime={:.2}s",
            r.balanced_accuracy, r.gmean, r.recall, r.disc_score, r.steps, r.runtime_seconds
        )
    }
}

pub fn load_dataset(path: &Path) -> Result<Dataset, CliError> {
    let manifest = DatasetManifest::from_file(path)?;
    Ok(ingest::load(&manifest)?)
}

pub fn cmd_run(request: &RunRequest) -> Result<RunSummary, CliError> {
    let dataset = load_dataset(&request.data)?;
    run_loaded(request, &dataset)
}

/// Execute a request against an already loaded dataset.
pub fn run_loaded(request: &RunRequest, dataset: &Dataset) -> Result<RunSummary, CliError> {
    let config = request.config();
    let want_trace = request.trace.is_some();
    let (report, traces) = match request.mode {
        Mode::Stream => {
            let out = run_stream(&dataset.schema, &dataset.instances, &config, want_trace)?;
            (out.report, vec![out.trace])
        }
        Mode::Shuffled => {
            let out = run_shuffled(&dataset.schema, &dataset.instances, &config, request.shuffles, want_trace)?;
            (out.report, out.traces)
        }
    };

    let mut trace_files = Vec::new();
    if let Some(path) = &request.trace {
        if request.mode == Mode::Stream {
            write_trace(path, &traces[0])?;
            trace_files.push(path.clone());
        } else {
            for (i, trace) in traces.iter().enumerate() {
                let p = with_suffix(path, &format!("shuffle{i}"));
                write_trace(&p, trace)?;
                trace_files.push(p);
            }
        }
    }

    let doc = ReportDocument { request: request.clone(), dataset: dataset.stats.clone(), report: report.clone() };
    let text = serde_json::to_string_pretty(&doc).expect("report document is always serialisable");
    write_atomic(&request.report, format!("{text}\n").as_bytes())?;
    Ok(RunSummary { report, trace_files })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Lambda,
    Alpha,
    Eta,
    Gamma,
    Epsilon,
    Window,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Lambda => "lambda",
            SweepParam::Alpha => "alpha",
            SweepParam::Eta => "eta",
            SweepParam::Gamma => "gamma",
            SweepParam::Epsilon => "epsilon",
            SweepParam::Window => "window",
        }
    }

    pub fn apply(self, request: &mut RunRequest, value: f64) -> Result<(), CliError> {
        match self {
            SweepParam::Lambda => request.lambda = value,
            SweepParam::Alpha => request.alpha = value,
            SweepParam::Eta => request.eta = value,
            SweepParam::Gamma => request.gamma = value,
            SweepParam::Epsilon => request.epsilon = value,
            SweepParam::Window => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(CliError::Usage(format!("window must be a positive integer, got {value}")));
                }
                request.window = value as usize;
            }
        }
        Ok(())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lambda" => Ok(SweepParam::Lambda),
            "alpha" => Ok(SweepParam::Alpha),
            "eta" => Ok(SweepParam::Eta),
            "gamma" => Ok(SweepParam::Gamma),
            "epsilon" => Ok(SweepParam::Epsilon),
            "window" => Ok(SweepParam::Window),
            other => Err(format!(
                "unknown sweep parameter `{other}` (expected lambda, alpha, eta, gamma, epsilon or window)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub balanced_accuracy: f64,
    pub disc_score: f64,
    pub report: PathBuf,
    pub traces: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub parameter: SweepParam,
    pub base: RunRequest,
    pub rows: Vec<SweepRow>,
}

impl SweepSummary {
    pub fn table(&self) -> String {
        let mut out = format!("{:>14}  {:>8}  {:>10}\n", self.parameter.as_str(), "b_acc", "disc");
        for row in &self.rows {
            out.push_str(&format!("{:>14}  {:>8.4}  {:>10.5}\n", row.value, row.balanced_accuracy, row.disc_score));
        }
        out
    }
}

/// One run per value, everything else held fixed. Per-value reports and
/// traces are written next to `base.report` / `base.trace` with a
/// `<param>-<value>` suffix; `base.report` itself receives the summary.
pub fn cmd_sweep(base: &RunRequest, parameter: SweepParam, values: &[f64]) -> Result<SweepSummary, CliError> {
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    let mut requests = Vec::with_capacity(values.len());
    for &value in values {
        let mut req = base.clone();
        parameter.apply(&mut req, value)?;
        req.config().hyper.validate()?;
        let tag = format!("{}-{}", parameter.as_str(), value);
        req.report = with_suffix(&base.report, &tag);
        req.trace = base.trace.as_ref().map(|t| with_suffix(t, &tag));
        requests.push((value, req));
    }

    let dataset = load_dataset(&base.data)?;
    let rows = requests
        .par_iter()
        .map(|(value, req)| {
            let summary = run_loaded(req, &dataset)?;
            Ok(SweepRow {
                value: *value,
                balanced_accuracy: summary.report.balanced_accuracy,
                disc_score: summary.report.disc_score,
                report: req.report.clone(),
                traces: summary.trace_files,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let summary = SweepSummary { parameter, base: base.clone(), rows };
    let text = serde_json::to_string_pretty(&summary).expect("sweep summary is always serialisable");
    write_atomic(&base.report, format!("{text}\n").as_bytes())?;
    Ok(summary)
}

pub fn write_trace(path: &Path, trace: &[StepRecord]) -> Result<(), CliError> {
    let mut buf = String::with_capacity(64 * (trace.len() + 1));
    buf.push_str(TRACE_HEADER);
    buf.push('\n');
    for rec in trace {
        buf.push_str(&rec.to_csv_line());
        buf.push('\n');
    }
    write_atomic(path, buf.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let err = |source| CliError::Write { path: path.to_path_buf(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(err)?;
    }
    let tmp = with_suffix(path, "tmp");
    let mut file = fs::File::create(&tmp).map_err(err)?;
    file.write_all(bytes).map_err(err)?;
    file.sync_all().map_err(err)?;
    drop(file);
    fs::rename(&tmp, path).map_err(err)
}

/// `out/report.json` + `tag` → `out/report.tag.json`.
pub fn with_suffix(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}
