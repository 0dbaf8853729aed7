//! Manifest-driven loading of delimited datasets into instance streams.
//!
//! A manifest is a TOML document:
//!
//! ```toml
//! path = "adult.csv"            # relative to the manifest file
//! delimiter = ","               # default ","
//! has_header = true             # default true
//! missing_markers = ["?", ""]   # default ["?", ""]
//!
//! [label]
//! column = "income"
//! positive = ">50K"
//!
//! [sensitive]
//! column = "sex"
//! protected = "Female"
//!
//! [[attributes]]
//! name = "age"
//! kind = "continuous"           # or "nominal"
//! ```
//!
//! `attributes` must list every used column, including the label and the
//! sensitive column. Other columns in the file are ignored. Without a header
//! the attributes bind to the columns in order.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::IngestError;
use crate::schema::{Attribute, AttributeKind, BinaryLabel, Instance, SensitiveGroup, StreamSchema};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSpec {
    pub column: String,
    pub positive: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensitiveSpec {
    pub column: String,
    pub protected: String,
}

fn default_delimiter() -> char {
    ','
}

fn default_true() -> bool {
    true
}

fn default_missing() -> Vec<String> {
    vec!["?".to_string(), String::new()]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub path: PathBuf,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    #[serde(default = "default_true")]
    pub has_header: bool,
    #[serde(default = "default_missing")]
    pub missing_markers: Vec<String>,
    pub label: LabelSpec,
    pub sensitive: SensitiveSpec,
    pub attributes: Vec<Attribute>,
}

impl DatasetManifest {
    /// Parse a manifest; a relative `path` is resolved against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path, origin: &Path) -> Result<Self, IngestError> {
        let mut manifest: DatasetManifest = toml::from_str(text)
            .map_err(|e| IngestError::Manifest { path: origin.to_path_buf(), message: e.to_string() })?;
        if manifest.path.is_relative() {
            manifest.path = base_dir.join(&manifest.path);
        }
        if !manifest.delimiter.is_ascii() {
            return Err(IngestError::Manifest {
                path: origin.to_path_buf(),
                message: format!("delimiter `{}` is not a single ASCII character", manifest.delimiter),
            });
        }
        manifest.schema()?;
        Ok(manifest)
    }

    pub fn from_file(path: &Path) -> Result<Self, IngestError> {
        let text = fs::read_to_string(path).map_err(|source| IngestError::Io { path: path.to_path_buf(), source })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml_str(&text, base, path)
    }

    pub fn schema(&self) -> Result<StreamSchema, IngestError> {
        Ok(StreamSchema::new(
            self.attributes.clone(),
            &self.label.column,
            &self.label.positive,
            &self.sensitive.column,
            &self.sensitive.protected,
        )?)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningStats {
    pub raw_rows: u64,
    pub kept: u64,
    pub dropped: u64,
    /// Rows dropped per column (a row is attributed to the first offending column).
    pub dropped_by_column: BTreeMap<String, u64>,
    pub positives: u64,
    pub protected: u64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub schema: StreamSchema,
    pub instances: Vec<Instance>,
    pub stats: CleaningStats,
}

enum Slot {
    Label,
    Sensitive,
    Nominal(usize),
    Continuous(usize),
}

pub fn load(manifest: &DatasetManifest) -> Result<Dataset, IngestError> {
    let schema = manifest.schema()?;
    let path = &manifest.path;
    let file = fs::File::open(path).map_err(|source| IngestError::Io { path: path.clone(), source })?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(manifest.delimiter as u8)
        .has_headers(manifest.has_header)
        .trim(csv::Trim::All)
        .from_reader(file);

    let csv_error = |row: usize, e: csv::Error| IngestError::Csv { path: path.clone(), row, message: e.to_string() };

    let nominal_index: HashMap<&str, usize> =
        schema.nominal_features().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
    let continuous_index: HashMap<&str, usize> =
        schema.continuous_features().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();

    // (column index, slot, attribute name)
    let mut plan: Vec<(usize, Slot, &str)> = Vec::new();
    let header: Option<Vec<String>> = if manifest.has_header {
        Some(reader.headers().map_err(|e| csv_error(0, e))?.iter().map(str::to_string).collect())
    } else {
        None
    };
    for (position, attr) in schema.attributes().iter().enumerate() {
        let column = match &header {
            Some(names) => names.iter().position(|h| *h == attr.name).ok_or_else(|| IngestError::MissingColumn {
                path: path.clone(),
                attribute: attr.name.clone(),
            })?,
            None => position,
        };
        let slot = if attr.name == schema.label_attribute() {
            Slot::Label
        } else if attr.name == schema.sensitive_attribute() {
            Slot::Sensitive
        } else {
            match attr.kind {
                AttributeKind::Nominal => Slot::Nominal(nominal_index[attr.name.as_str()]),
                AttributeKind::Continuous => Slot::Continuous(continuous_index[attr.name.as_str()]),
            }
        };
        plan.push((column, slot, attr.name.as_str()));
    }

    let n_nominal = nominal_index.len();
    let n_continuous = continuous_index.len();
    let mut interned: Vec<HashMap<String, Arc<str>>> = vec![HashMap::new(); n_nominal];
    let mut sensitive_values: HashMap<String, Arc<str>> = HashMap::new();

    let mut stats = CleaningStats::default();
    let mut instances = Vec::new();
    let mut record = csv::StringRecord::new();
    let mut row = 0usize;
    loop {
        match reader.read_record(&mut record) {
            Ok(true) => {}
            Ok(false) => break,
            Err(e) => return Err(csv_error(row, e)),
        }
        row += 1;
        stats.raw_rows += 1;
        if header.is_none() && record.len() < plan.len() {
            return Err(IngestError::ColumnCount { path: path.clone(), expected: plan.len(), found: record.len() });
        }

        let mut nominal: Vec<Option<Arc<str>>> = vec![None; n_nominal];
        let mut continuous = vec![0.0; n_continuous];
        let mut label = BinaryLabel::Negative;
        let mut group = SensitiveGroup::NonProtected;
        let mut sensitive: Option<Arc<str>> = None;
        let mut offending: Option<&str> = None;

        for (column, slot, name) in &plan {
            let token = record.get(*column).unwrap_or("");
            if manifest.missing_markers.iter().any(|m| m == token) {
                offending = Some(name);
                break;
            }
            match slot {
                Slot::Label => label = schema.label_of(token),
                Slot::Sensitive => {
                    group = schema.group_of(token);
                    sensitive = Some(intern(&mut sensitive_values, token));
                }
                Slot::Nominal(i) => nominal[*i] = Some(intern(&mut interned[*i], token)),
                Slot::Continuous(i) => match token.parse::<f64>() {
                    Ok(v) if v.is_finite() => continuous[*i] = v,
                    _ => {
                        offending = Some(name);
                        break;
                    }
                },
            }
        }

        if let Some(name) = offending {
            stats.dropped += 1;
            *stats.dropped_by_column.entry(name.to_string()).or_default() += 1;
            continue;
        }
        stats.kept += 1;
        stats.positives += label.is_positive() as u64;
        stats.protected += (group == SensitiveGroup::Protected) as u64;
        instances.push(Instance {
            nominal: nominal.into_iter().map(|v| v.expect("every nominal slot is bound")).collect(),
            continuous,
            sensitive_value: sensitive.expect("sensitive slot is bound"),
            label,
            group,
        });
    }

    if stats.kept > 0 && stats.protected == 0 {
        stats.warnings.push(format!(
            "protected value `{}` never occurs in column `{}`",
            schema.protected_value(),
            schema.sensitive_attribute()
        ));
    }
    if stats.kept > 0 && stats.positives == 0 {
        stats.warnings.push(format!(
            "positive label `{}` never occurs in column `{}`",
            schema.positive_label(),
            schema.label_attribute()
        ));
    }
    Ok(Dataset { schema, instances, stats })
}

fn intern(pool: &mut HashMap<String, Arc<str>>, token: &str) -> Arc<str> {
    if let Some(v) = pool.get(token) {
        return Arc::clone(v);
    }
    let v: Arc<str> = Arc::from(token);
    pool.insert(token.to_string(), Arc::clone(&v));
    v
}
