//! Online mixed Naive Bayes for data streams that counteracts cumulative
//! statistical-parity discrimination and class imbalance.
//!
//! * [`model`]: weighted nominal/Gaussian Naive Bayes with a class-by-group
//!   table for the sensitive attribute
//! * [`imbalance`]: decayed class percentages and instance weights
//! * [`drift`]: OCIM drift detector and concept-recurrence store
//! * [`fairness`]: cumulative statistical parity and count-shift mitigation
//! * [`harness`]: prequential evaluation of the MNB / DAMNB / DCAMNB variants
//! * [`ingest`]: TOML manifests and delimited-file loading
//! * [`cli`]: run and sweep commands with report/trace writers

pub mod cli;
pub mod drift;
pub mod error;
pub mod fairness;
pub mod harness;
pub mod imbalance;
pub mod ingest;
pub mod model;
pub mod schema;

pub use error::{IngestError, ModelError, RunError, SchemaError};
pub use harness::{run_shuffled, run_stream, EvalReport, Variant, VariantConfig};
pub use model::{MixedNaiveBayes, Posterior};
pub use schema::{Attribute, AttributeKind, BinaryLabel, Instance, SensitiveGroup, StreamSchema};
