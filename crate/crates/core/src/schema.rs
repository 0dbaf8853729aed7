//! Stream vocabulary: attribute kinds, the schema that binds raw records to
//! instances, and the binary label / sensitive-group encodings.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::SchemaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeKind {
    Nominal,
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn nominal(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: AttributeKind::Nominal }
    }

    pub fn continuous(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: AttributeKind::Continuous }
    }
}

/// How rows with missing values are handled. Only row dropping is supported.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    #[default]
    DropRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryLabel {
    Negative,
    Positive,
}

impl BinaryLabel {
    pub const ALL: [BinaryLabel; 2] = [BinaryLabel::Negative, BinaryLabel::Positive];

    /// Dense index used by per-class arrays: negative = 0, positive = 1.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            BinaryLabel::Negative => 0,
            BinaryLabel::Positive => 1,
        }
    }

    pub fn is_positive(self) -> bool {
        self == BinaryLabel::Positive
    }
}

impl fmt::Display for BinaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinaryLabel::Negative => "negative",
            BinaryLabel::Positive => "positive",
        })
    }
}

/// Membership in the protected group (S⁻) or the non-protected group (S⁺).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitiveGroup {
    Protected,
    NonProtected,
}

impl SensitiveGroup {
    /// Dense index: protected = 0, non-protected = 1.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            SensitiveGroup::Protected => 0,
            SensitiveGroup::NonProtected => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            SensitiveGroup::Protected => SensitiveGroup::NonProtected,
            SensitiveGroup::NonProtected => SensitiveGroup::Protected,
        }
    }
}

impl fmt::Display for SensitiveGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SensitiveGroup::Protected => "protected",
            SensitiveGroup::NonProtected => "non_protected",
        })
    }
}

/// Declarative description of a labelled stream with one binary sensitive attribute.
///
/// The label and sensitive attribute are both members of `attributes`. Raw
/// tokens are trimmed before comparison; otherwise matching is case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamSchema {
    attributes: Vec<Attribute>,
    label_attribute: String,
    positive_label: String,
    sensitive_attribute: String,
    protected_value: String,
    #[serde(default)]
    missing_policy: MissingPolicy,
}

impl StreamSchema {
    pub fn new(
        attributes: Vec<Attribute>,
        label_attribute: impl Into<String>,
        positive_label: impl Into<String>,
        sensitive_attribute: impl Into<String>,
        protected_value: impl Into<String>,
    ) -> Result<Self, SchemaError> {
        let schema = Self {
            attributes,
            label_attribute: label_attribute.into(),
            positive_label: positive_label.into().trim().to_string(),
            sensitive_attribute: sensitive_attribute.into(),
            protected_value: protected_value.into().trim().to_string(),
            missing_policy: MissingPolicy::DropRow,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        let mut seen = HashSet::new();
        for attr in &self.attributes {
            if !seen.insert(attr.name.as_str()) {
                return Err(SchemaError::DuplicateAttribute(attr.name.clone()));
            }
        }
        if self.attribute(&self.label_attribute).is_none() {
            return Err(SchemaError::UnknownAttribute {
                role: "label",
                name: self.label_attribute.clone(),
            });
        }
        match self.attribute(&self.sensitive_attribute) {
            None => {
                return Err(SchemaError::UnknownAttribute {
                    role: "sensitive",
                    name: self.sensitive_attribute.clone(),
                })
            }
            Some(attr) if attr.kind != AttributeKind::Nominal => {
                return Err(SchemaError::SensitiveNotNominal(attr.name.clone()))
            }
            Some(_) => {}
        }
        if self.label_attribute == self.sensitive_attribute {
            return Err(SchemaError::LabelIsSensitive(self.label_attribute.clone()));
        }
        Ok(())
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn label_attribute(&self) -> &str {
        &self.label_attribute
    }

    pub fn positive_label(&self) -> &str {
        &self.positive_label
    }

    pub fn sensitive_attribute(&self) -> &str {
        &self.sensitive_attribute
    }

    pub fn protected_value(&self) -> &str {
        &self.protected_value
    }

    pub fn missing_policy(&self) -> MissingPolicy {
        self.missing_policy
    }

    /// Predictive nominal attributes, in schema order, excluding the label and
    /// the sensitive attribute (which the model tracks separately).
    pub fn nominal_features(&self) -> impl Iterator<Item = &Attribute> {
        self.attributes.iter().filter(move |a| {
            a.kind == AttributeKind::Nominal
                && a.name != self.label_attribute
                && a.name != self.sensitive_attribute
        })
    }

    pub fn continuous_features(&self) -> impl Iterator<Item = &Attribute> {
        self.attributes
            .iter()
            .filter(move |a| a.kind == AttributeKind::Continuous && a.name != self.label_attribute)
    }

    pub fn label_of(&self, raw: &str) -> BinaryLabel {
        if raw.trim() == self.positive_label {
            BinaryLabel::Positive
        } else {
            BinaryLabel::Negative
        }
    }

    pub fn group_of(&self, raw: &str) -> SensitiveGroup {
        if raw.trim() == self.protected_value {
            SensitiveGroup::Protected
        } else {
            SensitiveGroup::NonProtected
        }
    }

    /// Sensitive-group membership of a raw named record.
    pub fn classify_group(&self, record: &Record) -> Result<SensitiveGroup, SchemaError> {
        record
            .get(&self.sensitive_attribute)
            .map(|v| self.group_of(v))
            .ok_or_else(|| SchemaError::MissingValue(self.sensitive_attribute.clone()))
    }

    /// Build a validated instance from a raw named record (label included).
    pub fn instance(&self, record: &Record) -> Result<Instance, SchemaError> {
        for key in record.keys() {
            if self.attribute(key).is_none() {
                return Err(SchemaError::UnexpectedAttribute(key.clone()));
            }
        }
        self.build_instance(|name| record.get(name).map(String::as_str))
    }

    pub(crate) fn build_instance<'a>(
        &self,
        mut lookup: impl FnMut(&str) -> Option<&'a str>,
    ) -> Result<Instance, SchemaError> {
        let mut fetch = |name: &str| lookup(name).ok_or_else(|| SchemaError::MissingValue(name.to_string()));

        let label = self.label_of(fetch(&self.label_attribute)?);
        let sensitive = fetch(&self.sensitive_attribute)?.trim();
        let group = self.group_of(sensitive);

        let mut nominal = Vec::new();
        for attr in self.nominal_features() {
            nominal.push(Arc::from(fetch(&attr.name)?.trim()));
        }
        let mut continuous = Vec::new();
        for attr in self.continuous_features() {
            let raw = fetch(&attr.name)?.trim();
            let value: f64 = raw.parse().map_err(|_| SchemaError::NotANumber {
                attribute: attr.name.clone(),
                value: raw.to_string(),
            })?;
            if !value.is_finite() {
                return Err(SchemaError::NotANumber { attribute: attr.name.clone(), value: raw.to_string() });
            }
            continuous.push(value);
        }
        Ok(Instance { nominal, continuous, sensitive_value: Arc::from(sensitive), label, group })
    }
}

/// A raw record: attribute name to untrimmed token.
pub type Record = BTreeMap<String, String>;

/// One labelled observation bound to a schema.
///
/// `nominal` and `continuous` are aligned with
/// [`StreamSchema::nominal_features`] and [`StreamSchema::continuous_features`].
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub(crate) nominal: Vec<Arc<str>>,
    pub(crate) continuous: Vec<f64>,
    pub(crate) sensitive_value: Arc<str>,
    pub(crate) label: BinaryLabel,
    pub(crate) group: SensitiveGroup,
}

impl Instance {
    pub fn label(&self) -> BinaryLabel {
        self.label
    }

    pub fn group(&self) -> SensitiveGroup {
        self.group
    }

    pub fn nominal_values(&self) -> &[Arc<str>] {
        &self.nominal
    }

    pub fn continuous_values(&self) -> &[f64] {
        &self.continuous
    }

    pub fn sensitive_value(&self) -> &str {
        &self.sensitive_value
    }

    /// Copy of this instance with a different label; used by tests and the
    /// hand-built fixtures.
    pub fn with_label(mut self, label: BinaryLabel) -> Self {
        self.label = label;
        self
    }
}
