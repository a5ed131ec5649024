//! Candidate patterns and the per-column report artifact.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::Mode;
use crate::eval::DetectionMetrics;
use crate::pattern::PatternAst;

/// Serializes a rate as a JSON number with exactly six fractional digits.
pub(crate) fn fixed6<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !v.is_finite() {
        return Err(S::Error::custom(format!("non-finite rate {v}")));
    }
    let raw = RawValue::from_string(format!("{v:.6}")).map_err(S::Error::custom)?;
    raw.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidatePattern {
    #[serde(skip)]
    pub ast: PatternAst,
    pub regex: String,
    pub template_key: String,
    /// Share of the sample in the pattern's template cluster.
    #[serde(serialize_with = "fixed6")]
    pub sample_frequency: f64,
    /// Share of the full column the pattern matches.
    #[serde(serialize_with = "fixed6")]
    pub column_matching_rate: f64,
    pub selected: bool,
}

impl CandidatePattern {
    pub fn new(ast: PatternAst, template_key: String, sample_frequency: f64) -> Self {
        CandidatePattern {
            regex: ast.render(),
            ast,
            template_key,
            sample_frequency,
            column_matching_rate: 0.0,
            selected: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemplateSummary {
    pub key: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Anomaly {
    pub row: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnReport {
    pub column: String,
    pub mode: Mode,
    pub n: usize,
    pub n_tr: usize,
    #[serde(serialize_with = "fixed6")]
    pub r_cov_estimated: f64,
    pub templates: Vec<TemplateSummary>,
    pub patterns: Vec<CandidatePattern>,
    pub anomalies: Vec<Anomaly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<DetectionMetrics>,
}

impl ColumnReport {
    pub fn selected_patterns(&self) -> impl Iterator<Item = &CandidatePattern> {
        self.patterns.iter().filter(|p| p.selected)
    }

    pub fn selected_regexes(&self) -> Vec<&str> {
        self.selected_patterns().map(|p| p.regex.as_str()).collect()
    }

    pub fn anomaly_rows(&self) -> Vec<usize> {
        self.anomalies.iter().map(|a| a.row).collect()
    }
}
