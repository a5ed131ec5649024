//! Coverage-rate estimation, from labels or from sampled pattern pools.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::candidates::{generate_candidates, sample_len};
use crate::config::{EngineConfig, Selection};
use crate::error::{Error, Result};
use crate::sampler::{draw_subsets, Sample};
use crate::selector::{pool_matches, score_candidates, select};

/// Offset between the main-run seed and the first estimator subset seed,
/// so the main sample is never one of the estimation subsets.
pub const SUBSET_SEED_OFFSET: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Healthy,
    Anomalous,
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "healthy" => Ok(Label::Healthy),
            "anomalous" => Ok(Label::Anomalous),
            other => Err(Error::LabelMismatch(format!(
                "unknown label {other:?} (expected \"healthy\" or \"anomalous\")"
            ))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Healthy => "healthy",
            Label::Anomalous => "anomalous",
        })
    }
}

/// Health labels for the sampled rows, keyed by row index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    pub entries: BTreeMap<usize, Label>,
}

impl LabelSet {
    pub fn new(entries: BTreeMap<usize, Label>) -> Self {
        LabelSet { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn healthy(&self) -> usize {
        self.entries
            .values()
            .filter(|&&l| l == Label::Healthy)
            .count()
    }

    /// Errors unless the labels cover exactly the sampled rows.
    pub fn check_covers(&self, sample: &Sample) -> Result<()> {
        let missing: Vec<usize> = sample
            .indices
            .iter()
            .copied()
            .filter(|i| !self.entries.contains_key(i))
            .collect();
        let extra: Vec<usize> = self
            .entries
            .keys()
            .copied()
            .filter(|i| sample.indices.binary_search(i).is_err())
            .collect();
        if missing.is_empty() && extra.is_empty() {
            return Ok(());
        }
        let mut parts = Vec::new();
        if !missing.is_empty() {
            parts.push(format!("missing labels for rows {missing:?}"));
        }
        if !extra.is_empty() {
            parts.push(format!("labels for unsampled rows {extra:?}"));
        }
        Err(Error::LabelMismatch(parts.join("; ")))
    }
}

/// Healthy share of the labelled sample, floored at `1/N_tr`.
pub fn estimate_guided(labels: &LabelSet) -> Result<f64> {
    if labels.is_empty() {
        return Err(Error::invalid(
            "cannot estimate coverage from an empty label set",
        ));
    }
    let total = labels.len() as f64;
    Ok((labels.healthy() as f64 / total).max(1.0 / total))
}

/// Mean full-column coverage of the healthy pools built from
/// `cfg.n_subset` independent samples, each generated under `r_cov_init`.
pub fn estimate_auto<S: AsRef<str>>(column: &[S], cfg: &EngineConfig) -> Result<f64> {
    if column.is_empty() {
        return Err(Error::invalid(
            "cannot estimate coverage of an empty column",
        ));
    }
    let n_tr = sample_len(column.len(), cfg.sample_policy)?;
    let subsets = draw_subsets(
        column,
        n_tr,
        cfg.n_subset,
        cfg.seed.wrapping_add(SUBSET_SEED_OFFSET),
    )?;
    let mut total = 0.0;
    for subset in &subsets {
        let (_, mut candidates) = generate_candidates(subset, cfg.r_cov_init, cfg.r_cov_init)?;
        score_candidates(&mut candidates, column)?;
        select(&mut candidates, column.len(), Selection::KMeans);
        let hits = pool_matches(&candidates, column)
            .into_iter()
            .filter(|&m| m)
            .count();
        total += hits as f64 / column.len() as f64;
    }
    let mean = total / subsets.len() as f64;
    Ok(mean.clamp(1.0 / column.len() as f64, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(healthy: usize, anomalous: usize) -> LabelSet {
        let entries = (0..healthy)
            .map(|i| (i, Label::Healthy))
            .chain((healthy..healthy + anomalous).map(|i| (i, Label::Anomalous)))
            .collect();
        LabelSet::new(entries)
    }

    #[test]
    fn guided_is_healthy_share() {
        assert!((estimate_guided(&labels(280, 70)).unwrap() - 0.8).abs() < 1e-12);
        assert_eq!(estimate_guided(&labels(10, 0)).unwrap(), 1.0);
        assert_eq!(estimate_guided(&labels(0, 4)).unwrap(), 0.25);
        assert!(estimate_guided(&LabelSet::default()).is_err());
    }

    #[test]
    fn label_coverage_is_checked() {
        let sample = Sample {
            indices: vec![0, 1, 2],
            records: vec!["a".into(), "b".into(), "c".into()],
            population: 10,
        };
        assert!(labels(3, 0).check_covers(&sample).is_ok());
        let err = labels(2, 0).check_covers(&sample).unwrap_err().to_string();
        assert!(err.contains("missing labels for rows [2]"), "{err}");
        let err = labels(4, 0).check_covers(&sample).unwrap_err().to_string();
        assert!(err.contains("unsampled rows [3]"), "{err}");
    }

    #[test]
    fn label_strings() {
        assert_eq!("healthy".parse::<Label>().unwrap(), Label::Healthy);
        assert_eq!("anomalous".parse::<Label>().unwrap(), Label::Anomalous);
        assert!("bad".parse::<Label>().is_err());
    }

    #[test]
    fn clean_column_estimates_full_coverage() {
        let column: Vec<String> = (0..2000)
            .map(|i| format!("{:05}", (i * 7919) % 100_000))
            .collect();
        let cfg = EngineConfig::detect_auto();
        assert_eq!(estimate_auto(&column, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn auto_estimate_is_deterministic_and_bounded() {
        let column: Vec<String> = (0..3000)
            .map(|i| {
                if i % 10 == 0 {
                    format!("x{i}#")
                } else {
                    format!("{:04}-{:02}", 1900 + i % 120, 1 + i % 12)
                }
            })
            .collect();
        for k in [1, 5] {
            let cfg = EngineConfig {
                n_subset: k,
                seed: 11,
                ..EngineConfig::detect_auto()
            };
            let a = estimate_auto(&column, &cfg).unwrap();
            let b = estimate_auto(&column, &cfg).unwrap();
            assert_eq!(a, b);
            assert!(a > 0.0 && a <= 1.0);
        }
    }
}
