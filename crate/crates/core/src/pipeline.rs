//! Per-column orchestration for profiling and anomaly detection.

use crate::candidates::{generate_candidates, sample_len};
use crate::config::{EngineConfig, Mode};
use crate::error::{Error, Result};
use crate::estimator::{estimate_auto, estimate_guided, LabelSet};
use crate::io::TableSource;
use crate::report::{Anomaly, ColumnReport, TemplateSummary};
use crate::sampler::{draw_sample, Sample};
use crate::selector::{pool_matches, score_candidates, select};
use crate::template::TemplateCluster;

/// The sample a run on `column` learns from; guided labels must cover it.
pub fn main_sample<S: AsRef<str>>(column: &[S], cfg: &EngineConfig) -> Result<Sample> {
    if column.is_empty() {
        return Err(Error::invalid("column has no rows"));
    }
    let n_tr = sample_len(column.len(), cfg.sample_policy)?;
    draw_sample(column, n_tr, cfg.seed)
}

fn summarize(clusters: &[TemplateCluster]) -> Vec<TemplateSummary> {
    clusters
        .iter()
        .map(|c| TemplateSummary {
            key: c.key(),
            count: c.size(),
        })
        .collect()
}

/// Describes every sampled record: exact templates, full coverage, no
/// selection.
pub fn profile_column<S: AsRef<str>>(
    name: &str,
    column: &[S],
    cfg: &EngineConfig,
) -> Result<ColumnReport> {
    cfg.validate()?;
    let sample = main_sample(column, cfg)?;
    let (clusters, mut patterns) = generate_candidates(&sample, 1.0, 1.0)?;
    score_candidates(&mut patterns, column)?;
    patterns.iter_mut().for_each(|p| p.selected = true);
    Ok(ColumnReport {
        column: name.to_owned(),
        mode: Mode::Profile,
        n: column.len(),
        n_tr: sample.len(),
        r_cov_estimated: 1.0,
        templates: summarize(&clusters),
        patterns,
        anomalies: Vec::new(),
        metrics: None,
    })
}

/// Learns a healthy pattern pool and reports every row it rejects.
pub fn detect_column<S: AsRef<str>>(
    name: &str,
    column: &[S],
    cfg: &EngineConfig,
    labels: Option<&LabelSet>,
) -> Result<ColumnReport> {
    cfg.validate()?;
    let sample = main_sample(column, cfg)?;

    let r_cov = match (cfg.fixed_r_cov, cfg.mode) {
        (Some(fixed), _) => fixed,
        (None, Mode::DetectGuided) => {
            let labels = labels.ok_or(Error::MissingLabels)?;
            labels.check_covers(&sample)?;
            estimate_guided(labels)?
        }
        (None, _) => estimate_auto(column, cfg)?,
    };
    let r_em = cfg.fixed_r_em.unwrap_or(r_cov);

    let (clusters, mut patterns) = generate_candidates(&sample, r_em, r_cov)?;
    score_candidates(&mut patterns, column)?;
    select(&mut patterns, column.len(), cfg.selection);

    let anomalies = pool_matches(&patterns, column)
        .into_iter()
        .zip(column)
        .enumerate()
        .filter(|(_, (matched, _))| !matched)
        .map(|(row, (_, value))| Anomaly {
            row,
            value: value.as_ref().to_owned(),
        })
        .collect();

    let mode = if cfg.mode == Mode::Profile {
        Mode::DetectAuto
    } else {
        cfg.mode
    };
    Ok(ColumnReport {
        column: name.to_owned(),
        mode,
        n: column.len(),
        n_tr: sample.len(),
        r_cov_estimated: r_cov,
        templates: summarize(&clusters),
        patterns,
        anomalies,
        metrics: None,
    })
}

/// Dispatches on `cfg.mode`.
pub fn run_column<S: AsRef<str>>(
    name: &str,
    column: &[S],
    cfg: &EngineConfig,
    labels: Option<&LabelSet>,
) -> Result<ColumnReport> {
    match cfg.mode {
        Mode::Profile => profile_column(name, column, cfg),
        _ => detect_column(name, column, cfg, labels),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelection {
    All,
    Named(Vec<String>),
}

impl ColumnSelection {
    /// Ordinals of the selected columns in table order.
    pub fn resolve(&self, table: &TableSource) -> Result<Vec<usize>> {
        match self {
            ColumnSelection::All => Ok((0..table.headers.len()).collect()),
            ColumnSelection::Named(names) => names
                .iter()
                .map(|name| {
                    table.column_index(name).ok_or_else(|| {
                        Error::invalid(format!(
                            "unknown column {name:?}; available columns: {}",
                            table.headers.join(", ")
                        ))
                    })
                })
                .collect(),
        }
    }
}

/// One report per selected column. Column `i` (its ordinal in the table)
/// runs with seed `cfg.seed + i`.
pub fn run_table(
    table: &TableSource,
    cfg: &EngineConfig,
    selection: &ColumnSelection,
    labels: Option<&LabelSet>,
) -> Result<Vec<ColumnReport>> {
    let ordinals = selection.resolve(table)?;
    if labels.is_some() && ordinals.len() != 1 {
        return Err(Error::invalid(
            "a label file applies to exactly one column; select it with --column",
        ));
    }
    ordinals
        .into_iter()
        .map(|i| {
            let column_cfg = column_config(cfg, i);
            run_column(&table.headers[i], &table.column(i), &column_cfg, labels)
        })
        .collect()
}

pub fn column_config(cfg: &EngineConfig, ordinal: usize) -> EngineConfig {
    EngineConfig {
        seed: cfg.seed.wrapping_add(ordinal as u64),
        ..cfg.clone()
    }
}
