//! Evaluation protocols for profiling and anomaly detection.

mod metrics;
pub mod synth;

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::io::read_lines;
use crate::pipeline::profile_column;
use crate::report::{fixed6, ColumnReport};
use crate::sampler::draw_sample;

pub use metrics::DetectionMetrics;
use metrics::{harmonic, ratio};

/// Scores a detection report against a row-aligned clean column; a row is
/// a true anomaly when its dirty and clean values differ.
pub fn eval_detection<S: AsRef<str>, T: AsRef<str>>(
    report: &ColumnReport,
    dirty: &[S],
    clean: &[T],
) -> Result<DetectionMetrics> {
    if dirty.len() != clean.len() || report.n != dirty.len() {
        return Err(Error::invalid(format!(
            "length mismatch: report covers {} rows, dirty column has {}, truth has {}",
            report.n,
            dirty.len(),
            clean.len()
        )));
    }
    let mut predicted = vec![false; dirty.len()];
    for a in &report.anomalies {
        predicted[a.row] = true;
    }
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for ((d, c), &p) in dirty.iter().zip(clean).zip(&predicted) {
        let actual = d.as_ref() != c.as_ref();
        match (actual, p) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => {}
        }
    }
    Ok(DetectionMetrics::from_counts(tp, fp, fn_))
}

/// A named single-column dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub records: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainScore {
    pub domain: String,
    pub n_train: usize,
    pub n_test: usize,
    pub n_foreign: usize,
    pub patterns: Vec<String>,
    #[serde(serialize_with = "fixed6")]
    pub tp_rate: f64,
    #[serde(serialize_with = "fixed6")]
    pub fp_rate: f64,
    #[serde(serialize_with = "fixed6")]
    pub precision: f64,
    #[serde(serialize_with = "fixed6")]
    pub recall: f64,
    #[serde(serialize_with = "fixed6")]
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageScore {
    #[serde(serialize_with = "fixed6")]
    pub tp_rate: f64,
    #[serde(serialize_with = "fixed6")]
    pub fp_rate: f64,
    #[serde(serialize_with = "fixed6")]
    pub precision: f64,
    #[serde(serialize_with = "fixed6")]
    pub recall: f64,
    #[serde(serialize_with = "fixed6")]
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilingEvaluation {
    #[serde(serialize_with = "fixed6")]
    pub train_fraction: f64,
    pub seed: u64,
    pub domains: Vec<DomainScore>,
    pub average: AverageScore,
}

/// Profiles a random `train_fraction` of each domain, then measures how
/// much of the held-out rest the patterns match (true positives) and how
/// much of an equally sized draw from all other domains they match (false
/// positives). Precision is over counts; recall is the true-positive rate.
pub fn eval_profiling(
    domains: &[Domain],
    train_fraction: f64,
    seed: u64,
) -> Result<ProfilingEvaluation> {
    if domains.len() < 2 {
        return Err(Error::invalid(
            "profiling evaluation needs at least two domains",
        ));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    if let Some(d) = domains.iter().find(|d| d.records.len() < 2) {
        return Err(Error::invalid(format!(
            "domain {:?} needs at least two records",
            d.name
        )));
    }

    let mut scores = Vec::with_capacity(domains.len());
    for (i, domain) in domains.iter().enumerate() {
        let domain_seed = seed.wrapping_add(i as u64);
        let mut order: Vec<usize> = (0..domain.records.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(domain_seed));
        let n = order.len();
        let n_train = ((n as f64 * train_fraction).ceil() as usize).clamp(1, n - 1);
        let train: Vec<&str> = order[..n_train]
            .iter()
            .map(|&j| domain.records[j].as_str())
            .collect();
        let test: Vec<&str> = order[n_train..]
            .iter()
            .map(|&j| domain.records[j].as_str())
            .collect();

        let report = profile_column(
            &domain.name,
            &train,
            &EngineConfig::profile().with_seed(domain_seed),
        )?;
        let pool: Vec<_> = report.selected_patterns().map(|p| &p.ast).collect();
        let matches = |r: &str| pool.iter().any(|p| p.full_match(r));

        let foreign: Vec<&str> = domains
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, d)| d.records.iter().map(String::as_str))
            .collect();
        let draw = draw_sample(&foreign, test.len().min(foreign.len()), domain_seed)?;

        let tp = test.iter().filter(|r| matches(r)).count();
        let fp = draw.records.iter().filter(|r| matches(r)).count();
        let tp_rate = ratio(tp, test.len());
        let precision = ratio(tp, tp + fp);
        scores.push(DomainScore {
            domain: domain.name.clone(),
            n_train,
            n_test: test.len(),
            n_foreign: draw.len(),
            patterns: report
                .selected_regexes()
                .into_iter()
                .map(String::from)
                .collect(),
            tp_rate,
            fp_rate: ratio(fp, draw.len()),
            precision,
            recall: tp_rate,
            f1: harmonic(precision, tp_rate),
        });
    }

    let mean = |f: fn(&DomainScore) -> f64| scores.iter().map(f).sum::<f64>() / scores.len() as f64;
    let average = AverageScore {
        tp_rate: mean(|s| s.tp_rate),
        fp_rate: mean(|s| s.fp_rate),
        precision: mean(|s| s.precision),
        recall: mean(|s| s.recall),
        f1: mean(|s| s.f1),
    };
    Ok(ProfilingEvaluation {
        train_fraction,
        seed,
        domains: scores,
        average,
    })
}

/// Loads every regular file in `dir` as one domain (one record per line),
/// named by file stem, in file-name order.
pub fn load_domains(dir: impl AsRef<Path>) -> Result<Vec<Domain>> {
    let dir = dir.as_ref();
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| {
            !p.file_name()
                .is_some_and(|n| n.to_string_lossy().starts_with('.'))
        })
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let records = read_lines(&p)?;
            Ok(Domain { name, records })
        })
        .collect()
}
