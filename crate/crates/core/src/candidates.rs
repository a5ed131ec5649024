//! Sample → templates → one candidate pattern per template cluster.

use std::collections::HashMap;

use crate::config::SamplePolicy;
use crate::constraint::cluster_pattern;
use crate::error::Result;
use crate::report::CandidatePattern;
use crate::sampler::{fraction_size, sample_size, Sample};
use crate::template::{cluster_templates, TemplateCluster};

pub fn sample_len(population: usize, policy: SamplePolicy) -> Result<usize> {
    match policy {
        SamplePolicy::ZScore => sample_size(population),
        SamplePolicy::FixedFraction(f) => fraction_size(population, f),
    }
}

/// Clusters `sample` under `r_em` and composes one pattern per cluster
/// under `r_cov`. Candidates rendering to the same regex collapse into the
/// one with the highest sample frequency. Candidates come back in cluster
/// order (descending size, then key); rates are not yet scored.
pub fn generate_candidates(
    sample: &Sample,
    r_em: f64,
    r_cov: f64,
) -> Result<(Vec<TemplateCluster>, Vec<CandidatePattern>)> {
    let clusters = cluster_templates(sample, r_em)?;
    let n_tr = sample.len();
    let mut candidates = Vec::with_capacity(clusters.len());
    for cluster in &clusters {
        let ast = cluster_pattern(cluster, r_cov, n_tr)?;
        let freq = cluster.size() as f64 / n_tr as f64;
        candidates.push(CandidatePattern::new(ast, cluster.key(), freq));
    }
    Ok((clusters, dedup_candidates(candidates)))
}

/// Collapses candidates with identical regexes into the one with the
/// highest sample frequency, keeping first-occurrence order.
pub fn dedup_candidates(candidates: Vec<CandidatePattern>) -> Vec<CandidatePattern> {
    let mut out: Vec<CandidatePattern> = Vec::with_capacity(candidates.len());
    let mut seen: HashMap<String, usize> = HashMap::new();
    for candidate in candidates {
        match seen.get(&candidate.regex) {
            Some(&i) => {
                if candidate.sample_frequency > out[i].sample_frequency {
                    out[i] = candidate;
                }
            }
            None => {
                seen.insert(candidate.regex.clone(), out.len());
                out.push(candidate);
            }
        }
    }
    out
}
