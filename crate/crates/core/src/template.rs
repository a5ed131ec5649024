//! Token/delimiter decomposition of records and template clustering.
//!
//! A record splits into maximal runs of symbol characters (delimiters) and
//! of everything else (tokens). Its raw template replaces each token with a
//! `T` placeholder. The delimiter budget keeps templates coarse: once a
//! record has used up `max_d` delimiters, its remaining suffix becomes one
//! final token.

use std::collections::BTreeMap;

use crate::chars::{classify_char, CharKind};
use crate::error::{Error, Result};
use crate::sampler::Sample;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    TokenRun(String),
    DelimiterRun(String),
}

impl Segment {
    pub fn text(&self) -> &str {
        match self {
            Segment::TokenRun(t) | Segment::DelimiterRun(t) => t,
        }
    }

    pub fn is_delimiter(&self) -> bool {
        matches!(self, Segment::DelimiterRun(_))
    }
}

fn is_symbol(c: char) -> bool {
    classify_char(c) == CharKind::Symbol
}

/// Maximal-run decomposition into alternating token and delimiter runs.
pub fn tokenize(record: &str) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut current: Option<bool> = None;
    for (i, c) in record.char_indices() {
        let sym = is_symbol(c);
        match current {
            Some(prev) if prev != sym => {
                out.push(make_segment(&record[start..i], prev));
                start = i;
                current = Some(sym);
            }
            None => current = Some(sym),
            _ => {}
        }
    }
    if let Some(sym) = current {
        out.push(make_segment(&record[start..], sym));
    }
    out
}

fn make_segment(text: &str, symbol: bool) -> Segment {
    if symbol {
        Segment::DelimiterRun(text.to_owned())
    } else {
        Segment::TokenRun(text.to_owned())
    }
}

pub fn delimiter_count(record: &str) -> usize {
    let mut count = 0;
    let mut in_run = false;
    for c in record.chars() {
        let sym = is_symbol(c);
        if sym && !in_run {
            count += 1;
        }
        in_run = sym;
    }
    count
}

/// Number of records that must be fully split: `round(n * r_em)`, half up,
/// clamped to `[1, n]`.
pub fn exact_match_quota(n: usize, r_em: f64) -> usize {
    let k = (n as f64 * r_em + 0.5 + 1e-9).floor() as usize;
    k.clamp(1, n.max(1))
}

/// The delimiter budget: the smallest count that lets `round(|counts| *
/// r_em)` records split fully, i.e. the k-th smallest count.
pub fn max_delimiters(counts: &[usize], r_em: f64) -> Result<usize> {
    if counts.is_empty() {
        return Err(Error::invalid("delimiter budget needs at least one record"));
    }
    let k = exact_match_quota(counts.len(), r_em);
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    Ok(sorted[k - 1])
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TemplatePart {
    Token,
    Delimiter(String),
}

/// Token placeholders interleaved with literal delimiter strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RawTemplate {
    pub parts: Vec<TemplatePart>,
}

impl RawTemplate {
    /// Canonical form: tokens as `T`, delimiters verbatim.
    pub fn key(&self) -> String {
        self.parts
            .iter()
            .map(|p| match p {
                TemplatePart::Token => "T",
                TemplatePart::Delimiter(d) => d.as_str(),
            })
            .collect()
    }

    pub fn token_count(&self) -> usize {
        self.parts
            .iter()
            .filter(|p| matches!(p, TemplatePart::Token))
            .count()
    }

    pub fn delimiter_count(&self) -> usize {
        self.parts.len() - self.token_count()
    }

    /// Interleaves token contents with this template's delimiters.
    pub fn fill(&self, tokens: &[String]) -> String {
        let mut tokens = tokens.iter();
        let mut out = String::new();
        for p in &self.parts {
            match p {
                TemplatePart::Token => out.push_str(tokens.next().map_or("", String::as_str)),
                TemplatePart::Delimiter(d) => out.push_str(d),
            }
        }
        out
    }
}

/// Splits `record` left to right; after `max_d` delimiter runs the rest of
/// the record, symbols included, becomes a single final token.
pub fn build_template(record: &str, max_d: usize) -> (RawTemplate, Vec<String>) {
    let mut parts = Vec::new();
    let mut tokens = Vec::new();
    let mut used = 0;
    let mut consumed = 0;
    for seg in tokenize(record) {
        if used == max_d {
            break;
        }
        match seg {
            Segment::TokenRun(t) => {
                consumed += t.len();
                parts.push(TemplatePart::Token);
                tokens.push(t);
            }
            Segment::DelimiterRun(d) => {
                consumed += d.len();
                used += 1;
                parts.push(TemplatePart::Delimiter(d));
            }
        }
    }
    if consumed < record.len() {
        // the remainder follows a delimiter (or starts the record), so it
        // never abuts another token slot
        parts.push(TemplatePart::Token);
        tokens.push(record[consumed..].to_owned());
    }
    (RawTemplate { parts }, tokens)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMember {
    pub row: usize,
    pub record: String,
    /// Contents aligned with the template's token slots.
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateCluster {
    pub template: RawTemplate,
    pub members: Vec<ClusterMember>,
}

impl TemplateCluster {
    pub fn key(&self) -> String {
        self.template.key()
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Contents of token slot `slot` across all members.
    pub fn token_values(&self, slot: usize) -> Vec<&str> {
        self.members
            .iter()
            .map(|m| m.tokens[slot].as_str())
            .collect()
    }
}

/// Templates every sampled record under the sample-wide delimiter budget
/// and groups records by template key. Clusters are ordered by descending
/// size, then key.
pub fn cluster_templates(sample: &Sample, r_em: f64) -> Result<Vec<TemplateCluster>> {
    if sample.is_empty() {
        return Err(Error::invalid(
            "cannot build templates from an empty sample",
        ));
    }
    let counts: Vec<usize> = sample.records.iter().map(|r| delimiter_count(r)).collect();
    let max_d = max_delimiters(&counts, r_em)?;

    let mut by_key: BTreeMap<String, TemplateCluster> = BTreeMap::new();
    for (row, record) in sample.iter() {
        let (template, tokens) = build_template(record, max_d);
        let member = ClusterMember {
            row,
            record: record.to_owned(),
            tokens,
        };
        by_key
            .entry(template.key())
            .or_insert_with(|| TemplateCluster {
                template,
                members: Vec::new(),
            })
            .members
            .push(member);
    }

    let mut clusters: Vec<(String, TemplateCluster)> = by_key.into_iter().collect();
    clusters.sort_by(|(ka, a), (kb, b)| b.size().cmp(&a.size()).then_with(|| ka.cmp(kb)));
    Ok(clusters.into_iter().map(|(_, c)| c).collect())
}
