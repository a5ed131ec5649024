//! Token constraint inference and pattern composition.
//!
//! Each token slot of a template cluster goes through a waterfall of
//! increasingly loose constraints: a finite range of values, then a length,
//! then per-character static characters, then per-character types. A layer
//! is accepted when the values it admits cover at least `r_cov` of the
//! cluster; frequencies are always relative to the cluster size.

use std::collections::{BTreeMap, BTreeSet};

use crate::chars::{classify_char, CharClass, CharKind};
use crate::cluster1d::split_two;
use crate::error::{Error, Result};
use crate::pattern::{PatternAst, PatternElement};
use crate::template::{RawTemplate, TemplateCluster, TemplatePart};

const COVER_EPS: f64 = 1e-9;

/// `mass >= r_cov`, tolerant of float noise in summed frequencies.
pub(crate) fn covers(mass: f64, r_cov: f64) -> bool {
    mass + COVER_EPS >= r_cov
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthConstraint {
    Static(usize),
    Min(usize),
}

impl LengthConstraint {
    pub fn slot_count(self) -> usize {
        match self {
            LengthConstraint::Static(n) | LengthConstraint::Min(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotConstraint {
    StaticChars(BTreeSet<char>),
    StaticType(CharClass),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenConstraint {
    Range(BTreeSet<String>),
    Shape {
        length: LengthConstraint,
        slots: Vec<SlotConstraint>,
        /// Only with `LengthConstraint::Min`.
        suffix: Option<CharClass>,
    },
}

fn sentinels(n_tr: usize) -> [f64; 2] {
    [1.0, 1.0 / n_tr.max(1) as f64]
}

fn tally<T: Ord, I: IntoIterator<Item = T>>(items: I) -> BTreeMap<T, usize> {
    let mut counts = BTreeMap::new();
    for item in items {
        *counts.entry(item).or_insert(0) += 1;
    }
    counts
}

/// High-frequency values of a token, if together they cover `r_cov`.
pub fn infer_token_range(values: &[&str], r_cov: f64, n_tr: usize) -> Option<BTreeSet<String>> {
    if values.is_empty() {
        return None;
    }
    let size = values.len() as f64;
    let freqs = tally(values.iter().copied())
        .into_iter()
        .map(|(v, n)| (n as f64 / size, v))
        .collect();
    let split = split_two(freqs, &sentinels(n_tr)).ok()?;
    covers(split.high_mass(), r_cov)
        .then(|| split.high.into_iter().map(|(_, v)| v.to_owned()).collect())
}

/// A fixed length when one length covers `r_cov`, else the minimum length.
pub fn infer_token_length(values: &[&str], r_cov: f64) -> LengthConstraint {
    let lengths = tally(values.iter().map(|v| v.chars().count()));
    let size = values.len() as f64;
    // most frequent length; the shorter one on ties
    let top = lengths
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)));
    match top {
        Some((&len, &n)) if covers(n as f64 / size, r_cov) => LengthConstraint::Static(len),
        _ => LengthConstraint::Min(lengths.keys().next().copied().unwrap_or(0)),
    }
}

/// Static characters or character types for each constrained slot.
pub fn infer_slot_constraints(
    values: &[&str],
    length: LengthConstraint,
    r_cov: f64,
    n_tr: usize,
) -> Vec<SlotConstraint> {
    let size = values.len() as f64;
    let columns: Vec<Vec<char>> = values.iter().map(|v| v.chars().collect()).collect();
    (0..length.slot_count())
        .map(|k| {
            let chars = tally(columns.iter().filter_map(|cs| cs.get(k).copied()));
            slot_constraint(&chars, size, r_cov, n_tr)
        })
        .collect()
}

fn slot_constraint(
    chars: &BTreeMap<char, usize>,
    size: f64,
    r_cov: f64,
    n_tr: usize,
) -> SlotConstraint {
    let freqs = chars
        .iter()
        .map(|(&c, &n)| (n as f64 / size, c))
        .collect::<Vec<_>>();
    if !freqs.is_empty() {
        let split = split_two(freqs, &sentinels(n_tr)).expect("non-empty finite frequencies");
        if covers(split.high_mass(), r_cov) && !split.high.is_empty() {
            return SlotConstraint::StaticChars(split.high.into_iter().map(|(_, c)| c).collect());
        }
    }

    let mut by_kind: BTreeMap<CharKind, usize> = CharKind::ALL.iter().map(|&k| (k, 0)).collect();
    for (&c, &n) in chars {
        *by_kind
            .get_mut(&classify_char(c))
            .expect("all kinds present") += n;
    }
    let mut ranked: Vec<(CharKind, usize)> = by_kind.into_iter().collect();
    // stable: equal frequencies keep digit, upper, lower, symbol order
    ranked.sort_by_key(|k| std::cmp::Reverse(k.1));

    let mut chosen = Vec::new();
    let mut acc = 0usize;
    for (kind, n) in ranked {
        chosen.push(kind);
        acc += n;
        if covers(acc as f64 / size, r_cov) {
            break;
        }
    }
    let class = if chosen.len() == CharKind::ALL.len() {
        CharClass::ANY
    } else {
        CharClass::from_kinds(chosen).unwrap_or(CharClass::ANY)
    };
    SlotConstraint::StaticType(class)
}

/// Class for characters beyond `len_min`, if any value is that long.
pub fn infer_suffix(values: &[&str], len_min: usize) -> Option<CharClass> {
    let kinds: BTreeSet<CharKind> = values
        .iter()
        .flat_map(|v| v.chars().skip(len_min))
        .map(classify_char)
        .collect();
    if kinds.len() == CharKind::ALL.len() {
        return Some(CharClass::ANY);
    }
    CharClass::from_kinds(kinds)
}

/// Runs the whole waterfall for one token slot.
pub fn infer_token_constraint(values: &[&str], r_cov: f64, n_tr: usize) -> TokenConstraint {
    if let Some(range) = infer_token_range(values, r_cov, n_tr) {
        return TokenConstraint::Range(range);
    }
    let length = infer_token_length(values, r_cov);
    let slots = infer_slot_constraints(values, length, r_cov, n_tr);
    let suffix = match length {
        LengthConstraint::Min(len_min) => infer_suffix(values, len_min),
        LengthConstraint::Static(_) => None,
    };
    TokenConstraint::Shape {
        length,
        slots,
        suffix,
    }
}

fn token_elements(constraint: &TokenConstraint) -> Vec<PatternElement> {
    match constraint {
        TokenConstraint::Range(values) => vec![PatternElement::Alternation(values.clone())],
        TokenConstraint::Shape { slots, suffix, .. } => {
            let mut out: Vec<PatternElement> = slots
                .iter()
                .map(|slot| match slot {
                    SlotConstraint::StaticChars(set) if set.len() == 1 => {
                        PatternElement::literal(set.iter().next().expect("non-empty").to_string())
                    }
                    SlotConstraint::StaticChars(set) => PatternElement::Set {
                        chars: set.clone(),
                        count: 1,
                    },
                    SlotConstraint::StaticType(class) => PatternElement::exactly(*class, 1),
                })
                .collect();
            if let Some(class) = suffix {
                out.push(PatternElement::star(*class));
            }
            out
        }
    }
}

/// Delimiters become literals, range tokens alternations, shaped tokens
/// their slot elements; neighbours are then merged.
pub fn compose_pattern(
    template: &RawTemplate,
    constraints: &[TokenConstraint],
) -> Result<PatternAst> {
    if template.token_count() != constraints.len() {
        return Err(Error::Internal(format!(
            "template {:?} has {} token slots but {} constraints were given",
            template.key(),
            template.token_count(),
            constraints.len()
        )));
    }
    let mut constraints = constraints.iter();
    let mut elements = Vec::new();
    for part in &template.parts {
        match part {
            TemplatePart::Delimiter(d) => elements.push(PatternElement::literal(d.clone())),
            TemplatePart::Token => {
                elements.extend(token_elements(constraints.next().expect("count checked")))
            }
        }
    }
    Ok(PatternAst::new(elements).normalized())
}

/// Infers constraints for every token slot of `cluster` and composes them.
pub fn cluster_pattern(cluster: &TemplateCluster, r_cov: f64, n_tr: usize) -> Result<PatternAst> {
    let constraints: Vec<TokenConstraint> = (0..cluster.template.token_count())
        .map(|slot| infer_token_constraint(&cluster.token_values(slot), r_cov, n_tr))
        .collect();
    compose_pattern(&cluster.template, &constraints)
}
