//! Full-column matching rates and healthy-pool selection.

use crate::cluster1d::split_two;
use crate::config::Selection;
use crate::error::{Error, Result};
use crate::pattern::PatternAst;
use crate::report::CandidatePattern;

/// Share of `column` that `ast` matches in full.
pub fn matching_rate<S: AsRef<str>>(ast: &PatternAst, column: &[S]) -> Result<f64> {
    if column.is_empty() {
        return Err(Error::invalid("matching rate over an empty column"));
    }
    let hits = column.iter().filter(|r| ast.full_match(r.as_ref())).count();
    Ok(hits as f64 / column.len() as f64)
}

/// Fills in `column_matching_rate` for every candidate.
pub fn score_candidates<S: AsRef<str>>(
    candidates: &mut [CandidatePattern],
    column: &[S],
) -> Result<()> {
    for c in candidates.iter_mut() {
        c.column_matching_rate = matching_rate(&c.ast, column)?;
    }
    Ok(())
}

/// Marks the healthy candidates according to `policy`, writing the
/// `selected` flag back. `column_len` is the population size N whose
/// reciprocal acts as the low-rate sentinel.
pub fn select(candidates: &mut [CandidatePattern], column_len: usize, policy: Selection) {
    match policy {
        Selection::None => candidates.iter_mut().for_each(|c| c.selected = true),
        Selection::StaticThreshold(t) => candidates
            .iter_mut()
            .for_each(|c| c.selected = c.column_matching_rate > t),
        Selection::KMeans => {
            if candidates.is_empty() {
                return;
            }
            let rates = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (c.column_matching_rate, i))
                .collect();
            let sentinel = 1.0 / column_len.max(1) as f64;
            let split = split_two(rates, &[sentinel]).expect("finite rates");
            candidates.iter_mut().for_each(|c| c.selected = false);
            for (_, i) in split.high {
                candidates[i].selected = true;
            }
        }
    }
}

/// Rows of `column` matching at least one selected candidate.
pub fn pool_matches<S: AsRef<str>>(candidates: &[CandidatePattern], column: &[S]) -> Vec<bool> {
    let pool: Vec<&PatternAst> = candidates
        .iter()
        .filter(|c| c.selected)
        .map(|c| &c.ast)
        .collect();
    column
        .iter()
        .map(|r| pool.iter().any(|p| p.full_match(r.as_ref())))
        .collect()
}
