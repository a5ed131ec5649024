//! Exact two-class clustering of one-dimensional frequencies.
//!
//! Every thresholding decision in the engine (token ranges, static
//! characters, pattern selection) splits a list of frequencies into a
//! high and a low cluster. On a line, the optimal two-means partition is a
//! cut of the sorted values, so scanning every cut point with prefix sums
//! finds the exact optimum without any iterative initialization.

use crate::error::{Error, Result};

const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoSplit<P> {
    /// Ascending by value.
    pub high: Vec<(f64, P)>,
    /// Ascending by value.
    pub low: Vec<(f64, P)>,
    /// Smallest value in the high cluster, sentinels included.
    pub boundary: f64,
}

impl<P> TwoSplit<P> {
    /// Sum of the high-cluster values, sentinels excluded.
    pub fn high_mass(&self) -> f64 {
        self.high.iter().map(|(v, _)| v).sum()
    }
}

pub fn high_mass<P>(split: &TwoSplit<P>) -> f64 {
    split.high_mass()
}

/// Splits `values` into the two clusters minimizing total within-cluster
/// squared deviation. `sentinels` take part in the split but are dropped
/// from the returned clusters. Between equally good cuts the one giving
/// the larger high cluster wins.
pub fn split_two<P>(values: Vec<(f64, P)>, sentinels: &[f64]) -> Result<TwoSplit<P>> {
    if values.is_empty() {
        return Err(Error::invalid("cannot split an empty value list"));
    }
    if let Some((v, _)) = values.iter().find(|(v, _)| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite frequency {v}")));
    }

    let mut points: Vec<(f64, Option<P>)> = values
        .into_iter()
        .map(|(v, p)| (v, Some(p)))
        .chain(sentinels.iter().map(|&s| (s, None)))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    let cut = best_cut(&points.iter().map(|p| p.0).collect::<Vec<_>>());
    let boundary = points[cut].0;

    let mut low = Vec::new();
    let mut high = Vec::new();
    for (i, (v, p)) in points.into_iter().enumerate() {
        if let Some(p) = p {
            if i < cut {
                low.push((v, p));
            } else {
                high.push((v, p));
            }
        }
    }
    Ok(TwoSplit {
        high,
        low,
        boundary,
    })
}

/// Index of the first high element in ascending `sorted`. Cuts only fall
/// between distinct values; a cut of 0 (everything high) is chosen when no
/// proper cut exists.
fn best_cut(sorted: &[f64]) -> usize {
    let n = sorted.len();
    let mut prefix = Vec::with_capacity(n + 1);
    let mut prefix_sq = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    prefix_sq.push(0.0);
    for &v in sorted {
        prefix.push(prefix.last().unwrap() + v);
        prefix_sq.push(prefix_sq.last().unwrap() + v * v);
    }
    let sse = |from: usize, to: usize| -> f64 {
        let count = (to - from) as f64;
        if count == 0.0 {
            return 0.0;
        }
        let sum = prefix[to] - prefix[from];
        let sq = prefix_sq[to] - prefix_sq[from];
        (sq - sum * sum / count).max(0.0)
    };

    let mut best = 0;
    let mut best_cost = sse(0, n);
    for cut in 1..n {
        if sorted[cut - 1] == sorted[cut] {
            continue;
        }
        let cost = sse(0, cut) + sse(cut, n);
        // scanning upward, a later cut only wins when strictly better, so
        // ties keep the larger high cluster
        if cost < best_cost - TIE_EPS {
            best = cut;
            best_cost = cost;
        }
    }
    best
}
