//! Representative sample sizing and seeded sampling without replacement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const Z_95: f64 = 1.96;
const MARGIN: f64 = 0.05;
const P: f64 = 0.5;

/// Rows drawn from a column, sorted by row index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub indices: Vec<usize>,
    pub records: Vec<String>,
    /// Population size the sample was drawn from.
    pub population: usize,
}

impl Sample {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str)> {
        self.indices
            .iter()
            .copied()
            .zip(self.records.iter().map(String::as_str))
    }
}

/// Sample size for 95% confidence and a 5% margin of error, with the
/// finite-population correction, rounded up and capped at `population`.
pub fn sample_size(population: usize) -> Result<usize> {
    if population == 0 {
        return Err(Error::invalid("sample size requested for an empty column"));
    }
    let n0 = Z_95 * Z_95 * P * (1.0 - P) / (MARGIN * MARGIN);
    let n = n0 / (1.0 + (n0 - 1.0) / population as f64);
    Ok((n.ceil() as usize).clamp(1, population))
}

/// `ceil(fraction * population)` clamped to `[1, population]`.
pub fn fraction_size(population: usize, fraction: f64) -> Result<usize> {
    if population == 0 {
        return Err(Error::invalid("sample size requested for an empty column"));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid(format!(
            "sample fraction must lie in (0, 1], got {fraction}"
        )));
    }
    Ok(((fraction * population as f64).ceil() as usize).clamp(1, population))
}

/// Uniform sample of `n` distinct rows, deterministic in `(seed, N, n)`.
pub fn draw_sample<S: AsRef<str>>(column: &[S], n: usize, seed: u64) -> Result<Sample> {
    let population = column.len();
    if n > population {
        return Err(Error::invalid(format!(
            "cannot draw {n} rows from a column of {population}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices = rand::seq::index::sample(&mut rng, population, n).into_vec();
    indices.sort_unstable();
    let records = indices
        .iter()
        .map(|&i| column[i].as_ref().to_owned())
        .collect();
    Ok(Sample {
        indices,
        records,
        population,
    })
}

/// `k` independent samples; the i-th is drawn with seed `seed + i`.
pub fn draw_subsets<S: AsRef<str>>(
    column: &[S],
    n: usize,
    k: usize,
    seed: u64,
) -> Result<Vec<Sample>> {
    if k == 0 {
        return Err(Error::invalid("subset count must be at least 1"));
    }
    (0..k as u64)
        .map(|i| draw_sample(column, n, seed.wrapping_add(i)))
        .collect()
}
