use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Profile,
    DetectAuto,
    DetectGuided,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Profile => "profile",
            Mode::DetectAuto => "detect_auto",
            Mode::DetectGuided => "detect_guided",
        })
    }
}

/// How candidate patterns are filtered into the healthy pool.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Selection {
    /// Two-means split of matching rates with a `1/N` sentinel.
    #[default]
    KMeans,
    /// Keep patterns whose matching rate is strictly above the threshold.
    StaticThreshold(f64),
    /// Keep every candidate.
    None,
}

impl FromStr for Selection {
    type Err = Error;

    /// `kmeans`, `none`, `static` (threshold 0.01) or `static:<t>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kmeans" => Ok(Selection::KMeans),
            "none" => Ok(Selection::None),
            "static" => Ok(Selection::StaticThreshold(0.01)),
            other => match other.strip_prefix("static:") {
                Some(t) => {
                    let t: f64 = t
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad selection threshold {t:?}")))?;
                    if !(0.0..1.0).contains(&t) {
                        return Err(Error::invalid(format!(
                            "selection threshold must lie in [0, 1), got {t}"
                        )));
                    }
                    Ok(Selection::StaticThreshold(t))
                }
                None => Err(Error::invalid(format!(
                    "unknown selection policy {other:?} (expected kmeans, static:<t> or none)"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SamplePolicy {
    /// 95% confidence, 5% margin.
    #[default]
    ZScore,
    FixedFraction(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub mode: Mode,
    /// Coverage assumed while building the pools that estimate coverage.
    pub r_cov_init: f64,
    /// Number of pools averaged by the unsupervised estimator.
    pub n_subset: usize,
    pub seed: u64,
    pub fixed_r_cov: Option<f64>,
    pub fixed_r_em: Option<f64>,
    pub selection: Selection,
    pub sample_policy: SamplePolicy,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            mode: Mode::DetectAuto,
            r_cov_init: 0.95,
            n_subset: 5,
            seed: 0,
            fixed_r_cov: None,
            fixed_r_em: None,
            selection: Selection::KMeans,
            sample_policy: SamplePolicy::ZScore,
        }
    }
}

fn check_fraction(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must lie in (0, 1], got {v}"
        )))
    }
}

impl EngineConfig {
    pub fn profile() -> Self {
        EngineConfig {
            mode: Mode::Profile,
            ..Default::default()
        }
    }

    pub fn detect_auto() -> Self {
        EngineConfig::default()
    }

    pub fn detect_guided() -> Self {
        EngineConfig {
            mode: Mode::DetectGuided,
            ..Default::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_fraction("r_cov_init", self.r_cov_init)?;
        if self.n_subset == 0 {
            return Err(Error::invalid("n_subset must be at least 1"));
        }
        if let Some(v) = self.fixed_r_cov {
            check_fraction("fixed r_cov", v)?;
        }
        if let Some(v) = self.fixed_r_em {
            check_fraction("fixed r_em", v)?;
        }
        if let SamplePolicy::FixedFraction(f) = self.sample_policy {
            check_fraction("sample fraction", f)?;
        }
        Ok(())
    }
}
