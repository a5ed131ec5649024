//! Unsupervised inference of regex data patterns for tabular columns.
//!
//! Given a column of raw strings, the engine
//!
//! 1. draws a statistically representative sample,
//! 2. estimates the share of healthy values (the coverage rate), either from
//!    user labels on the sample or from several sampled pattern pools,
//! 3. splits records into token/delimiter templates under a delimiter
//!    budget derived from that rate,
//! 4. infers per-token constraints (value range, length, static characters,
//!    character types) and composes one regex per template, and
//! 5. keeps the high-matching-rate patterns as the healthy pool.
//!
//! Profiling stops after step 4 with full coverage; detection reports every
//! row that no healthy pattern matches.
//!
//! ```
//! use patternforge::{detect_column, EngineConfig};
//!
//! let mut column: Vec<String> = (0..2000).map(|i| format!("{:05}", i * 37 % 100_000)).collect();
//! column[17] = "1234".into();
//! column[900] = "12a45".into();
//!
//! let report = detect_column("zip", &column, &EngineConfig::detect_auto(), None).unwrap();
//! assert_eq!(report.selected_regexes(), vec![r"\d{5}"]);
//! assert_eq!(report.anomaly_rows(), vec![17, 900]);
//! ```

pub mod candidates;
pub mod chars;
pub mod cluster1d;
pub mod config;
pub mod constraint;
pub mod error;
pub mod estimator;
pub mod eval;
pub mod io;
pub mod pattern;
pub mod pipeline;
pub mod report;
pub mod sampler;
pub mod selector;
pub mod template;

pub use chars::{classify_char, CharClass, CharKind};
pub use config::{EngineConfig, Mode, SamplePolicy, Selection};
pub use error::{Error, Result};
pub use estimator::{estimate_auto, estimate_guided, Label, LabelSet};
pub use pattern::{full_match, render_regex, PatternAst, PatternElement, Quantifier};
pub use pipeline::{detect_column, profile_column, run_column, run_table, ColumnSelection};
pub use report::{Anomaly, CandidatePattern, ColumnReport};
