//! Seeded synthetic columns with a row-aligned clean twin.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const STATE_CODES: [&str; 50] = [
    "AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DE", "FL", "GA", "HI", "ID", "IL", "IN", "IA", "KS",
    "KY", "LA", "ME", "MD", "MA", "MI", "MN", "MS", "MO", "MT", "NE", "NV", "NH", "NJ", "NM", "NY",
    "NC", "ND", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX", "UT", "VT", "VA", "WA", "WV",
    "WI", "WY",
];

const INSERT_SYMBOLS: [char; 6] = ['#', '*', '/', '_', '.', '~'];
const TAIL_SYMBOLS: [&str; 3] = ["++", "+~", "^^"];

/// Healthy value languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `YYYY-MM-DD`
    Date,
    /// five digits
    Zip,
    /// ten digits, first digit 2-9
    Phone,
    /// two-letter US state codes
    StateCode,
    /// two or three digits
    Duration,
    /// `YYYY-MM-DD HH:MM:SS`
    Timestamp,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::Date,
        Generator::Zip,
        Generator::Phone,
        Generator::StateCode,
        Generator::Duration,
        Generator::Timestamp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Date => "date",
            Generator::Zip => "zip",
            Generator::Phone => "phone",
            Generator::StateCode => "state-code",
            Generator::Duration => "duration",
            Generator::Timestamp => "timestamp",
        }
    }

    pub fn default_injectors(self) -> Vec<Injector> {
        match self {
            Generator::Timestamp => vec![
                Injector::TailAppend,
                Injector::Truncate,
                Injector::SymbolInsert,
            ],
            _ => vec![
                Injector::Truncate,
                Injector::CaseFlip,
                Injector::SymbolInsert,
            ],
        }
    }

    fn healthy(self, rng: &mut ChaCha8Rng) -> String {
        match self {
            Generator::Date => format!(
                "{}-{:02}-{:02}",
                rng.gen_range(1950..=2024),
                rng.gen_range(1..=12),
                rng.gen_range(1..=28)
            ),
            Generator::Zip => format!("{:05}", rng.gen_range(0..100_000)),
            Generator::Phone => format!(
                "{}{:09}",
                rng.gen_range(2..=9),
                rng.gen_range(0..1_000_000_000u64)
            ),
            Generator::StateCode => STATE_CODES.choose(rng).expect("non-empty").to_string(),
            Generator::Duration => rng.gen_range(10..1000).to_string(),
            Generator::Timestamp => format!(
                "{}-{:02}-{:02} {:02}:{:02}:{:02}",
                rng.gen_range(1950..=2024),
                rng.gen_range(1..=12),
                rng.gen_range(1..=28),
                rng.gen_range(0..24),
                rng.gen_range(0..60),
                rng.gen_range(0..60)
            ),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Generator::ALL.iter().map(|g| g.name()).collect();
                Error::invalid(format!(
                    "unknown generator {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Corruptions applied to healthy values. Every injector changes its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Injector {
    /// Drops one character.
    Truncate,
    /// Flips the case of one letter; letterless values get one character
    /// replaced by a random letter instead.
    CaseFlip,
    /// Inserts one symbol character.
    SymbolInsert,
    /// Appends a symbol-laden tail such as `++07`.
    TailAppend,
}

impl Injector {
    pub fn name(self) -> &'static str {
        match self {
            Injector::Truncate => "truncate",
            Injector::CaseFlip => "case-flip",
            Injector::SymbolInsert => "symbol-insert",
            Injector::TailAppend => "tail-append",
        }
    }

    fn apply(self, value: &str, rng: &mut ChaCha8Rng) -> String {
        let mut chars: Vec<char> = value.chars().collect();
        match self {
            Injector::Truncate if !chars.is_empty() => {
                chars.remove(rng.gen_range(0..chars.len()));
            }
            Injector::Truncate => chars.push('#'),
            Injector::CaseFlip => {
                let letters: Vec<usize> = (0..chars.len())
                    .filter(|&i| chars[i].is_ascii_alphabetic())
                    .collect();
                match letters.choose(rng) {
                    Some(&i) => {
                        let c = chars[i];
                        chars[i] = if c.is_ascii_uppercase() {
                            c.to_ascii_lowercase()
                        } else {
                            c.to_ascii_uppercase()
                        };
                    }
                    None if !chars.is_empty() => {
                        let i = rng.gen_range(0..chars.len());
                        let base = if rng.gen_bool(0.5) { b'a' } else { b'A' };
                        chars[i] = char::from(base + rng.gen_range(0..26u8));
                    }
                    None => chars.push('x'),
                }
            }
            Injector::SymbolInsert => {
                let at = rng.gen_range(0..=chars.len());
                chars.insert(at, *INSERT_SYMBOLS.choose(rng).expect("non-empty"));
            }
            Injector::TailAppend => {
                let tail = format!(
                    "{}{:02}",
                    TAIL_SYMBOLS.choose(rng).expect("non-empty"),
                    rng.gen_range(0..100)
                );
                chars.extend(tail.chars());
            }
        }
        chars.into_iter().collect()
    }
}

impl FromStr for Injector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Injector::Truncate,
            Injector::CaseFlip,
            Injector::SymbolInsert,
            Injector::TailAppend,
        ]
        .into_iter()
        .find(|i| i.name() == s)
        .ok_or_else(|| Error::invalid(format!("unknown anomaly injector {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub generator: Generator,
    pub rows: usize,
    /// Share of rows to corrupt; exactly `round(rate * rows)` are.
    pub anomaly_rate: f64,
    pub injectors: Vec<Injector>,
}

impl CorpusSpec {
    pub fn new(generator: &str, rows: usize, anomaly_rate: f64) -> Result<Self> {
        let generator: Generator = generator.parse()?;
        Ok(CorpusSpec {
            generator,
            rows,
            anomaly_rate,
            injectors: generator.default_injectors(),
        })
    }

    pub fn with_injectors(mut self, injectors: Vec<Injector>) -> Self {
        self.injectors = injectors;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthColumn {
    pub name: String,
    pub clean: Vec<String>,
    pub dirty: Vec<String>,
    /// Ascending.
    pub anomalous_rows: Vec<usize>,
}

pub fn synth_corpus(spec: &CorpusSpec, seed: u64) -> Result<SynthColumn> {
    if !(0.0..=1.0).contains(&spec.anomaly_rate) {
        return Err(Error::invalid(format!(
            "anomaly rate must lie in [0, 1], got {}",
            spec.anomaly_rate
        )));
    }
    if spec.injectors.is_empty() && spec.anomaly_rate > 0.0 {
        return Err(Error::invalid("anomalies requested without any injector"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clean: Vec<String> = (0..spec.rows)
        .map(|_| spec.generator.healthy(&mut rng))
        .collect();
    let n_bad = ((spec.rows as f64 * spec.anomaly_rate) + 0.5).floor() as usize;
    let mut anomalous_rows =
        rand::seq::index::sample(&mut rng, spec.rows, n_bad.min(spec.rows)).into_vec();
    anomalous_rows.sort_unstable();

    let mut dirty = clean.clone();
    for &row in &anomalous_rows {
        let injector = *spec.injectors.choose(&mut rng).expect("non-empty");
        let corrupted = injector.apply(&clean[row], &mut rng);
        debug_assert_ne!(corrupted, clean[row]);
        dirty[row] = corrupted;
    }
    Ok(SynthColumn {
        name: spec.generator.name().to_owned(),
        clean,
        dirty,
        anomalous_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::CharClass;
    use crate::pattern::{PatternAst, PatternElement};

    #[test]
    fn injects_exact_anomaly_count() {
        let c = synth_corpus(&CorpusSpec::new("zip", 10_000, 0.03).unwrap(), 1).unwrap();
        assert_eq!(c.anomalous_rows.len(), 300);
        let differing = c.clean.iter().zip(&c.dirty).filter(|(a, b)| a != b).count();
        assert_eq!(differing, 300);
    }

    #[test]
    fn healthy_phones_are_ten_digits() {
        let phone = PatternAst::new(vec![PatternElement::exactly(CharClass::DIGIT, 10)]);
        let c = synth_corpus(&CorpusSpec::new("phone", 2000, 0.0).unwrap(), 2).unwrap();
        assert!(c.clean.iter().all(|v| phone.full_match(v)));
    }

    #[test]
    fn healthy_state_codes_are_two_uppercase() {
        let code = PatternAst::new(vec![PatternElement::exactly(CharClass::UPPER, 2)]);
        let c = synth_corpus(&CorpusSpec::new("state-code", 2000, 0.0).unwrap(), 3).unwrap();
        assert!(c.clean.iter().all(|v| code.full_match(v)));
    }

    #[test]
    fn unknown_generator_is_rejected() {
        let err = CorpusSpec::new("iban", 10, 0.1).unwrap_err().to_string();
        assert!(err.contains("unknown generator"), "{err}");
        assert!("nope".parse::<Injector>().is_err());
    }

    #[test]
    fn corpora_are_deterministic() {
        let spec = CorpusSpec::new("timestamp", 500, 0.1).unwrap();
        assert_eq!(
            synth_corpus(&spec, 9).unwrap(),
            synth_corpus(&spec, 9).unwrap()
        );
        assert_ne!(
            synth_corpus(&spec, 9).unwrap(),
            synth_corpus(&spec, 10).unwrap()
        );
    }

    #[test]
    fn every_injector_changes_its_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for inj in [
            Injector::Truncate,
            Injector::CaseFlip,
            Injector::SymbolInsert,
            Injector::TailAppend,
        ] {
            for v in ["", "a", "00", "CA", "2011-02-04", "5551234567"] {
                for _ in 0..50 {
                    assert_ne!(inj.apply(v, &mut rng), v, "{inj:?} on {v:?}");
                }
            }
        }
    }
}
