use std::collections::BTreeSet;
use std::fs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use patternforge::eval::synth::{synth_corpus, CorpusSpec};
use patternforge::io::{read_csv, report_json};
use patternforge::pipeline::main_sample;
use patternforge::{
    detect_column, profile_column, run_table, ColumnReport, ColumnSelection, EngineConfig, Error,
    Label, LabelSet, Selection,
};

fn schema() -> jsonschema::JSONSchema {
    let text = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/schema/report.schema.json"
    ))
    .unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&schema).unwrap()
}

fn assert_valid(reports: &[ColumnReport]) {
    let json: Value = serde_json::from_str(&report_json(reports).unwrap()).unwrap();
    let compiled = schema();
    if let Err(errors) = compiled.validate(&json) {
        let msgs: Vec<String> = errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("schema violations: {msgs:?}");
    };
}

fn write_table(dir: &std::path::Path) -> std::path::PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut text = String::from("zip,date,code\n");
    for i in 0..1500 {
        let zip = if i % 97 == 0 {
            format!("{:04}", rng.gen_range(0..10_000))
        } else {
            format!("{:05}", rng.gen_range(0..100_000))
        };
        let date = if i % 53 == 0 {
            format!("{}/{:02}", rng.gen_range(1990..2020), rng.gen_range(1..13))
        } else {
            format!(
                "{}-{:02}-{:02}",
                rng.gen_range(1990..2020),
                rng.gen_range(1..13),
                rng.gen_range(1..29)
            )
        };
        let code = if i % 71 == 0 {
            "\"x,y\"".to_string()
        } else {
            ["CA", "NY", "TX"][i % 3].to_string()
        };
        text.push_str(&format!("{zip},{date},{code}\n"));
    }
    let path = dir.join("table.csv");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn anomalies_complement_the_matched_rows() {
    let c = synth_corpus(&CorpusSpec::new("date", 4000, 0.05).unwrap(), 8).unwrap();
    for selection in [
        Selection::KMeans,
        Selection::None,
        Selection::StaticThreshold(0.01),
    ] {
        let cfg = EngineConfig {
            selection,
            ..EngineConfig::detect_auto().with_seed(3)
        };
        let report = detect_column("date", &c.dirty, &cfg, None).unwrap();
        let anomalies: BTreeSet<usize> = report.anomaly_rows().into_iter().collect();
        let pool: Vec<_> = report.selected_patterns().collect();
        for (i, v) in c.dirty.iter().enumerate() {
            let matched = pool.iter().any(|p| p.ast.full_match(v));
            assert_ne!(matched, anomalies.contains(&i), "row {i} {v:?}");
        }
        for a in &report.anomalies {
            assert_eq!(a.value, c.dirty[a.row]);
        }
    }
}

#[test]
fn no_selection_keeps_at_least_as_many_patterns() {
    for (g, rate) in [("date", 0.1), ("timestamp", 0.05), ("zip", 0.1)] {
        let c = synth_corpus(&CorpusSpec::new(g, 3000, rate).unwrap(), 5).unwrap();
        let base = EngineConfig::detect_auto().with_seed(1);
        let kmeans = detect_column(g, &c.dirty, &base, None).unwrap();
        let none = detect_column(
            g,
            &c.dirty,
            &EngineConfig {
                selection: Selection::None,
                ..base
            },
            None,
        )
        .unwrap();
        assert!(none.selected_patterns().count() >= kmeans.selected_patterns().count());
        assert!(none.anomalies.len() <= kmeans.anomalies.len());
    }
}

#[test]
fn profile_mode_covers_every_sampled_record() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let column: Vec<String> = (0..2000)
        .map(|_| match rng.gen_range(0..4) {
            0 => format!("{}-{:02}", rng.gen_range(1900..2100), rng.gen_range(0..100)),
            1 => format!("ID{}", rng.gen_range(0..100_000)),
            2 => String::new(),
            _ => format!("{} €", rng.gen_range(0..1000)),
        })
        .collect();
    let cfg = EngineConfig::profile().with_seed(4);
    let report = profile_column("mixed", &column, &cfg).unwrap();
    let sample = main_sample(&column, &cfg).unwrap();
    for r in &sample.records {
        assert!(
            report.selected_patterns().any(|p| p.ast.full_match(r)),
            "{r:?}"
        );
    }
    assert!(report.patterns.iter().all(|p| p.selected));
    assert_eq!(report.r_cov_estimated, 1.0);
    assert_valid(&[report]);
}

#[test]
fn mixed_date_formats_give_one_pattern_per_template() {
    let column: Vec<String> = (0..400)
        .map(|i| {
            let sep = if i % 2 == 0 { '-' } else { '/' };
            format!(
                "{}{sep}{:02}{sep}{:02}",
                1950 + i % 70,
                1 + i % 12,
                1 + i % 28
            )
        })
        .collect();
    let report = profile_column("d", &column, &EngineConfig::profile()).unwrap();
    let mut regexes = report.selected_regexes();
    regexes.sort();
    assert_eq!(regexes, vec![r"\d{4}-\d{2}-\d{2}", r"\d{4}/\d{2}/\d{2}"]);
}

#[test]
fn clean_column_has_full_coverage_and_no_anomalies() {
    let c = synth_corpus(&CorpusSpec::new("phone", 5000, 0.0).unwrap(), 2).unwrap();
    let report = detect_column("phone", &c.dirty, &EngineConfig::detect_auto(), None).unwrap();
    assert_eq!(report.r_cov_estimated, 1.0);
    assert!(report.anomalies.is_empty());
    assert_eq!(report.selected_regexes(), vec![r"\d{10}"]);
}

fn labels_for(dirty: &[String], clean: &[String], cfg: &EngineConfig, flip: usize) -> LabelSet {
    let sample = main_sample(dirty, cfg).unwrap();
    let mut flipped = 0;
    LabelSet::new(
        sample
            .indices
            .iter()
            .map(|&i| {
                let mut healthy = dirty[i] == clean[i];
                if healthy && flipped < flip {
                    healthy = false;
                    flipped += 1;
                }
                (
                    i,
                    if healthy {
                        Label::Healthy
                    } else {
                        Label::Anomalous
                    },
                )
            })
            .collect(),
    )
}

#[test]
fn lower_guided_coverage_flags_a_superset() {
    let c = synth_corpus(&CorpusSpec::new("state-code", 5000, 0.05).unwrap(), 12).unwrap();
    let cfg = EngineConfig::detect_guided().with_seed(2);
    let n_tr = main_sample(&c.dirty, &cfg).unwrap().len();
    let tight = labels_for(&c.dirty, &c.clean, &cfg, n_tr / 10);
    let loose = labels_for(&c.dirty, &c.clean, &cfg, 0);
    let at_low = detect_column("s", &c.dirty, &cfg, Some(&tight)).unwrap();
    let at_high = detect_column("s", &c.dirty, &cfg, Some(&loose)).unwrap();
    assert!(at_low.r_cov_estimated < at_high.r_cov_estimated);
    let low: BTreeSet<_> = at_low.anomaly_rows().into_iter().collect();
    let high: BTreeSet<_> = at_high.anomaly_rows().into_iter().collect();
    assert!(
        low.is_superset(&high),
        "{:?} vs {:?}",
        at_low.selected_regexes(),
        at_high.selected_regexes()
    );
}

#[test]
fn guided_mode_requires_matching_labels() {
    let c = synth_corpus(&CorpusSpec::new("zip", 1000, 0.05).unwrap(), 1).unwrap();
    let cfg = EngineConfig::detect_guided();
    assert!(matches!(
        detect_column("z", &c.dirty, &cfg, None),
        Err(Error::MissingLabels)
    ));
    let wrong = LabelSet::new([(0, Label::Healthy)].into_iter().collect());
    assert!(matches!(
        detect_column("z", &c.dirty, &cfg, Some(&wrong)),
        Err(Error::LabelMismatch(_))
    ));
}

#[test]
fn empty_column_is_rejected() {
    let empty: Vec<String> = Vec::new();
    assert!(detect_column("e", &empty, &EngineConfig::detect_auto(), None).is_err());
    assert!(profile_column("e", &empty, &EngineConfig::profile()).is_err());
}

#[test]
fn tables_run_per_column_and_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let table = read_csv(write_table(dir.path())).unwrap();
    let cfg = EngineConfig::detect_auto().with_seed(5);

    let all = run_table(&table, &cfg, &ColumnSelection::All, None).unwrap();
    assert_eq!(all.len(), 3);
    let one = run_table(
        &table,
        &cfg,
        &ColumnSelection::Named(vec!["zip".into()]),
        None,
    )
    .unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0], all[0]);
    // per-column seed is seed + ordinal
    let code_alone = detect_column(
        "code",
        &table.column(2),
        &EngineConfig::detect_auto().with_seed(7),
        None,
    )
    .unwrap();
    assert_eq!(code_alone, all[2]);

    let again = run_table(&table, &cfg, &ColumnSelection::All, None).unwrap();
    assert_eq!(report_json(&all).unwrap(), report_json(&again).unwrap());

    let err = run_table(
        &table,
        &cfg,
        &ColumnSelection::Named(vec!["nope".into()]),
        None,
    )
    .unwrap_err();
    assert!(
        err.to_string()
            .contains("available columns: zip, date, code"),
        "{err}"
    );

    // every reported anomaly sits verbatim at its row in the source file
    let mut reader = csv::Reader::from_path(&table.path).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    for (ordinal, report) in all.iter().enumerate() {
        for a in &report.anomalies {
            assert_eq!(&rows[a.row][ordinal], a.value);
        }
    }
    assert!(all[2].anomalies.iter().any(|a| a.value == "x,y"));
    assert_valid(&all);
}

#[test]
fn reports_render_rates_with_six_decimals() {
    let column: Vec<String> = (0..500).map(|i| format!("{:05}", i * 197)).collect();
    let report = profile_column("zip", &column, &EngineConfig::profile()).unwrap();
    let json = report_json(&[report]).unwrap();
    assert!(json.contains(r#""regex": "\\d{5}""#), "{json}");
    assert!(
        json.contains(r#""column_matching_rate": 1.000000"#),
        "{json}"
    );
    assert!(json.contains(r#""r_cov_estimated": 1.000000"#), "{json}");
    assert!(json.contains(r#""anomalies": []"#), "{json}");
}

#[test]
fn every_mode_validates_against_the_schema() {
    let c = synth_corpus(&CorpusSpec::new("date", 2000, 0.05).unwrap(), 3).unwrap();
    let profile = profile_column("date", &c.dirty, &EngineConfig::profile()).unwrap();
    let auto = detect_column("date", &c.dirty, &EngineConfig::detect_auto(), None).unwrap();
    let cfg = EngineConfig::detect_guided();
    let labels = labels_for(&c.dirty, &c.clean, &cfg, 0);
    let mut guided = detect_column("date", &c.dirty, &cfg, Some(&labels)).unwrap();
    guided.metrics = Some(patternforge::eval::eval_detection(&guided, &c.dirty, &c.clean).unwrap());
    assert_valid(&[profile, auto, guided]);
}
