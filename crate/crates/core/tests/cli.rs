use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patternforge"))
        .args(args)
        .env_remove("PATTERNFORGE_SEED")
        .output()
        .unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = cli(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn synth(dir: &Path, generator: &str, rows: &str, rate: &str) -> (String, String) {
    let dirty = dir.join(format!("{generator}-dirty.csv"));
    let clean = dir.join(format!("{generator}-clean.csv"));
    let (d, c) = (
        dirty.to_str().unwrap().to_owned(),
        clean.to_str().unwrap().to_owned(),
    );
    let out = cli(&[
        "synth",
        "--generator",
        generator,
        "--rows",
        rows,
        "--rate",
        rate,
        "--seed",
        "4",
        "--dirty",
        &d,
        "--clean",
        &c,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    (d, c)
}

#[test]
fn profile_writes_a_report_array() {
    let dir = tempfile::tempdir().unwrap();
    let (d, _) = synth(dir.path(), "zip", "2000", "0");
    let v = ok_json(&["profile", &d, "--column", "zip"]);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["mode"], "profile");
    assert_eq!(v[0]["patterns"][0]["regex"], r"\d{5}");
    assert_eq!(v[0]["anomalies"], Value::Array(vec![]));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let (d, _) = synth(dir.path(), "date", "1000", "0.05");
    let out = dir.path().join("r.json");
    let o = cli(&["detect", &d, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v[0]["mode"], "detect_auto");
    assert!(!v[0]["anomalies"].as_array().unwrap().is_empty());
}

#[test]
fn guided_detection_from_a_sample_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (d, c) = synth(dir.path(), "state-code", "3000", "0.05");
    let manifest = ok_json(&["sample", &d, "--column", "state-code", "--seed", "3"]);
    let clean: Vec<String> = fs::read_to_string(&c)
        .unwrap()
        .lines()
        .skip(1)
        .map(String::from)
        .collect();

    let labels: BTreeMap<String, &str> = manifest["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let row = r["row"].as_u64().unwrap() as usize;
            let label = if r["value"] == clean[row].as_str() {
                "healthy"
            } else {
                "anomalous"
            };
            (row.to_string(), label)
        })
        .collect();
    let labels_path = dir.path().join("labels.json");
    fs::write(&labels_path, serde_json::to_string(&labels).unwrap()).unwrap();
    let lp = labels_path.to_str().unwrap();

    let v = ok_json(&[
        "eval-detection",
        &d,
        "--truth",
        &c,
        "--column",
        "state-code",
        "--seed",
        "3",
        "--labels",
        lp,
    ]);
    assert_eq!(v[0]["mode"], "detect_guided");
    let selected: Vec<&str> = v[0]["patterns"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["selected"] == true)
        .map(|p| p["regex"].as_str().unwrap())
        .collect();
    assert_eq!(selected, vec!["[A-Z]{2}"]);
    assert_eq!(v[0]["metrics"]["f1"].as_f64().unwrap(), 1.0);

    // labels drawn for another seed no longer cover the sample
    let o = cli(&[
        "detect",
        &d,
        "--column",
        "state-code",
        "--seed",
        "4",
        "--labels",
        lp,
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("label"));
}

#[test]
fn seed_comes_from_the_environment_unless_given() {
    let dir = tempfile::tempdir().unwrap();
    let (d, _) = synth(dir.path(), "phone", "1500", "0.05");
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_patternforge"));
        cmd.args(args).env_remove("PATTERNFORGE_SEED");
        if let Some(s) = env {
            cmd.env("PATTERNFORGE_SEED", s);
        }
        cmd.output().unwrap().stdout
    };
    let by_flag = run(None, &["sample", &d, "--seed", "8"]);
    assert_eq!(run(Some("8"), &["sample", &d]), by_flag);
    assert_eq!(run(Some("1"), &["sample", &d, "--seed", "8"]), by_flag);
    assert_ne!(run(None, &["sample", &d]), by_flag);
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let (d, _) = synth(dir.path(), "zip", "200", "0");
    for args in [
        vec!["detect"],
        vec!["frobnicate"],
        vec!["detect", &d, "--selection", "median"],
        vec!["detect", &d, "--fixed-rcov", "1.5"],
        vec!["detect", &d, "--rcov-init", "0"],
        vec!["detect", &d, "--n-subset", "0"],
        vec!["detect", &d, "--all", "--column", "zip"],
        vec!["sample", &d, "--sample-fraction", "2"],
        vec![
            "synth",
            "--generator",
            "iban",
            "--dirty",
            "a",
            "--clean",
            "b",
        ],
    ] {
        let o = cli(&args);
        assert_eq!(
            code(&o),
            1,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert_eq!(code(&cli(&["--help"])), 0);
    assert_eq!(code(&cli(&["--version"])), 0);
}

#[test]
fn data_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = dir.path().join("ragged.csv");
    fs::write(&ragged, "a,b\n1,2\n3\n").unwrap();
    let o = cli(&["profile", ragged.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = cli(&["profile", "/nonexistent/file.csv"]);
    assert_eq!(code(&o), 2);

    let (d, c) = synth(dir.path(), "zip", "300", "0.1");
    let o = cli(&["detect", &d, "--column", "postcode"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("available columns: zip"));

    let short = dir.path().join("short.csv");
    fs::write(&short, "zip\n12345\n").unwrap();
    let o = cli(&["eval-detection", &d, "--truth", short.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let o = cli(&["eval-detection", &d, "--truth", &c]);
    assert_eq!(code(&o), 0);

    let headers_only = dir.path().join("empty.csv");
    fs::write(&headers_only, "zip\n").unwrap();
    assert_eq!(code(&cli(&["detect", headers_only.to_str().unwrap()])), 2);
}

#[test]
fn eval_profiling_scores_a_domain_folder() {
    let dir = tempfile::tempdir().unwrap();
    let zips: String = (0..600)
        .map(|i| format!("{:05}\n", (i * 7919) % 100_000))
        .collect();
    let codes: String = (0..600)
        .map(|i| {
            format!(
                "{}{}-{:04}\n",
                char::from(b'A' + (i % 26) as u8),
                char::from(b'A' + (i / 26 % 26) as u8),
                i
            )
        })
        .collect();
    fs::write(dir.path().join("zip.txt"), zips).unwrap();
    fs::write(dir.path().join("code.txt"), codes).unwrap();
    let v = ok_json(&[
        "eval-profiling",
        "--dir",
        dir.path().to_str().unwrap(),
        "--seed",
        "2",
    ]);
    assert_eq!(v["domains"].as_array().unwrap().len(), 2);
    assert_eq!(v["average"]["f1"].as_f64().unwrap(), 1.0);
    assert_eq!(v["average"]["fp_rate"].as_f64().unwrap(), 0.0);

    let lonely = tempfile::tempdir().unwrap();
    fs::write(lonely.path().join("only.txt"), "1\n2\n").unwrap();
    assert_eq!(
        code(&cli(&[
            "eval-profiling",
            "--dir",
            lonely.path().to_str().unwrap()
        ])),
        2
    );
    assert_eq!(
        code(&cli(&[
            "eval-profiling",
            "--dir",
            ".",
            "--train-fraction",
            "1"
        ])),
        1
    );
}

#[test]
fn repeated_commands_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (d, c) = synth(dir.path(), "timestamp", "2000", "0.05");
    for args in [
        vec!["profile", d.as_str()],
        vec!["detect", d.as_str(), "--seed", "12"],
        vec![
            "eval-detection",
            d.as_str(),
            "--truth",
            c.as_str(),
            "--selection",
            "static:0.02",
        ],
    ] {
        assert_eq!(cli(&args).stdout, cli(&args).stdout, "{args:?}");
    }
}
