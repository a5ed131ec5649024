use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use patternforge::config::SamplePolicy;
use patternforge::eval::synth::{synth_corpus, CorpusSpec, Injector};
use patternforge::eval::{eval_detection, eval_profiling, load_domains};
use patternforge::io::{self, read_csv, read_labels, SampleManifest, TableSource};
use patternforge::pipeline::{column_config, main_sample};
use patternforge::{run_table, ColumnSelection, EngineConfig, Error, Mode, Selection};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "patternforge",
    version,
    about = "Infer regex data patterns from CSV columns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe every value of the selected columns with patterns.
    Profile {
        input: PathBuf,
        #[command(flatten)]
        cols: ColumnArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Report the rows that match no healthy pattern.
    Detect {
        input: PathBuf,
        #[command(flatten)]
        cols: ColumnArgs,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        detect: DetectArgs,
    },
    /// Write the rows a guided run learns from, for labelling.
    Sample {
        input: PathBuf,
        #[command(flatten)]
        cols: ColumnArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Score profiling on a folder of single-column files, one per domain.
    EvalProfiling {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        train_fraction: f64,
        #[arg(long, env = "PATTERNFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run detection and score it against a row-aligned clean table.
    EvalDetection {
        input: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[command(flatten)]
        cols: ColumnArgs,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        detect: DetectArgs,
    },
    /// Generate a dirty column and its clean twin as two CSV files.
    Synth {
        #[arg(long)]
        generator: String,
        #[arg(long, default_value_t = 10_000)]
        rows: usize,
        #[arg(long, default_value_t = 0.05)]
        rate: f64,
        /// Comma-separated: truncate, case-flip, symbol-insert, tail-append.
        #[arg(long, value_delimiter = ',')]
        injectors: Vec<String>,
        #[arg(long, env = "PATTERNFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        dirty: PathBuf,
        #[arg(long)]
        clean: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ColumnArgs {
    /// Column to process; repeatable.
    #[arg(long = "column", conflicts_with = "all")]
    columns: Vec<String>,
    /// Process every column (the default).
    #[arg(long)]
    all: bool,
}

impl ColumnArgs {
    fn selection(&self) -> ColumnSelection {
        if self.columns.is_empty() {
            ColumnSelection::All
        } else {
            ColumnSelection::Named(self.columns.clone())
        }
    }
}

#[derive(Args, Debug)]
struct EngineArgs {
    #[arg(long, env = "PATTERNFORGE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.95)]
    rcov_init: f64,
    #[arg(long, default_value_t = 5)]
    n_subset: usize,
    /// Sample this fraction of rows instead of the z-score size.
    #[arg(long)]
    sample_fraction: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DetectArgs {
    /// Label file for the sampled rows; switches to guided detection.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    fixed_rcov: Option<f64>,
    #[arg(long)]
    fixed_rem: Option<f64>,
    /// kmeans, none, static or static:<t>.
    #[arg(long, default_value = "kmeans", value_parser = parse_selection)]
    selection: Selection,
}

fn parse_selection(s: &str) -> Result<Selection, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

fn engine_config(
    mode: Mode,
    engine: &EngineArgs,
    detect: Option<&DetectArgs>,
) -> Result<EngineConfig, Failure> {
    let mut cfg = EngineConfig {
        mode,
        r_cov_init: engine.rcov_init,
        n_subset: engine.n_subset,
        seed: engine.seed,
        sample_policy: engine
            .sample_fraction
            .map_or(SamplePolicy::ZScore, SamplePolicy::FixedFraction),
        ..EngineConfig::default()
    };
    if let Some(d) = detect {
        cfg.fixed_r_cov = d.fixed_rcov;
        cfg.fixed_r_em = d.fixed_rem;
        cfg.selection = d.selection;
    }
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn detect_mode(detect: &DetectArgs) -> Mode {
    if detect.labels.is_some() {
        Mode::DetectGuided
    } else {
        Mode::DetectAuto
    }
}

fn detect_reports(
    input: &Path,
    cols: &ColumnArgs,
    engine: &EngineArgs,
    detect: &DetectArgs,
) -> Result<(TableSource, Vec<patternforge::ColumnReport>), Failure> {
    let cfg = engine_config(detect_mode(detect), engine, Some(detect))?;
    let table = read_csv(input)?;
    let labels = detect.labels.as_deref().map(read_labels).transpose()?;
    let reports = run_table(&table, &cfg, &cols.selection(), labels.as_ref())?;
    Ok((table, reports))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Profile {
            input,
            cols,
            engine,
        } => {
            let cfg = engine_config(Mode::Profile, &engine, None)?;
            let table = read_csv(&input)?;
            let reports = run_table(&table, &cfg, &cols.selection(), None)?;
            io::write_report(&reports, engine.out.as_deref())?;
        }
        Command::Detect {
            input,
            cols,
            engine,
            detect,
        } => {
            let (_, reports) = detect_reports(&input, &cols, &engine, &detect)?;
            io::write_report(&reports, engine.out.as_deref())?;
        }
        Command::Sample {
            input,
            cols,
            engine,
        } => {
            let cfg = engine_config(Mode::DetectGuided, &engine, None)?;
            let table = read_csv(&input)?;
            let ordinals = cols.selection().resolve(&table)?;
            let [ordinal] = ordinals[..] else {
                return Err(Failure::Usage("sample needs exactly one --column".into()));
            };
            let column_cfg = column_config(&cfg, ordinal);
            let sample = main_sample(&table.column(ordinal), &column_cfg)?;
            let manifest =
                SampleManifest::from_sample(&table.headers[ordinal], column_cfg.seed, &sample);
            io::emit_sample_manifest(&manifest, engine.out.as_deref())?;
        }
        Command::EvalProfiling {
            dir,
            train_fraction,
            seed,
            out,
        } => {
            if !(train_fraction > 0.0 && train_fraction < 1.0) {
                return Err(Failure::Usage(format!(
                    "--train-fraction must lie in (0, 1), got {train_fraction}"
                )));
            }
            let domains = load_domains(&dir)?;
            let evaluation = eval_profiling(&domains, train_fraction, seed)?;
            io::write_json(&evaluation, out.as_deref())?;
        }
        Command::EvalDetection {
            input,
            truth,
            cols,
            engine,
            detect,
        } => {
            let (table, mut reports) = detect_reports(&input, &cols, &engine, &detect)?;
            let clean = read_csv(&truth)?;
            for report in &mut reports {
                let dirty = table.column_by_name(&report.column)?;
                let truth_column = clean.column_by_name(&report.column)?;
                report.metrics = Some(eval_detection(report, &dirty, &truth_column)?);
            }
            io::write_report(&reports, engine.out.as_deref())?;
        }
        Command::Synth {
            generator,
            rows,
            rate,
            injectors,
            seed,
            dirty,
            clean,
        } => {
            let mut spec = CorpusSpec::new(&generator, rows, rate)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            if !injectors.is_empty() {
                let parsed = injectors
                    .iter()
                    .map(|s| s.parse::<Injector>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| Failure::Usage(e.to_string()))?;
                spec = spec.with_injectors(parsed);
            }
            let column = synth_corpus(&spec, seed).map_err(|e| Failure::Usage(e.to_string()))?;
            write_single_column(&dirty, &column.name, &column.dirty)?;
            write_single_column(&clean, &column.name, &column.clean)?;
        }
    }
    Ok(())
}

fn write_single_column(path: &Path, header: &str, values: &[String]) -> Result<(), Error> {
    let csv_err = |e: csv::Error| Error::Csv {
        path: path.to_owned(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record([header]).map_err(csv_err)?;
    for v in values {
        w.write_record([v]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: path.to_owned(),
        source: e,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
