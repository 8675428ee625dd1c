use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qkad::data::write_creditcard_fixture;
use qkad::harness::{
    prepare_cell, read_results, report, run_experiment, Cell, DataCache, DatasetSpec, ExperimentConfig, Method,
    TrainedArtifact, TrainedModel,
};
use qkad::metrics::evaluate;
use qkad::{Error, Result};

#[derive(Parser)]
#[command(name = "qkad", version, about = "Kernel one-class SVM anomaly detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a preprocessed train/test split as CSV, or a credit-card fixture
    GenData {
        #[command(flatten)]
        common: Common,
        /// Write a schema-valid credit-card CSV with --size rows instead
        #[arg(long)]
        fixture: bool,
        /// Fraud rows in the fixture
        #[arg(long, default_value_t = 10)]
        anomalies: usize,
    },
    /// Compute a kernel matrix and save it (.qkm binary, or .csv)
    Kernel {
        #[command(flatten)]
        common: Common,
        /// Test-by-train matrix instead of the training Gram matrix
        #[arg(long)]
        cross: bool,
    },
    /// Train a detector and save it as JSON
    Train {
        #[command(flatten)]
        common: Common,
    },
    /// Score the test split with a saved detector
    Predict {
        /// Saved detector from `train`
        #[arg(long)]
        model: PathBuf,
        /// Per-point scores CSV
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep and append results as JSON lines
    Experiment {
        #[command(flatten)]
        common: Common,
    },
    /// Summarise a results file into CSV tables
    Report {
        /// JSONL results from `experiment`
        #[arg(long)]
        results: PathBuf,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// TOML or JSON experiment configuration; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    method: Option<Method>,
    /// `synthetic` or `creditcard=<path>`
    #[arg(long)]
    dataset: Option<DatasetSpec>,
    #[arg(long)]
    seed: Option<u64>,
    /// Training set size
    #[arg(long)]
    size: Option<usize>,
    /// Feature (qubit) count
    #[arg(long)]
    features: Option<usize>,
    /// Shots per kernel entry, or per setting for randomized measurements
    #[arg(long)]
    shots: Option<u64>,
    /// Randomized-measurement unitary settings
    #[arg(long)]
    settings: Option<usize>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_path(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(m) = self.method {
            cfg.method = m;
        }
        if let Some(d) = &self.dataset {
            cfg.dataset = d.clone();
        }
        if let Some(s) = self.seed {
            cfg.seeds = vec![s];
        }
        if let Some(n) = self.size {
            cfg.data_sizes = vec![n];
        }
        if let Some(m) = self.features {
            cfg.features = vec![m];
        }
        if let Some(s) = self.shots {
            match cfg.method {
                Method::Randomized | Method::RandomizedMitigated => cfg.s = s,
                _ => cfg.shots = s,
            }
        }
        if let Some(r) = self.settings {
            cfg.r = r;
        }
        if let Some(nu) = self.nu {
            cfg.nu = nu;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// The single cell selected by the flags: first seed, size and
    /// feature count of the configuration.
    fn cell(&self, cfg: &ExperimentConfig) -> Cell {
        Cell {
            seed: cfg.seeds[0],
            n_train: cfg.data_sizes[0],
            n_features: cfg.feature_counts()[0],
        }
    }

    fn out(&self) -> Result<&Path> {
        self.out
            .as_deref()
            .ok_or_else(|| Error::Config("--out is required".into()))
    }
}

fn write_rows(path: &Path, columns: usize, rows: impl Iterator<Item = (String, String, Vec<f64>)>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["split".to_string(), "label".to_string()];
    header.extend((0..columns).map(|j| format!("f{j}")));
    w.write_record(&header)?;
    for (split, label, values) in rows {
        let mut rec = vec![split, label];
        rec.extend(values.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn gen_data(common: &Common, fixture: bool, anomalies: usize) -> Result<()> {
    let out = common.out()?;
    if fixture {
        let total = common.size.unwrap_or(1000);
        if anomalies > total {
            return Err(Error::Config("--anomalies exceeds --size".into()));
        }
        return write_creditcard_fixture(out, total - anomalies, anomalies, common.seed.unwrap_or(0));
    }
    let cfg = common.config()?;
    let data = prepare_cell(&cfg, &DataCache::load(&cfg.dataset)?, common.cell(&cfg))?;
    let train = data.train.row_iter().map(|r| ("train".into(), "normal".into(), r.iter().copied().collect()));
    let test = data.test.row_iter().zip(&data.test_labels).map(|(r, l)| {
        let label = if l.is_anomaly() { "anomaly" } else { "normal" };
        ("test".into(), label.into(), r.iter().copied().collect())
    });
    write_rows(out, data.train.ncols(), train.chain(test))
}

fn kernel(common: &Common, cross: bool) -> Result<()> {
    let out = common.out()?;
    let cfg = common.config()?;
    let cell = common.cell(&cfg);
    let data = prepare_cell(&cfg, &DataCache::load(&cfg.dataset)?, cell)?;
    let spec = cfg.method.kernel_spec(&cfg, cell.n_features)?;
    let fitted = spec.fit(&data.train, cell.seed)?;
    let k = if cross { fitted.cross(&data.test)? } else { fitted.gram().clone() };
    let w = BufWriter::new(File::create(out)?);
    if out.extension().is_some_and(|e| e == "csv") {
        k.write_csv(w)
    } else {
        k.write_binary(w)
    }
}

fn train(common: &Common) -> Result<()> {
    let out = common.out()?;
    let cfg = common.config()?;
    let cell = common.cell(&cfg);
    let data = prepare_cell(&cfg, &DataCache::load(&cfg.dataset)?, cell)?;
    let spec = cfg.method.kernel_spec(&cfg, cell.n_features)?;
    let model = TrainedModel::fit(&cfg, &spec, &data.train, cell.seed)?;
    let artifact = TrainedArtifact::new(&cfg, cell, data.pipeline, spec, &data.train, &model);
    serde_json::to_writer(BufWriter::new(File::create(out)?), &artifact)?;
    Ok(())
}

fn predict(model: &Path, out: Option<&Path>) -> Result<()> {
    let artifact: TrainedArtifact = serde_json::from_reader(BufReader::new(File::open(model)?))
        .map_err(|e| Error::Format(format!("{}: {e}", model.display())))?;
    let cfg = &artifact.config;
    let data = prepare_cell(cfg, &DataCache::load(&cfg.dataset)?, artifact.cell)?;
    let (scores, _) = artifact.restore()?.score(&data.test)?;
    let report = evaluate(&data.test_labels, &scores)?;
    if let Some(out) = out {
        let mut w = csv::Writer::from_path(out)?;
        w.write_record(["index", "label", "decision", "predicted"])?;
        for (i, (s, l)) in scores.iter().zip(&data.test_labels).enumerate() {
            let truth = if l.is_anomaly() { "anomaly" } else { "normal" };
            let pred = if *s < 0.0 { "anomaly" } else { "normal" };
            w.write_record([i.to_string(), truth.into(), s.to_string(), pred.into()])?;
        }
        w.flush()?;
    }
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, &report)?;
    writeln!(stdout)?;
    Ok(())
}

fn experiment(common: &Common) -> Result<()> {
    if common.config.is_none() {
        return Err(Error::Config("experiment needs --config".into()));
    }
    let cfg = common.config()?;
    let results = run_experiment(&cfg, common.out.as_deref())?;
    for r in &results {
        println!(
            "{} {} ap={:.4} f1={:.4} train={:.3}s test={:.3}s",
            r.method, r.cell, r.metrics.average_precision, r.metrics.f1, r.train_seconds, r.test_seconds
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenData {
            common,
            fixture,
            anomalies,
        } => gen_data(&common, fixture, anomalies),
        Command::Kernel { common, cross } => kernel(&common, cross),
        Command::Train { common } => train(&common),
        Command::Predict { model, out } => predict(&model, out.as_deref()),
        Command::Experiment { common } => experiment(&common),
        Command::Report { results, out } => {
            for path in report(&read_results(&results)?, &out)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
