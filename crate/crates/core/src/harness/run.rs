use std::collections::HashSet;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::artifact::TrainedModel;
use super::config::{DatasetSpec, ExperimentConfig, Method};
use super::hardware::estimate_hardware_seconds;
use super::report::read_results;
use crate::data::{gen_synthetic, load_creditcard, make_split, pipeline, Dataset, FittedPipeline, Label, SplitManifest};
use crate::error::{Error, Result};
use crate::metrics::{evaluate, EvalReport};

/// One point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub seed: u64,
    pub n_train: usize,
    pub n_features: usize,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seed={} n={} features={}", self.seed, self.n_train, self.n_features)
    }
}

/// Source data loaded once per sweep.
#[derive(Debug, Clone)]
pub struct DataCache {
    spec: DatasetSpec,
    creditcard: Option<Dataset>,
}

impl DataCache {
    pub fn load(spec: &DatasetSpec) -> Result<Self> {
        let creditcard = match spec {
            DatasetSpec::Synthetic => None,
            DatasetSpec::Creditcard { path } => Some(load_creditcard(path)?),
        };
        Ok(Self {
            spec: spec.clone(),
            creditcard,
        })
    }
}

/// Preprocessed data of one cell.
#[derive(Debug, Clone)]
pub struct CellData {
    pub train: DMatrix<f64>,
    pub test: DMatrix<f64>,
    pub test_labels: Vec<Label>,
    pub train_anomalies: usize,
    pub pipeline: FittedPipeline,
    pub manifest: Option<SplitManifest>,
}

pub fn prepare_cell(cfg: &ExperimentConfig, cache: &DataCache, cell: Cell) -> Result<CellData> {
    if cache.spec != cfg.dataset {
        return Err(Error::Config("data cache was loaded for a different dataset".into()));
    }
    let split = match &cache.creditcard {
        None => gen_synthetic(cell.n_train, cell.seed)?,
        Some(data) => make_split(data, cell.n_train, cell.seed)?,
    };
    let synthetic = cache.creditcard.is_none();
    let (train, test, fitted) = pipeline(
        cfg.method.pipeline_kind(),
        &split.train.features,
        &split.test.features,
        cell.n_features,
        synthetic,
    )?;
    let test_labels = split
        .test
        .labels
        .clone()
        .ok_or_else(|| Error::Ingestion("test split has no labels".into()))?;
    Ok(CellData {
        train,
        test,
        test_labels,
        train_anomalies: split.train.anomaly_count(),
        pipeline: fitted,
        manifest: split.manifest,
    })
}

/// One line of the results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub config: ExperimentConfig,
    pub method: Method,
    pub dataset: String,
    pub cell: Cell,
    pub n_test: usize,
    pub components: usize,
    pub metrics: EvalReport,
    pub train_seconds: f64,
    pub test_seconds: f64,
    pub train_evaluations: u64,
    pub test_evaluations: u64,
    pub train_entries: u64,
    pub test_entries: u64,
    pub total_shots: u64,
    pub estimated_hardware_seconds: f64,
}

impl RunResult {
    /// Equality ignoring wall-clock fields.
    pub fn same_outcome(&self, other: &RunResult) -> bool {
        let strip = |r: &RunResult| RunResult {
            train_seconds: 0.0,
            test_seconds: 0.0,
            ..r.clone()
        };
        strip(self) == strip(other)
    }
}

/// Trains and evaluates one cell. Train time covers the training kernel and
/// the solver; test time covers the prediction kernel and scoring.
pub fn run_cell(cfg: &ExperimentConfig, cache: &DataCache, cell: Cell) -> Result<RunResult> {
    let data = prepare_cell(cfg, cache, cell)?;
    let spec = cfg.method.kernel_spec(cfg, cell.n_features)?;

    let start = Instant::now();
    let model = TrainedModel::fit(cfg, &spec, &data.train, cell.seed)?;
    let train_seconds = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let (scores, test_cost) = model.score(&data.test)?;
    let test_seconds = start.elapsed().as_secs_f64();

    let metrics = evaluate(&data.test_labels, &scores)?;
    let train_cost = model.train_cost();
    let total_shots = train_cost.total_shots + test_cost.total_shots;
    Ok(RunResult {
        config: cfg.clone(),
        method: cfg.method,
        dataset: cfg.dataset.name().to_string(),
        cell,
        n_test: data.test.nrows(),
        components: model.n_components(),
        metrics,
        train_seconds,
        test_seconds,
        train_evaluations: train_cost.evaluations,
        test_evaluations: test_cost.evaluations,
        train_entries: train_cost.entries,
        test_entries: test_cost.entries,
        total_shots,
        estimated_hardware_seconds: estimate_hardware_seconds(total_shots as f64, cfg.shot_rate_hz),
    })
}

fn append(writer: &Mutex<Option<BufWriter<File>>>, result: &RunResult) -> Result<()> {
    let mut guard = writer.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(w) = guard.as_mut() {
        serde_json::to_writer(&mut *w, result)?;
        w.write_all(b"\n")?;
        w.flush()?;
    }
    Ok(())
}

/// Runs every cell of the sweep. With `out` set, each finished cell is
/// appended to that JSONL file immediately, and cells already recorded
/// there under the same configuration are skipped.
pub fn run_experiment(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Vec<RunResult>> {
    cfg.validate()?;
    let cache = DataCache::load(&cfg.dataset)?;

    let mut results: Vec<RunResult> = match out {
        Some(p) if p.exists() => read_results(p)?.into_iter().filter(|r| r.config == *cfg).collect(),
        _ => Vec::new(),
    };
    let done: HashSet<Cell> = results.iter().map(|r| r.cell).collect();
    let mut cells = Vec::new();
    for &n_features in &cfg.feature_counts() {
        for &n_train in &cfg.data_sizes {
            for &seed in &cfg.seeds {
                let cell = Cell {
                    seed,
                    n_train,
                    n_features,
                };
                if !done.contains(&cell) {
                    cells.push(cell);
                }
            }
        }
    }
    if !done.is_empty() {
        log::info!("resuming: {} cells recorded, {} to run", done.len(), cells.len());
    }

    let writer = Mutex::new(match out {
        Some(p) => Some(BufWriter::new(OpenOptions::new().create(true).append(true).open(p)?)),
        None => None,
    });
    let run_one = |cell: Cell| -> Result<RunResult> {
        let r = run_cell(cfg, &cache, cell).map_err(|e| Error::Cell {
            cell: cell.to_string(),
            source: Box::new(e),
        })?;
        log::info!(
            "{} {}: ap={:.4} f1={:.4} train={:.3}s test={:.3}s",
            cfg.method,
            cell,
            r.metrics.average_precision,
            r.metrics.f1,
            r.train_seconds,
            r.test_seconds
        );
        append(&writer, &r)?;
        Ok(r)
    };
    let fresh: Vec<RunResult> = if cfg.parallel_cells {
        cells.into_par_iter().map(run_one).collect::<Result<_>>()?
    } else {
        cells.into_iter().map(run_one).collect::<Result<_>>()?
    };
    results.extend(fresh);
    results.sort_by_key(|r| (r.cell.n_features, r.cell.n_train, r.cell.seed));
    Ok(results)
}
