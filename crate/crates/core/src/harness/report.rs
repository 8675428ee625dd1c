use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::Method;
use super::hardware::scaling_fit;
use super::run::RunResult;
use crate::error::{Error, Result};

/// Reads a JSONL results file, skipping blank lines.
pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<RunResult>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Format(format!("results line {}: {e}", i + 1)))?);
    }
    Ok(out)
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Seed-aggregated statistics of one (method, dataset, features, size)
/// group. Standard deviations use the `n - 1` denominator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub method: Method,
    pub dataset: String,
    pub n_features: usize,
    pub n_train: usize,
    pub n_seeds: usize,
    pub precision_mean: f64,
    pub precision_std: f64,
    pub recall_mean: f64,
    pub recall_std: f64,
    pub f1_mean: f64,
    pub f1_std: f64,
    pub ap_mean: f64,
    pub ap_std: f64,
    pub train_seconds_mean: f64,
    pub train_seconds_std: f64,
    pub test_seconds_mean: f64,
    pub test_seconds_std: f64,
    pub train_evaluations_mean: f64,
    pub test_evaluations_mean: f64,
    pub hardware_seconds_mean: f64,
}

pub fn summarize(results: &[RunResult]) -> Vec<Summary> {
    let mut groups: BTreeMap<(String, String, usize, usize), Vec<&RunResult>> = BTreeMap::new();
    for r in results {
        let key = (r.method.to_string(), r.dataset.clone(), r.cell.n_features, r.cell.n_train);
        groups.entry(key).or_default().push(r);
    }
    groups
        .into_values()
        .map(|g| {
            let stat = |f: &dyn Fn(&RunResult) -> f64| mean_std(&g.iter().map(|r| f(r)).collect::<Vec<_>>());
            let (precision_mean, precision_std) = stat(&|r| r.metrics.precision);
            let (recall_mean, recall_std) = stat(&|r| r.metrics.recall);
            let (f1_mean, f1_std) = stat(&|r| r.metrics.f1);
            let (ap_mean, ap_std) = stat(&|r| r.metrics.average_precision);
            let (train_seconds_mean, train_seconds_std) = stat(&|r| r.train_seconds);
            let (test_seconds_mean, test_seconds_std) = stat(&|r| r.test_seconds);
            Summary {
                method: g[0].method,
                dataset: g[0].dataset.clone(),
                n_features: g[0].cell.n_features,
                n_train: g[0].cell.n_train,
                n_seeds: g.len(),
                precision_mean,
                precision_std,
                recall_mean,
                recall_std,
                f1_mean,
                f1_std,
                ap_mean,
                ap_std,
                train_seconds_mean,
                train_seconds_std,
                test_seconds_mean,
                test_seconds_std,
                train_evaluations_mean: stat(&|r| r.train_evaluations as f64).0,
                test_evaluations_mean: stat(&|r| r.test_evaluations as f64).0,
                hardware_seconds_mean: stat(&|r| r.estimated_hardware_seconds).0,
            }
        })
        .collect()
}

#[derive(Serialize)]
struct PerformanceRow<'a> {
    method: Method,
    dataset: &'a str,
    n_features: usize,
    n_train: usize,
    n_seeds: usize,
    precision_mean: f64,
    precision_std: f64,
    recall_mean: f64,
    recall_std: f64,
    f1_mean: f64,
    f1_std: f64,
    ap_mean: f64,
    ap_std: f64,
}

#[derive(Serialize)]
struct TimingRow<'a> {
    method: Method,
    dataset: &'a str,
    n_features: usize,
    n_train: usize,
    n_seeds: usize,
    train_seconds_mean: f64,
    train_seconds_std: f64,
    test_seconds_mean: f64,
    test_seconds_std: f64,
    train_evaluations_mean: f64,
    test_evaluations_mean: f64,
    hardware_seconds_mean: f64,
}

#[derive(Serialize)]
struct ScalingRow<'a> {
    method: Method,
    dataset: &'a str,
    n_features: usize,
    n_sizes: usize,
    train_exponent: f64,
    test_exponent: f64,
}

/// Writes `performance.csv`, `timing.csv` and, where a group spans at least
/// three training sizes, `scaling.csv` into `out_dir`.
pub fn report(results: &[RunResult], out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir)?;
    let summary = summarize(results);

    let perf_path = out_dir.join("performance.csv");
    let mut w = csv::Writer::from_path(&perf_path)?;
    for s in &summary {
        w.serialize(PerformanceRow {
            method: s.method,
            dataset: &s.dataset,
            n_features: s.n_features,
            n_train: s.n_train,
            n_seeds: s.n_seeds,
            precision_mean: s.precision_mean,
            precision_std: s.precision_std,
            recall_mean: s.recall_mean,
            recall_std: s.recall_std,
            f1_mean: s.f1_mean,
            f1_std: s.f1_std,
            ap_mean: s.ap_mean,
            ap_std: s.ap_std,
        })?;
    }
    w.flush()?;

    let timing_path = out_dir.join("timing.csv");
    let mut w = csv::Writer::from_path(&timing_path)?;
    for s in &summary {
        w.serialize(TimingRow {
            method: s.method,
            dataset: &s.dataset,
            n_features: s.n_features,
            n_train: s.n_train,
            n_seeds: s.n_seeds,
            train_seconds_mean: s.train_seconds_mean,
            train_seconds_std: s.train_seconds_std,
            test_seconds_mean: s.test_seconds_mean,
            test_seconds_std: s.test_seconds_std,
            train_evaluations_mean: s.train_evaluations_mean,
            test_evaluations_mean: s.test_evaluations_mean,
            hardware_seconds_mean: s.hardware_seconds_mean,
        })?;
    }
    w.flush()?;
    let mut written = vec![perf_path, timing_path];

    let mut by_curve: BTreeMap<(String, String, usize), Vec<&Summary>> = BTreeMap::new();
    for s in &summary {
        by_curve
            .entry((s.method.to_string(), s.dataset.clone(), s.n_features))
            .or_default()
            .push(s);
    }
    let mut rows = Vec::new();
    for curve in by_curve.values().filter(|c| c.len() >= 3) {
        let sizes: Vec<f64> = curve.iter().map(|s| s.n_train as f64).collect();
        let train: Vec<f64> = curve.iter().map(|s| s.train_seconds_mean).collect();
        let test: Vec<f64> = curve.iter().map(|s| s.test_seconds_mean).collect();
        let (Ok(train_exponent), Ok(test_exponent)) = (scaling_fit(&sizes, &train), scaling_fit(&sizes, &test)) else {
            continue;
        };
        rows.push(ScalingRow {
            method: curve[0].method,
            dataset: &curve[0].dataset,
            n_features: curve[0].n_features,
            n_sizes: curve.len(),
            train_exponent,
            test_exponent,
        });
    }
    if !rows.is_empty() {
        let scaling_path = out_dir.join("scaling.csv");
        let mut w = csv::Writer::from_path(&scaling_path)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        written.push(scaling_path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_experiment, ExperimentConfig};

    #[test]
    fn writes_csvs() {
        let cfg = ExperimentConfig {
            method: Method::Rbf,
            data_sizes: vec![100, 150, 200],
            seeds: vec![0, 1],
            ..ExperimentConfig::default()
        };
        let results = run_experiment(&cfg, None).unwrap();
        let s = summarize(&results);
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|g| g.n_seeds == 2));

        let dir = tempfile::tempdir().unwrap();
        let files = report(&results, dir.path()).unwrap();
        assert_eq!(files.len(), 3);
        let perf = std::fs::read_to_string(&files[0]).unwrap();
        assert!(perf.starts_with("method,dataset,n_features,n_train,n_seeds,precision_mean"));
        assert_eq!(perf.lines().count(), 4);
        let scaling = std::fs::read_to_string(&files[2]).unwrap();
        assert!(scaling.contains("rbf,synthetic,2,3,"));
    }

    #[test]
    fn sample_std() {
        assert_eq!(mean_std(&[1.0, 3.0]), (2.0, 2f64.sqrt()));
        assert_eq!(mean_std(&[5.0]), (5.0, 0.0));
    }
}
