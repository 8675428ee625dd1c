//! Credit-card pipeline: load (or generate) the transaction table, draw a
//! split, preprocess per kernel family and evaluate several detectors.
//!
//! cargo run --example creditcard_pipeline [path/to/creditcard.csv]

use qkad::data::write_creditcard_fixture;
use qkad::harness::{run_experiment, DatasetSpec, ExperimentConfig, Method};

fn main() -> qkad::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => p.into(),
        None => {
            let p = std::env::temp_dir().join("qkad_creditcard_fixture.csv");
            write_creditcard_fixture(&p, 1990, 10, 0)?;
            println!("no file given, using a generated 2,000-row fixture at {}", p.display());
            p
        }
    };
    for method in [Method::Rbf, Method::Inversion, Method::RandomizedMitigated, Method::VsAverage] {
        let cfg = ExperimentConfig {
            dataset: DatasetSpec::Creditcard { path: path.clone() },
            method,
            data_sizes: vec![500],
            seeds: vec![0, 1, 2],
            r: 10,
            s: 1000,
            ..ExperimentConfig::default()
        };
        for r in run_experiment(&cfg, None)? {
            println!(
                "{method:<21} seed {} AP {:.3} F1 {:.3}  train {:.2}s test {:.2}s  shots {:.2e} (~{:.1} h on hardware)",
                r.cell.seed,
                r.metrics.average_precision,
                r.metrics.f1,
                r.train_seconds,
                r.test_seconds,
                r.total_shots as f64,
                r.estimated_hardware_seconds / 3600.0
            );
        }
    }
    Ok(())
}
