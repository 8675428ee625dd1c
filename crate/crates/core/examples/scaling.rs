//! Training and testing time against data size for the full inversion-test
//! kernel and the subsampling ensemble, with fitted scaling exponents, CSV
//! tables and hardware-time estimates.
//!
//! cargo run --release --example scaling

use qkad::harness::{
    estimate_hardware_seconds, report, run_experiment, scaling_fit, seconds_to_years, symmetric_shot_count,
    ExperimentConfig, Method, DEFAULT_SHOT_RATE_HZ,
};

fn main() -> qkad::Result<()> {
    let sizes = vec![250, 500, 750, 1000, 1250, 1500];
    let mut all = Vec::new();
    for method in [Method::Inversion, Method::VsAverage] {
        let cfg = ExperimentConfig {
            method,
            data_sizes: sizes.clone(),
            seeds: vec![0],
            ..ExperimentConfig::default()
        };
        let results = run_experiment(&cfg, None)?;
        let xs: Vec<f64> = results.iter().map(|r| r.cell.n_train as f64).collect();
        let train: Vec<f64> = results.iter().map(|r| r.train_seconds).collect();
        let test: Vec<f64> = results.iter().map(|r| r.test_seconds).collect();
        println!("{method}:");
        for r in &results {
            println!(
                "  n = {:>4}: train {:>7.3}s  test {:>6.3}s  evaluations {:>7}",
                r.cell.n_train, r.train_seconds, r.test_seconds, r.train_evaluations
            );
        }
        println!(
            "  exponents: train {:.2}, test {:.2}",
            scaling_fit(&xs, &train)?,
            scaling_fit(&xs, &test)?
        );
        all.extend(results);
    }
    let out = std::env::temp_dir().join("qkad_scaling");
    for f in report(&all, &out)? {
        println!("wrote {}", f.display());
    }

    let shots = symmetric_shot_count(284_000, 1000);
    let years = seconds_to_years(estimate_hardware_seconds(shots, DEFAULT_SHOT_RATE_HZ));
    println!("full-dataset Gram matrix at 1000 shots/entry: {shots:.2e} shots, {years:.0} years at 5 kHz");
    Ok(())
}
