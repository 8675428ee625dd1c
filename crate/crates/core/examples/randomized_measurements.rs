//! Estimates fidelities from randomized local measurements and shows the
//! 1/sqrt(r) error law and purity mitigation.
//!
//! cargo run --example randomized_measurements

use nalgebra::DMatrix;
use qkad::kernels::{
    estimate_purities, fidelity_exact_matrix, mitigate, rm_expected_error, rm_kernel, rm_profile,
};
use qkad::qsim::FeatureMapConfig;
use qkad::rng::seeded;
use rand::Rng;

fn rms(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    ((a - b).map(|v| v * v).sum() / a.len() as f64).sqrt()
}

fn main() -> qkad::Result<()> {
    let mut rng = seeded(1);
    let x = DMatrix::from_fn(30, 2, |_, _| rng.random_range(-0.5..0.5));
    let fmap = FeatureMapConfig::new(2, 3)?;
    let exact = fidelity_exact_matrix(&x, &x, &fmap)?;

    println!("exact outcome probabilities (no shot noise):");
    for r in [10, 30, 100, 300, 1000] {
        let p = rm_profile(&x, &fmap, r, 1, 7, true)?;
        println!("  r = {r:>4}: RMS error {:.4}", rms(&rm_kernel(&p, &p)?.values, &exact.values));
    }

    let (r, s) = (30, 9000);
    println!("finite shots, r = {r}, s = {s} (nominal error scale {:.2e}):", rm_expected_error(s, r));
    let p = estimate_purities(&rm_profile(&x, &fmap, r, s, 7, false)?);
    let raw = rm_kernel(&p, &p)?;
    let purity = p.purity().expect("purities were estimated").to_vec();
    let fixed = mitigate(&raw, &purity, &purity)?;
    println!("  raw RMS error       {:.4}", rms(&raw.values, &exact.values));
    println!("  mitigated RMS error {:.4}", rms(&fixed.values, &exact.values));
    println!("  purity range        {:.3} .. {:.3}", purity.iter().cloned().fold(f64::INFINITY, f64::min), purity.iter().cloned().fold(0.0, f64::max));
    Ok(())
}
