//! Computes the same training matrix with every kernel backend and compares
//! the shot-based estimates with the exact fidelity kernel.
//!
//! cargo run --example kernels

use nalgebra::DMatrix;
use qkad::kernels::{
    fidelity_exact_matrix, gamma_scale, inversion_test_matrix, rbf_matrix, swap_test_matrix, KernelMatrix,
    RbfConfig, SwapMode,
};
use qkad::qsim::FeatureMapConfig;

fn max_diff(a: &KernelMatrix, b: &KernelMatrix) -> f64 {
    (&a.values - &b.values).abs().max()
}

fn main() -> qkad::Result<()> {
    let x = DMatrix::from_row_slice(5, 2, &[0.1, 0.2, -0.3, 0.05, 0.4, -0.2, 0.0, 0.0, 0.25, 0.3]);
    let fmap = FeatureMapConfig::new(2, 3)?;

    let exact = fidelity_exact_matrix(&x, &x, &fmap)?;
    println!("exact fidelity kernel:\n{:.4}", exact.values);

    for shots in [100, 1000, 10_000] {
        let inv = inversion_test_matrix(&x, &x, &fmap, shots, 0)?;
        let swap = swap_test_matrix(&x, &x, &fmap, shots, 0, SwapMode::Analytic)?;
        println!(
            "{shots:>6} shots: inversion max error {:.4}, swap max error {:.4}",
            max_diff(&inv, &exact),
            max_diff(&swap, &exact)
        );
    }
    let circuit = swap_test_matrix(&x, &x, &fmap, 1000, 0, SwapMode::FullCircuit)?;
    println!("swap test on the 5-qubit circuit: max error {:.4}", max_diff(&circuit, &exact));

    let gamma = gamma_scale(&x)?;
    let rbf = rbf_matrix(&x, &x, RbfConfig::new(gamma)?)?;
    println!("RBF (gamma = {gamma:.3}):\n{:.4}", rbf.values);

    let path = std::env::temp_dir().join("qkad_example.qkm");
    exact.write_binary(std::fs::File::create(&path)?)?;
    let back = KernelMatrix::read_binary(std::fs::File::open(&path)?)?;
    println!("round trip through {}: identical = {}", path.display(), back.values == exact.values);
    Ok(())
}
