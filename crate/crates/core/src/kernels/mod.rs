//! Kernel backends producing training (square) and prediction (rectangular)
//! matrices.

mod backend;
mod fidelity;
mod matrix;
mod randomized;
mod rbf;

pub use backend::{FittedKernel, KernelSpec};
pub use fidelity::{
    feature_states, fidelity_exact_matrix, inversion_test_matrix, swap_test_ancilla_zero_probability,
    swap_test_matrix, SwapMode,
};
pub use matrix::{KernelMatrix, KernelMeta, KernelMethod};
pub use randomized::{
    estimate_purities, mitigate, outcome_weights, rm_expected_error, rm_kernel, rm_profile,
    rm_profile_with_settings, sample_settings, ProbabilityTable, MAX_RM_QUBITS,
};
pub use rbf::{gamma_scale, rbf_matrix, RbfConfig};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub(crate) fn check_same_features(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<()> {
    if x.ncols() != y.ncols() {
        return Err(Error::DimensionMismatch {
            expected: x.ncols(),
            actual: y.ncols(),
            context: "feature dimension",
        });
    }
    Ok(())
}

pub(crate) fn row_vec(x: &DMatrix<f64>, i: usize) -> Vec<f64> {
    x.row(i).iter().copied().collect()
}

/// Builds a matrix from independently computed entries, in parallel over
/// rows. When `symmetric` is set only `j >= i` is evaluated and mirrored.
pub(crate) fn fill_matrix<F>(n_rows: usize, n_cols: usize, symmetric: bool, entry: F) -> Result<DMatrix<f64>>
where
    F: Fn(usize, usize) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    let rows: Vec<Vec<f64>> = (0..n_rows)
        .into_par_iter()
        .map(|i| {
            let start = if symmetric { i } else { 0 };
            (start..n_cols).map(|j| entry(i, j)).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut m = DMatrix::zeros(n_rows, n_cols);
    for (i, row) in rows.into_iter().enumerate() {
        let start = if symmetric { i } else { 0 };
        for (k, v) in row.into_iter().enumerate() {
            let j = start + k;
            m[(i, j)] = v;
            if symmetric {
                m[(j, i)] = v;
            }
        }
    }
    Ok(m)
}

pub(crate) fn evaluation_count(n_rows: usize, n_cols: usize, symmetric: bool) -> u64 {
    if symmetric {
        (n_rows * (n_rows + 1) / 2) as u64
    } else {
        (n_rows * n_cols) as u64
    }
}
