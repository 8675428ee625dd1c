use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{check_same_features, evaluation_count, fill_matrix, KernelMatrix, KernelMeta, KernelMethod};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RbfConfig {
    pub gamma: f64,
}

impl RbfConfig {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { gamma })
    }
}

/// `exp(-γ ||x_i - y_j||^2)`.
pub fn rbf_matrix(x: &DMatrix<f64>, y: &DMatrix<f64>, config: RbfConfig) -> Result<KernelMatrix> {
    check_same_features(x, y)?;
    let symmetric = std::ptr::eq(x, y);
    let values = fill_matrix(x.nrows(), y.nrows(), symmetric, |i, j| {
        let d2: f64 = x.row(i).iter().zip(y.row(j).iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok((-config.gamma * d2).exp())
    })?;
    Ok(KernelMatrix::new(
        values,
        KernelMethod::Rbf,
        KernelMeta {
            gamma: Some(config.gamma),
            evaluations: evaluation_count(x.nrows(), y.nrows(), symmetric),
            symmetric,
            ..Default::default()
        },
    ))
}

/// `1 / (n_features * Var(X))` with the variance pooled over every entry of
/// the training matrix.
pub fn gamma_scale(x_train: &DMatrix<f64>) -> Result<f64> {
    let n = x_train.len();
    if n == 0 {
        return Err(Error::DegenerateData("empty training matrix".into()));
    }
    let mean = x_train.iter().sum::<f64>() / n as f64;
    let var = x_train.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    if !(var > 0.0) {
        return Err(Error::DegenerateData("pooled variance is zero".into()));
    }
    Ok(1.0 / (x_train.ncols() as f64 * var))
}
