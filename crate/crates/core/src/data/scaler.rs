use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-feature standardisation to zero mean and unit (population) standard
/// deviation. Constant features are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerModel {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// Input columns kept in the output.
    pub kept: Vec<usize>,
    pub n_input: usize,
}

impl ScalerModel {
    pub fn fit(x: &DMatrix<f64>) -> Result<Self> {
        let n = x.nrows();
        if n == 0 {
            return Err(Error::DegenerateData("cannot fit a scaler on zero rows".into()));
        }
        let mut mean = Vec::new();
        let mut std = Vec::new();
        let mut kept = Vec::new();
        for c in 0..x.ncols() {
            let col = x.column(c);
            let m = col.sum() / n as f64;
            let s = (col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n as f64).sqrt();
            if s > 1e-12 * m.abs().max(1.0) {
                mean.push(m);
                std.push(s);
                kept.push(c);
            } else {
                log::warn!("dropping zero-variance feature {c}");
            }
        }
        if kept.is_empty() {
            return Err(Error::DegenerateData("every feature is constant".into()));
        }
        Ok(Self {
            mean,
            std,
            kept,
            n_input: x.ncols(),
        })
    }

    pub fn apply(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.ncols() != self.n_input {
            return Err(Error::DimensionMismatch {
                expected: self.n_input,
                actual: x.ncols(),
                context: "scaler input width",
            });
        }
        Ok(DMatrix::from_fn(x.nrows(), self.kept.len(), |r, k| {
            (x[(r, self.kept[k])] - self.mean[k]) / self.std[k]
        }))
    }
}
