use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sorted_symmetric_eigen;

/// Projection onto the top eigenvectors of the training covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// One orthonormal row per component. Each row's largest-magnitude
    /// coordinate is positive.
    pub components: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
}

impl PcaModel {
    pub fn fit(x: &DMatrix<f64>, n_components: usize) -> Result<Self> {
        let (n, dim) = x.shape();
        if n_components == 0 || n_components > dim {
            return Err(Error::InvalidParameter(format!(
                "PCA needs 1..={dim} components, got {n_components}"
            )));
        }
        if n < 2 {
            return Err(Error::DegenerateData("PCA needs at least two rows".into()));
        }
        let mean: Vec<f64> = (0..dim).map(|c| x.column(c).sum() / n as f64).collect();
        let centered = DMatrix::from_fn(n, dim, |r, c| x[(r, c)] - mean[c]);
        let cov = centered.transpose() * &centered / (n - 1) as f64;
        let (values, vectors) = sorted_symmetric_eigen(&cov);
        let components = (0..n_components)
            .map(|k| {
                let mut v: Vec<f64> = vectors.column(k).iter().copied().collect();
                let pivot = v
                    .iter()
                    .copied()
                    .max_by(|a, b| a.abs().total_cmp(&b.abs()))
                    .unwrap_or(1.0);
                if pivot < 0.0 {
                    v.iter_mut().for_each(|e| *e = -*e);
                }
                v
            })
            .collect();
        Ok(Self {
            mean,
            components,
            explained_variance: values[..n_components].iter().map(|v| v.max(0.0)).collect(),
        })
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn apply(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.ncols() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                actual: x.ncols(),
                context: "PCA input width",
            });
        }
        Ok(DMatrix::from_fn(x.nrows(), self.n_components(), |r, k| {
            self.components[k]
                .iter()
                .enumerate()
                .map(|(c, w)| (x[(r, c)] - self.mean[c]) * w)
                .sum()
        }))
    }

    /// Maps projected rows back to the input space.
    pub fn inverse(&self, z: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(z.nrows(), self.mean.len(), |r, c| {
            self.mean[c]
                + self
                    .components
                    .iter()
                    .enumerate()
                    .map(|(k, comp)| z[(r, k)] * comp[c])
                    .sum::<f64>()
        })
    }
}
