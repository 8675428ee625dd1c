//! Datasets, splits and the preprocessing pipelines.

mod creditcard;
mod pca;
mod pipeline;
mod scaler;
mod split;
mod synthetic;

pub use creditcard::{load_creditcard, write_creditcard_fixture, CREDITCARD_ANOMALIES, CREDITCARD_ROWS};
pub use pca::PcaModel;
pub use pipeline::{pipeline, FittedPipeline, PipelineKind, Step};
pub use scaler::ScalerModel;
pub use split::{make_split, SplitManifest, TEST_ANOMALIES, TEST_NORMALS};
pub use synthetic::{gen_synthetic, SYNTHETIC_TEST_ANOMALIES, SYNTHETIC_TEST_NORMALS};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Normal,
    Anomaly,
}

impl Label {
    /// `+1` for normal, `-1` for anomalous.
    pub fn sign(self) -> i8 {
        match self {
            Label::Normal => 1,
            Label::Anomaly => -1,
        }
    }

    pub fn is_anomaly(self) -> bool {
        self == Label::Anomaly
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: DMatrix<f64>,
    pub labels: Option<Vec<Label>>,
    pub name: String,
}

impl Dataset {
    pub fn new(features: DMatrix<f64>, labels: Option<Vec<Label>>, name: impl Into<String>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != features.nrows() {
                return Err(Error::DimensionMismatch {
                    expected: features.nrows(),
                    actual: l.len(),
                    context: "label count vs rows",
                });
            }
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("dataset features"));
        }
        Ok(Self {
            features,
            labels,
            name: name.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.features.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn anomaly_count(&self) -> usize {
        self.labels
            .as_ref()
            .map_or(0, |l| l.iter().filter(|l| l.is_anomaly()).count())
    }

    /// Rows `idx` in the given order.
    pub fn select(&self, idx: &[usize]) -> Dataset {
        Dataset {
            features: select_rows(&self.features, idx),
            labels: self.labels.as_ref().map(|l| idx.iter().map(|&i| l[i]).collect()),
            name: self.name.clone(),
        }
    }
}

pub fn select_rows(x: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), x.ncols(), |r, c| x[(idx[r], c)])
}

/// A train/test partition. Training rows are all normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Dataset,
    pub test: Dataset,
    pub seed: u64,
    /// Source-row indices, when the split was drawn from a larger dataset.
    pub manifest: Option<SplitManifest>,
}
