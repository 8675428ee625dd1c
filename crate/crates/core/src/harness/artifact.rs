use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::run::Cell;
use crate::data::FittedPipeline;
use crate::ensemble::{self, EnsembleRecord, KernelCost, VsEnsemble};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::ocsvm::{OcSvmDetector, OcSvmModel};

/// A single detector or a subsampling ensemble.
#[derive(Debug, Clone)]
pub enum TrainedModel {
    Single(OcSvmDetector),
    Ensemble(VsEnsemble),
}

impl TrainedModel {
    /// Trains the model `cfg.method` describes on already preprocessed rows.
    pub fn fit(cfg: &ExperimentConfig, spec: &KernelSpec, train: &DMatrix<f64>, seed: u64) -> Result<Self> {
        match cfg.method.combine() {
            None => Ok(TrainedModel::Single(OcSvmDetector::fit(spec, train, cfg.nu, seed)?)),
            Some(combine) => {
                let n = train.nrows();
                let plan = match cfg.components {
                    Some(c) => ensemble::plan_with_components(n, c, cfg.n_min, cfg.n_max, seed)?,
                    None => ensemble::plan(n, cfg.n_min, cfg.n_max, seed)?,
                };
                Ok(TrainedModel::Ensemble(ensemble::fit(&plan, train, spec, cfg.nu, combine, seed)?))
            }
        }
    }

    /// Decision scores (negative means anomalous) and the kernel work spent.
    pub fn score(&self, test: &DMatrix<f64>) -> Result<(Vec<f64>, KernelCost)> {
        match self {
            TrainedModel::Single(d) => {
                let (k, scores) = d.score(test)?;
                Ok((
                    scores,
                    KernelCost {
                        entries: k.entries(),
                        evaluations: k.meta.evaluations,
                        total_shots: k.meta.total_shots,
                    },
                ))
            }
            TrainedModel::Ensemble(e) => {
                let s = e.score(test)?;
                Ok((s.combined, s.cost))
            }
        }
    }

    pub fn train_cost(&self) -> KernelCost {
        match self {
            TrainedModel::Single(d) => {
                let g = d.kernel.gram();
                KernelCost {
                    entries: g.entries(),
                    evaluations: g.meta.evaluations,
                    total_shots: g.meta.total_shots,
                }
            }
            TrainedModel::Ensemble(e) => e.train_cost,
        }
    }

    pub fn n_components(&self) -> usize {
        match self {
            TrainedModel::Single(_) => 1,
            TrainedModel::Ensemble(e) => e.components.len(),
        }
    }
}

/// Everything needed to score new data with a trained model. Kernels are
/// recomputed on load, so the training rows are stored after
/// preprocessing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedArtifact {
    pub config: ExperimentConfig,
    pub cell: Cell,
    pub pipeline: FittedPipeline,
    pub kernel: KernelSpec,
    pub train_features: Vec<Vec<f64>>,
    pub model: Option<OcSvmModel>,
    pub ensemble: Option<EnsembleRecord>,
}

impl TrainedArtifact {
    pub fn new(
        config: &ExperimentConfig,
        cell: Cell,
        pipeline: FittedPipeline,
        kernel: KernelSpec,
        train: &DMatrix<f64>,
        model: &TrainedModel,
    ) -> Self {
        let (single, ensemble) = match model {
            TrainedModel::Single(d) => (Some(d.model.clone()), None),
            TrainedModel::Ensemble(e) => (None, Some(e.record())),
        };
        Self {
            config: config.clone(),
            cell,
            pipeline,
            kernel,
            train_features: train.row_iter().map(|r| r.iter().copied().collect()).collect(),
            model: single,
            ensemble,
        }
    }

    pub fn train_matrix(&self) -> Result<DMatrix<f64>> {
        let n = self.train_features.len();
        let m = self.train_features.first().map_or(0, Vec::len);
        if self.train_features.iter().any(|r| r.len() != m) {
            return Err(Error::Format("ragged training rows in artifact".into()));
        }
        Ok(DMatrix::from_fn(n, m, |i, j| self.train_features[i][j]))
    }

    pub fn restore(&self) -> Result<TrainedModel> {
        let train = self.train_matrix()?;
        match (&self.model, &self.ensemble) {
            (Some(model), None) => Ok(TrainedModel::Single(OcSvmDetector {
                kernel: self.kernel.fit(&train, self.cell.seed)?,
                model: model.clone(),
            })),
            (None, Some(rec)) => Ok(TrainedModel::Ensemble(rec.restore(&train, self.cell.seed)?)),
            _ => Err(Error::Format("artifact must hold exactly one of model or ensemble".into())),
        }
    }
}
