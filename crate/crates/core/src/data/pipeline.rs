use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{PcaModel, ScalerModel};
use crate::error::Result;

/// Preprocessing variant, chosen by kernel family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineKind {
    /// Scale, PCA.
    Rbf,
    /// Scale, PCA, multiply by 0.1 (data become rotation angles).
    Inversion,
    /// Scale, PCA, scale again, multiply by `1/sqrt(M)`.
    Randomized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Scale(ScalerModel),
    Pca(PcaModel),
    Multiply(f64),
}

impl Step {
    fn apply(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        match self {
            Step::Scale(s) => s.apply(x),
            Step::Pca(p) => p.apply(x),
            Step::Multiply(f) => Ok(x * *f),
        }
    }
}

/// Transforms fitted on training rows only.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FittedPipeline {
    pub steps: Vec<Step>,
}

impl FittedPipeline {
    pub fn apply(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let mut out = x.clone();
        for step in &self.steps {
            out = step.apply(&out)?;
        }
        Ok(out)
    }

    fn push_fitted(&mut self, step: Step, train: &mut DMatrix<f64>) -> Result<()> {
        *train = step.apply(train)?;
        self.steps.push(step);
        Ok(())
    }
}

/// Fits the pipeline for `kind` on `x_train` and applies it to both sets.
///
/// Real data go through scaling and PCA down to `m` features. With
/// `synthetic` set, only the randomized-measurement variant preprocesses
/// (scale, then `1/sqrt(M)`), and the other variants pass data through.
pub fn pipeline(
    kind: PipelineKind,
    x_train: &DMatrix<f64>,
    x_test: &DMatrix<f64>,
    m: usize,
    synthetic: bool,
) -> Result<(DMatrix<f64>, DMatrix<f64>, FittedPipeline)> {
    let mut fitted = FittedPipeline::default();
    let mut train = x_train.clone();
    if synthetic {
        if kind == PipelineKind::Randomized {
            fitted.push_fitted(Step::Scale(ScalerModel::fit(&train)?), &mut train)?;
            let width = train.ncols() as f64;
            fitted.push_fitted(Step::Multiply(1.0 / width.sqrt()), &mut train)?;
        }
    } else {
        fitted.push_fitted(Step::Scale(ScalerModel::fit(&train)?), &mut train)?;
        fitted.push_fitted(Step::Pca(PcaModel::fit(&train, m)?), &mut train)?;
        match kind {
            PipelineKind::Rbf => {}
            PipelineKind::Inversion => fitted.push_fitted(Step::Multiply(0.1), &mut train)?,
            PipelineKind::Randomized => {
                fitted.push_fitted(Step::Scale(ScalerModel::fit(&train)?), &mut train)?;
                let width = train.ncols() as f64;
                fitted.push_fitted(Step::Multiply(1.0 / width.sqrt()), &mut train)?;
            }
        }
    }
    let test = fitted.apply(x_test)?;
    Ok((train, test, fitted))
}
