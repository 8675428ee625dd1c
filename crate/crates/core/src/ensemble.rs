//! Variable-subsampling ensemble of one-class SVMs.
//!
//! Each component trains on a random subset whose size is drawn uniformly
//! from `[n_min, n_max]`. With a fixed ν the support-vector lower bound
//! `⌈ν n_k⌉` then differs per component. Prediction z-normalises each
//! component's decision values over the scored batch and combines them by
//! mean or maximum.

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{select_rows, Label};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::ocsvm::{OcSvmDetector, OcSvmModel};
use crate::rng::{derive_seed, stream, tag};

pub const DEFAULT_N_MIN: usize = 50;
pub const DEFAULT_N_MAX: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combine {
    Average,
    Maximum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VsPlan {
    pub n: usize,
    pub c: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub sizes: Vec<usize>,
    pub subsets: Vec<Vec<usize>>,
}

/// `max(1, ⌊n/100⌋)`.
pub fn scalable_component_count(n: usize) -> usize {
    (n / 100).max(1)
}

/// Plans `⌊n/100⌋` components (at least one).
pub fn plan(n: usize, n_min: usize, n_max: usize, seed: u64) -> Result<VsPlan> {
    plan_with_components(n, scalable_component_count(n), n_min, n_max, seed)
}

/// Plans an explicit number of components, e.g. the 100-component,
/// size-1000 regime of the original method.
pub fn plan_with_components(n: usize, c: usize, n_min: usize, n_max: usize, seed: u64) -> Result<VsPlan> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::Planning(format!("need 1 <= n_min <= n_max, got {n_min}..{n_max}")));
    }
    if n < n_max {
        return Err(Error::Planning(format!("training size {n} is below n_max = {n_max}")));
    }
    if c == 0 {
        return Err(Error::Planning("need at least one component".into()));
    }
    let mut rng = stream(seed, &[tag::VS_PLAN]);
    let sizes: Vec<usize> = (0..c).map(|_| rng.random_range(n_min..=n_max)).collect();
    let subsets = sizes
        .iter()
        .map(|&size| sample(&mut rng, n, size).into_vec())
        .collect();
    Ok(VsPlan {
        n,
        c,
        n_min,
        n_max,
        sizes,
        subsets,
    })
}

/// Kernel work spent by an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct KernelCost {
    /// Matrix entries over all component matrices.
    pub entries: u64,
    /// Distinct kernel evaluations (symmetric training matrices count each
    /// pair once).
    pub evaluations: u64,
    pub total_shots: u64,
}

#[derive(Debug, Clone)]
pub struct VsComponent {
    pub subset: Vec<usize>,
    pub detector: OcSvmDetector,
}

#[derive(Debug, Clone)]
pub struct VsEnsemble {
    pub plan: VsPlan,
    pub components: Vec<VsComponent>,
    pub combine: Combine,
    pub nu: f64,
    pub train_cost: KernelCost,
}

/// Trains one detector per planned subset. Component `k` seeds its kernel
/// with `(seed, k)`.
pub fn fit(
    plan: &VsPlan,
    x_train: &DMatrix<f64>,
    kernel: &KernelSpec,
    nu: f64,
    combine: Combine,
    seed: u64,
) -> Result<VsEnsemble> {
    if plan.n != x_train.nrows() {
        return Err(Error::Planning(format!(
            "plan covers {} rows, training set has {}",
            plan.n,
            x_train.nrows()
        )));
    }
    let components = plan
        .subsets
        .par_iter()
        .enumerate()
        .map(|(k, subset)| {
            let x = select_rows(x_train, subset);
            OcSvmDetector::fit(kernel, &x, nu, component_seed(seed, k))
                .map(|detector| VsComponent {
                    subset: subset.clone(),
                    detector,
                })
                .map_err(|e| Error::component(k, e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VsEnsemble {
        plan: plan.clone(),
        train_cost: training_cost(&components),
        components,
        combine,
        nu,
    })
}

/// Kernel seed of component `k`.
pub fn component_seed(seed: u64, k: usize) -> u64 {
    derive_seed(seed, &[tag::VS_COMPONENT, k as u64])
}

fn training_cost(components: &[VsComponent]) -> KernelCost {
    components.iter().fold(KernelCost::default(), |acc, c| {
        let g = c.detector.kernel.gram();
        KernelCost {
            entries: acc.entries + g.entries(),
            evaluations: acc.evaluations + g.meta.evaluations,
            total_shots: acc.total_shots + g.meta.total_shots,
        }
    })
}

/// Z-normalises `scores` over the batch (population standard deviation).
/// A constant batch maps to all zeros.
pub fn z_normalize(scores: &[f64]) -> Result<Vec<f64>> {
    let n = scores.len();
    if n < 2 {
        return Err(Error::Normalization(n));
    }
    let mean = scores.iter().sum::<f64>() / n as f64;
    let std = (scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n as f64).sqrt();
    if std < 1e-12 {
        return Ok(vec![0.0; n]);
    }
    Ok(scores.iter().map(|s| (s - mean) / std).collect())
}

/// Elementwise mean or max over component score vectors.
pub fn combine_scores(per_component: &[Vec<f64>], mode: Combine) -> Vec<f64> {
    let Some(first) = per_component.first() else {
        return Vec::new();
    };
    let c = per_component.len() as f64;
    (0..first.len())
        .map(|j| {
            let column = per_component.iter().map(|s| s[j]);
            match mode {
                Combine::Average => column.sum::<f64>() / c,
                Combine::Maximum => column.fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect()
}

/// Result of scoring a batch.
#[derive(Debug, Clone)]
pub struct VsScores {
    pub combined: Vec<f64>,
    /// Normalised per-component scores.
    pub components: Vec<Vec<f64>>,
    pub cost: KernelCost,
}

impl VsEnsemble {
    pub fn score(&self, x_test: &DMatrix<f64>) -> Result<VsScores> {
        if x_test.nrows() < 2 {
            return Err(Error::Normalization(x_test.nrows()));
        }
        let results = self
            .components
            .par_iter()
            .enumerate()
            .map(|(k, comp)| {
                let (kmat, raw) = comp.detector.score(x_test).map_err(|e| Error::component(k, e))?;
                Ok((z_normalize(&raw)?, kmat.entries(), kmat.meta.evaluations, kmat.meta.total_shots))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut cost = KernelCost::default();
        let mut components = Vec::with_capacity(results.len());
        for (scores, entries, evaluations, shots) in results {
            cost.entries += entries;
            cost.evaluations += evaluations;
            cost.total_shots += shots;
            components.push(scores);
        }
        Ok(VsScores {
            combined: combine_scores(&components, self.combine),
            components,
            cost,
        })
    }

    pub fn predict(scores: &[f64]) -> Vec<Label> {
        crate::ocsvm::predict(scores)
    }

    pub fn record(&self) -> EnsembleRecord {
        EnsembleRecord {
            plan: self.plan.clone(),
            combine: self.combine,
            nu: self.nu,
            kernel: self.components.first().map(|c| c.detector.kernel.spec().clone()),
            components: self.components.iter().map(|c| c.detector.model.clone()).collect(),
        }
    }
}

impl EnsembleRecord {
    /// Rebuilds the ensemble from stored models. Component kernels are
    /// recomputed from `x_train` and `seed`, the seed the ensemble was
    /// trained with.
    pub fn restore(&self, x_train: &DMatrix<f64>, seed: u64) -> Result<VsEnsemble> {
        let kernel = self
            .kernel
            .as_ref()
            .ok_or_else(|| Error::Format("ensemble record has no kernel".into()))?;
        if self.components.len() != self.plan.subsets.len() || self.plan.n != x_train.nrows() {
            return Err(Error::Format("ensemble record does not match its plan".into()));
        }
        let components = self
            .plan
            .subsets
            .par_iter()
            .zip(&self.components)
            .enumerate()
            .map(|(k, (subset, model))| {
                let fitted = kernel
                    .fit(&select_rows(x_train, subset), component_seed(seed, k))
                    .map_err(|e| Error::component(k, e))?;
                Ok(VsComponent {
                    subset: subset.clone(),
                    detector: OcSvmDetector {
                        kernel: fitted,
                        model: model.clone(),
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VsEnsemble {
            plan: self.plan.clone(),
            train_cost: training_cost(&components),
            components,
            combine: self.combine,
            nu: self.nu,
        })
    }
}

/// Serialisable view of a trained ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub plan: VsPlan,
    pub combine: Combine,
    pub nu: f64,
    pub kernel: Option<KernelSpec>,
    pub components: Vec<OcSvmModel>,
}
