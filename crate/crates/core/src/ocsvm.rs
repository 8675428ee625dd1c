//! One-class SVM on a precomputed kernel.
//!
//! The dual solved here is
//!
//! ```text
//! min_α ½ αᵀ G α   s.t.  0 <= α_i <= 1/(νN),  Σ α_i = 1
//! ```
//!
//! with pairwise (SMO) updates on the maximal KKT-violating pair. Decision
//! values are `Σ_i α_i k(x, x_i) - ρ`; negative means anomalous.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::data::Label;
use crate::error::{Error, Result};
use crate::kernels::{FittedKernel, KernelMatrix, KernelMeta, KernelMethod, KernelSpec};
use crate::linalg::min_eigenvalue;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once the maximal KKT violation drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Gram matrices up to this size get a full eigenvalue check for
    /// indefiniteness; larger ones skip it.
    pub spectral_check_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 1_000_000,
            spectral_check_limit: 512,
        }
    }
}

const MARGIN_SLACK: f64 = 1e-8;
const MIN_CURVATURE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcSvmModel {
    pub nu: f64,
    pub rho: f64,
    pub alphas: Vec<f64>,
    pub support_indices: Vec<usize>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Smallest Gram eigenvalue, when it was checked.
    pub min_eigenvalue: Option<f64>,
    /// Set when the checked spectrum dips below `-1e-6`.
    pub indefinite: Option<bool>,
    pub kernel_method: Option<KernelMethod>,
    pub kernel_meta: Option<KernelMeta>,
}

impl OcSvmModel {
    pub fn upper_bound(&self) -> f64 {
        1.0 / (self.nu * self.alphas.len() as f64)
    }

    pub fn n_train(&self) -> usize {
        self.alphas.len()
    }
}

pub fn solve_dual(gram: &KernelMatrix, nu: f64) -> Result<OcSvmModel> {
    let mut model = solve_dual_with(&gram.values, nu, SolverOptions::default())?;
    model.kernel_method = Some(gram.method);
    model.kernel_meta = Some(gram.meta.clone());
    Ok(model)
}

pub fn solve_dual_with(g: &DMatrix<f64>, nu: f64, opts: SolverOptions) -> Result<OcSvmModel> {
    let n = g.nrows();
    if n == 0 || g.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: g.ncols(),
            context: "one-class SVM needs a non-empty square Gram matrix",
        });
    }
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::InvalidParameter(format!("nu must lie in (0, 1], got {nu}")));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Gram matrix"));
    }
    let c = 1.0 / (nu * n as f64);

    // Fill the box greedily in index order until the simplex is exhausted.
    let mut alphas = vec![0.0; n];
    let mut remaining = 1.0;
    for a in alphas.iter_mut() {
        if remaining <= 0.0 {
            break;
        }
        *a = c.min(remaining);
        remaining -= *a;
    }

    let mut grad: Vec<f64> = (0..n)
        .map(|k| (0..n).map(|l| g[(k, l)] * alphas[l]).sum())
        .collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        // i: may grow (α_i < C), smallest gradient; j: may shrink (α_j > 0), largest.
        let mut up: Option<usize> = None;
        let mut down: Option<usize> = None;
        for k in 0..n {
            if alphas[k] < c && up.is_none_or(|i| grad[k] < grad[i]) {
                up = Some(k);
            }
            if alphas[k] > 0.0 && down.is_none_or(|j| grad[k] > grad[j]) {
                down = Some(k);
            }
        }
        let (Some(i), Some(j)) = (up, down) else {
            converged = true;
            break;
        };
        let gap = grad[j] - grad[i];
        if gap < opts.tol {
            converged = true;
            break;
        }
        let eta = (g[(i, i)] + g[(j, j)] - 2.0 * g[(i, j)]).max(MIN_CURVATURE);
        let room_i = c - alphas[i];
        let room_j = alphas[j];
        let mut step = gap / eta;
        if step >= room_i.min(room_j) {
            step = room_i.min(room_j);
            if room_i <= room_j {
                alphas[i] = c;
                alphas[j] -= step;
            } else {
                alphas[i] += step;
                alphas[j] = 0.0;
            }
        } else {
            alphas[i] += step;
            alphas[j] -= step;
        }
        let (col_i, col_j) = (g.column(i), g.column(j));
        for k in 0..n {
            grad[k] += step * (col_i[k] - col_j[k]);
        }
        iterations += 1;
    }
    if !converged {
        log::warn!("one-class SVM solver hit the iteration cap ({}) before reaching tolerance", opts.max_iter);
    }

    let rho = offset(&alphas, &grad, c);
    let objective = 0.5 * alphas.iter().zip(&grad).map(|(a, g)| a * g).sum::<f64>();
    let support_indices = (0..n).filter(|&k| alphas[k] > MARGIN_SLACK).collect();
    let min_eig = (n <= opts.spectral_check_limit).then(|| min_eigenvalue(g));
    let indefinite = min_eig.map(|e| e < -1e-6);
    if indefinite == Some(true) {
        log::debug!("Gram matrix is indefinite (min eigenvalue {:e})", min_eig.unwrap());
    }
    Ok(OcSvmModel {
        nu,
        rho,
        alphas,
        support_indices,
        objective,
        iterations,
        converged,
        min_eigenvalue: min_eig,
        indefinite,
        kernel_method: None,
        kernel_meta: None,
    })
}

/// Median gradient over margin support vectors, or the midpoint of the
/// feasible offset interval when every multiplier sits at a bound.
fn offset(alphas: &[f64], grad: &[f64], c: f64) -> f64 {
    let mut margin: Vec<f64> = alphas
        .iter()
        .zip(grad)
        .filter(|(&a, _)| a > MARGIN_SLACK && a < c - MARGIN_SLACK)
        .map(|(_, &g)| g)
        .collect();
    if !margin.is_empty() {
        margin.sort_by(f64::total_cmp);
        let m = margin.len();
        return if m % 2 == 1 {
            margin[m / 2]
        } else {
            0.5 * (margin[m / 2 - 1] + margin[m / 2])
        };
    }
    // α = 0 requires g >= ρ, α = C requires g <= ρ.
    let upper = alphas
        .iter()
        .zip(grad)
        .filter(|(&a, _)| a <= MARGIN_SLACK)
        .map(|(_, &g)| g)
        .fold(f64::INFINITY, f64::min);
    let lower = alphas
        .iter()
        .zip(grad)
        .filter(|(&a, _)| a > MARGIN_SLACK)
        .map(|(_, &g)| g)
        .fold(f64::NEG_INFINITY, f64::max);
    match (lower.is_finite(), upper.is_finite()) {
        (true, true) => 0.5 * (lower + upper),
        (true, false) => lower,
        (false, true) => upper,
        (false, false) => 0.0,
    }
}

/// `½ αᵀ G α`.
pub fn dual_objective(g: &DMatrix<f64>, alphas: &[f64]) -> f64 {
    let n = alphas.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += alphas[i] * g[(i, j)] * alphas[j];
        }
    }
    0.5 * total
}

/// `Σ_i α_i K(j, i)` without the offset. Ranking metrics give identical
/// results with or without `ρ`.
pub fn raw_scores(model: &OcSvmModel, k_cross: &KernelMatrix) -> Result<Vec<f64>> {
    if k_cross.ncols() != model.n_train() {
        return Err(Error::DimensionMismatch {
            expected: model.n_train(),
            actual: k_cross.ncols(),
            context: "prediction kernel columns vs training size",
        });
    }
    Ok((0..k_cross.nrows())
        .map(|j| {
            model
                .support_indices
                .iter()
                .map(|&i| model.alphas[i] * k_cross.values[(j, i)])
                .sum()
        })
        .collect())
}

/// `Σ_i α_i K(j, i) - ρ`.
pub fn decision_scores(model: &OcSvmModel, k_cross: &KernelMatrix) -> Result<Vec<f64>> {
    Ok(raw_scores(model, k_cross)?.into_iter().map(|s| s - model.rho).collect())
}

/// Negative scores are anomalous; zero counts as normal.
pub fn predict(scores: &[f64]) -> Vec<Label> {
    scores
        .iter()
        .map(|&s| if s < 0.0 { Label::Anomaly } else { Label::Normal })
        .collect()
}

/// A trained one-class SVM together with the kernel bound to its training
/// data.
#[derive(Debug, Clone)]
pub struct OcSvmDetector {
    pub kernel: FittedKernel,
    pub model: OcSvmModel,
}

impl OcSvmDetector {
    pub fn fit(spec: &KernelSpec, train: &DMatrix<f64>, nu: f64, seed: u64) -> Result<Self> {
        let kernel = spec.fit(train, seed)?;
        let model = solve_dual(kernel.gram(), nu)?;
        Ok(Self { kernel, model })
    }

    /// Prediction kernel plus decision scores for `test`.
    pub fn score(&self, test: &DMatrix<f64>) -> Result<(KernelMatrix, Vec<f64>)> {
        let k = self.kernel.cross(test)?;
        let scores = decision_scores(&self.model, &k)?;
        Ok((k, scores))
    }

    pub fn decision_scores(&self, test: &DMatrix<f64>) -> Result<Vec<f64>> {
        Ok(self.score(test)?.1)
    }
}
