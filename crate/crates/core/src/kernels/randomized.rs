//! Randomized-measurement kernel.
//!
//! Every data point is measured in `r` shared random local bases. With
//! `P_u^{(i)}(s)` the outcome distribution of point `i` under setting `u`,
//! the overlap is estimated as
//!
//! ```text
//! K(i, j) = 2^d / r * Σ_u Σ_{s,s'} (-2)^{-Hamming(s, s')} P_u^{(i)}(s) P_u^{(j)}(s')
//! ```
//!
//! The weight matrix is the d-fold tensor power of `[[1, -1/2], [-1/2, 1]]`,
//! so it is applied qubit by qubit instead of being materialised.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{evaluation_count, row_vec, KernelMatrix, KernelMeta, KernelMethod};
use crate::error::{Error, Result};
use crate::qsim::{apply_feature_map, apply_local_unitary, sample_counts, sample_haar_local, FeatureMapConfig, LocalUnitarySetting};
use crate::rng::{stream, tag};

/// Classical post-processing touches `2^d` outcomes per setting.
pub const MAX_RM_QUBITS: usize = 12;

/// Per-point, per-setting outcome distributions.
#[derive(Debug, Clone)]
pub struct ProbabilityTable {
    n_points: usize,
    n_qubits: usize,
    settings: Arc<Vec<LocalUnitarySetting>>,
    /// Flat `[point][setting][outcome]`.
    probs: Vec<f64>,
    shots: Option<u64>,
    purity: Option<Vec<f64>>,
}

impl ProbabilityTable {
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_settings(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &Arc<Vec<LocalUnitarySetting>> {
        &self.settings
    }

    /// Shots per setting, `None` for exact probabilities.
    pub fn shots(&self) -> Option<u64> {
        self.shots
    }

    pub fn purity(&self) -> Option<&[f64]> {
        self.purity.as_deref()
    }

    fn outcomes(&self) -> usize {
        1 << self.n_qubits
    }

    /// Outcome distribution of `point` under setting `setting`.
    pub fn probs(&self, point: usize, setting: usize) -> &[f64] {
        let d = self.outcomes();
        let start = (point * self.n_settings() + setting) * d;
        &self.probs[start..start + d]
    }

    fn point_block(&self, point: usize) -> &[f64] {
        let len = self.n_settings() * self.outcomes();
        &self.probs[point * len..(point + 1) * len]
    }

    fn same_protocol(&self, other: &ProbabilityTable) -> bool {
        self.n_qubits == other.n_qubits
            && (Arc::ptr_eq(&self.settings, &other.settings) || self.settings == other.settings)
    }
}

/// Draws `r` local Haar settings from the stream keyed by `seed`.
pub fn sample_settings(n_qubits: usize, r: usize, seed: u64) -> Result<Arc<Vec<LocalUnitarySetting>>> {
    let mut rng = stream(seed, &[tag::RM_SETTINGS]);
    Ok(Arc::new(
        (0..r).map(|_| sample_haar_local(n_qubits, &mut rng)).collect::<Result<Vec<_>>>()?,
    ))
}

/// Samples `r` settings, then measures every row of `x` under each of them.
/// With `exact_probabilities` the Born probabilities are recorded instead of
/// shot frequencies.
pub fn rm_profile(
    x: &DMatrix<f64>,
    fmap: &FeatureMapConfig,
    r: usize,
    shots: u64,
    seed: u64,
    exact_probabilities: bool,
) -> Result<ProbabilityTable> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 settings, got {r}")));
    }
    check_rm_capacity(fmap.n_qubits)?;
    let settings = sample_settings(fmap.n_qubits, r, seed)?;
    rm_profile_with_settings(x, fmap, settings, shots, seed, exact_probabilities)
}

fn check_rm_capacity(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_RM_QUBITS {
        return Err(Error::Capacity(format!(
            "randomized measurements support up to {MAX_RM_QUBITS} qubits, got {n_qubits}"
        )));
    }
    Ok(())
}

/// Measures every row of `x` under a given list of settings. Shot streams
/// are keyed by `(seed, point, setting)`.
pub fn rm_profile_with_settings(
    x: &DMatrix<f64>,
    fmap: &FeatureMapConfig,
    settings: Arc<Vec<LocalUnitarySetting>>,
    shots: u64,
    seed: u64,
    exact_probabilities: bool,
) -> Result<ProbabilityTable> {
    check_rm_capacity(fmap.n_qubits)?;
    if x.ncols() != fmap.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: fmap.n_qubits,
            actual: x.ncols(),
            context: "feature dimension vs qubit count",
        });
    }
    if !exact_probabilities && shots == 0 {
        return Err(Error::InvalidParameter("shots must be >= 1".into()));
    }
    if settings.iter().any(|s| s.n_qubits() != fmap.n_qubits) {
        return Err(Error::SettingsMismatch);
    }
    let blocks: Vec<Vec<f64>> = (0..x.nrows())
        .into_par_iter()
        .map(|i| {
            let state = apply_feature_map(fmap, &row_vec(x, i))?;
            let mut block = Vec::with_capacity(settings.len() << fmap.n_qubits);
            for (u, setting) in settings.iter().enumerate() {
                let rotated = apply_local_unitary(state.clone(), setting)?;
                let probs = rotated.probabilities();
                if exact_probabilities {
                    block.extend(probs);
                } else {
                    let mut rng = stream(seed, &[tag::RM_SHOTS, i as u64, u as u64]);
                    let counts = sample_counts(&probs, shots, &mut rng);
                    block.extend(counts.iter().map(|&c| c as f64 / shots as f64));
                }
            }
            Ok(block)
        })
        .collect::<Result<_>>()?;
    Ok(ProbabilityTable {
        n_points: x.nrows(),
        n_qubits: fmap.n_qubits,
        settings,
        probs: blocks.concat(),
        shots: (!exact_probabilities).then_some(shots),
        purity: None,
    })
}

/// The `2^d x 2^d` weight matrix `W[s, s'] = (-2)^{-Hamming(s, s')}`.
pub fn outcome_weights(n_qubits: usize) -> DMatrix<f64> {
    let dim = 1usize << n_qubits;
    DMatrix::from_fn(dim, dim, |s, t| (-0.5f64).powi((s ^ t).count_ones() as i32))
}

/// In-place product with the weight matrix, one qubit at a time.
fn apply_weights(v: &mut [f64], n_qubits: usize) {
    for q in 0..n_qubits {
        let bit = 1usize << q;
        for i in 0..v.len() {
            if i & bit == 0 {
                let (a, b) = (v[i], v[i | bit]);
                v[i] = a - 0.5 * b;
                v[i | bit] = b - 0.5 * a;
            }
        }
    }
}

fn weighted_blocks(p: &ProbabilityTable) -> Vec<Vec<f64>> {
    (0..p.n_points)
        .into_par_iter()
        .map(|i| {
            let mut block = p.point_block(i).to_vec();
            for chunk in block.chunks_mut(p.outcomes()) {
                apply_weights(chunk, p.n_qubits);
            }
            block
        })
        .collect()
}

fn entry(weighted: &[f64], other: &[f64], scale: f64) -> f64 {
    scale * weighted.iter().zip(other).map(|(a, b)| a * b).sum::<f64>()
}

fn scale_of(p: &ProbabilityTable) -> f64 {
    (1u64 << p.n_qubits) as f64 / p.n_settings() as f64
}

/// Overlap estimates between every point of `p` (rows) and `q` (columns).
pub fn rm_kernel(p: &ProbabilityTable, q: &ProbabilityTable) -> Result<KernelMatrix> {
    if !p.same_protocol(q) {
        return Err(Error::SettingsMismatch);
    }
    let symmetric = std::ptr::eq(p, q);
    let scale = scale_of(p);
    let weighted = weighted_blocks(p);
    let rows: Vec<Vec<f64>> = (0..p.n_points)
        .into_par_iter()
        .map(|i| (0..q.n_points).map(|j| entry(&weighted[i], q.point_block(j), scale)).collect())
        .collect();
    let values = DMatrix::from_fn(p.n_points, q.n_points, |i, j| rows[i][j]);
    let total_shots = match (p.shots, q.shots) {
        (Some(sp), Some(sq)) => {
            let points = if symmetric { p.n_points } else { p.n_points + q.n_points };
            (points * p.n_settings()) as u64 * sp.max(sq)
        }
        _ => 0,
    };
    Ok(KernelMatrix::new(
        values,
        KernelMethod::Randomized,
        KernelMeta {
            shots: p.shots,
            settings: Some(p.n_settings()),
            evaluations: evaluation_count(p.n_points, q.n_points, symmetric),
            total_shots,
            symmetric,
            ..Default::default()
        },
    ))
}

/// Fills the purity field with each point's self-overlap estimate, which is
/// bit-identical to the diagonal of `rm_kernel(p, p)`. Finite-shot purities
/// are not clamped and may exceed one.
pub fn estimate_purities(p: &ProbabilityTable) -> ProbabilityTable {
    let scale = scale_of(p);
    let weighted = weighted_blocks(p);
    let purity = (0..p.n_points)
        .map(|i| entry(&weighted[i], p.point_block(i), scale))
        .collect();
    ProbabilityTable {
        purity: Some(purity),
        ..p.clone()
    }
}

/// `K(i, j) / sqrt(purity_left_i * purity_right_j)`.
pub fn mitigate(k: &KernelMatrix, purities_left: &[f64], purities_right: &[f64]) -> Result<KernelMatrix> {
    if purities_left.len() != k.nrows() {
        return Err(Error::DimensionMismatch {
            expected: k.nrows(),
            actual: purities_left.len(),
            context: "left purities vs kernel rows",
        });
    }
    if purities_right.len() != k.ncols() {
        return Err(Error::DimensionMismatch {
            expected: k.ncols(),
            actual: purities_right.len(),
            context: "right purities vs kernel columns",
        });
    }
    if let Some(&bad) = purities_left.iter().chain(purities_right).find(|&&p| !(p > 0.0)) {
        return Err(Error::Mitigation(bad));
    }
    let values = DMatrix::from_fn(k.nrows(), k.ncols(), |i, j| {
        k.values[(i, j)] / (purities_left[i] * purities_right[j]).sqrt()
    });
    Ok(KernelMatrix::new(values, KernelMethod::RandomizedMitigated, k.meta.clone()))
}

/// Statistical error scale `1 / (s sqrt(r))` of a fidelity estimate.
pub fn rm_expected_error(shots: u64, r: usize) -> f64 {
    1.0 / (shots as f64 * (r as f64).sqrt())
}
