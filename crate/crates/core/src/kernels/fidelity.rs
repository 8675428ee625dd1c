use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_same_features, evaluation_count, fill_matrix, row_vec, KernelMatrix, KernelMeta, KernelMethod};
use crate::error::{Error, Result};
use crate::qsim::{apply_feature_map, fidelity, sample_frequency, FeatureMapConfig, Gate, Statevector};
use crate::rng::{stream, tag};

/// Feature-map states for every row of `x`.
pub fn feature_states(x: &DMatrix<f64>, fmap: &FeatureMapConfig) -> Result<Vec<Statevector>> {
    if x.ncols() != fmap.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: fmap.n_qubits,
            actual: x.ncols(),
            context: "feature dimension vs qubit count",
        });
    }
    (0..x.nrows())
        .into_par_iter()
        .map(|i| apply_feature_map(fmap, &row_vec(x, i)))
        .collect()
}

fn states_for(
    x: &DMatrix<f64>,
    y: &DMatrix<f64>,
    fmap: &FeatureMapConfig,
) -> Result<(bool, Vec<Statevector>, Option<Vec<Statevector>>)> {
    check_same_features(x, y)?;
    let symmetric = std::ptr::eq(x, y);
    let left = feature_states(x, fmap)?;
    let right = if symmetric { None } else { Some(feature_states(y, fmap)?) };
    Ok((symmetric, left, right))
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be >= 1".into()));
    }
    Ok(())
}

/// Exact fidelity kernel `|<Φ(y_j)|Φ(x_i)>|^2`. Passing the same matrix for
/// `x` and `y` evaluates only the upper triangle.
pub fn fidelity_exact_matrix(x: &DMatrix<f64>, y: &DMatrix<f64>, fmap: &FeatureMapConfig) -> Result<KernelMatrix> {
    let (symmetric, left, right) = states_for(x, y, fmap)?;
    let right = right.as_ref().unwrap_or(&left);
    let values = fill_matrix(left.len(), right.len(), symmetric, |i, j| fidelity(&left[i], &right[j]))?;
    Ok(KernelMatrix::new(
        values,
        KernelMethod::FidelityExact,
        KernelMeta {
            evaluations: evaluation_count(left.len(), right.len(), symmetric),
            symmetric,
            ..Default::default()
        },
    ))
}

/// Shot-sampled inversion test.
///
/// The circuit `U_Φ(y)^† U_Φ(x)|0>` ends in the all-zeros outcome with
/// probability `|<Φ(y)|Φ(x)>|^2`; each of the `shots` measurements is a
/// Bernoulli trial on that event. Every entry draws from its own stream keyed
/// by `(seed, i, j)`.
pub fn inversion_test_matrix(
    x: &DMatrix<f64>,
    y: &DMatrix<f64>,
    fmap: &FeatureMapConfig,
    shots: u64,
    seed: u64,
) -> Result<KernelMatrix> {
    check_shots(shots)?;
    let (symmetric, left, right) = states_for(x, y, fmap)?;
    let right = right.as_ref().unwrap_or(&left);
    let phase = if symmetric { tag::GRAM } else { tag::CROSS };
    let values = fill_matrix(left.len(), right.len(), symmetric, |i, j| {
        let p0 = fidelity(&left[i], &right[j])?;
        let mut rng = stream(seed, &[tag::INVERSION, phase, i as u64, j as u64]);
        Ok(sample_frequency(p0, shots, &mut rng))
    })?;
    let evaluations = evaluation_count(left.len(), right.len(), symmetric);
    Ok(KernelMatrix::new(
        values,
        KernelMethod::Inversion,
        KernelMeta {
            shots: Some(shots),
            seed: Some(seed),
            evaluations,
            total_shots: evaluations * shots,
            symmetric,
            ..Default::default()
        },
    ))
}

/// How the swap-test ancilla statistics are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapMode {
    /// `P(0) = (1 + F) / 2` from the exact overlap.
    #[default]
    Analytic,
    /// Simulates the `2d + 1` qubit circuit (d <= 4).
    FullCircuit,
}

const MAX_FULL_SWAP_QUBITS: usize = 4;

/// Ancilla-zero probability of the swap test, simulated on the full
/// register: qubits `0..d` hold `a`, `d..2d` hold `b`, qubit `2d` is the
/// ancilla.
pub fn swap_test_ancilla_zero_probability(a: &Statevector, b: &Statevector) -> Result<f64> {
    a.check_same_size(b)?;
    let d = a.n_qubits();
    if d > MAX_FULL_SWAP_QUBITS {
        return Err(Error::Capacity(format!(
            "full swap-test circuit supports up to {MAX_FULL_SWAP_QUBITS} qubits per register, got {d}"
        )));
    }
    let dim = 1usize << d;
    let mask = dim - 1;
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 1 << (2 * d + 1)];
    for (hi, bv) in b.amplitudes().iter().enumerate() {
        for (lo, av) in a.amplitudes().iter().enumerate() {
            amps[(hi << d) | lo] = av * bv;
        }
    }
    let mut state = Statevector::from_amplitudes(amps)?;
    let ancilla = 2 * d;
    state.apply(Gate::H(ancilla))?;
    // Controlled swap of the two registers.
    let src = state.amplitudes().to_vec();
    let abit = 1usize << ancilla;
    for (idx, amp) in state.amplitudes_mut().iter_mut().enumerate() {
        if idx & abit != 0 {
            let lo = idx & mask;
            let hi = (idx >> d) & mask;
            *amp = src[abit | (lo << d) | hi];
        }
    }
    state.apply(Gate::H(ancilla))?;
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(idx, _)| idx & abit == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum())
}

/// Shot-sampled swap test: `2 p̂_0 - 1`, clamped to `[0, 1]`.
pub fn swap_test_matrix(
    x: &DMatrix<f64>,
    y: &DMatrix<f64>,
    fmap: &FeatureMapConfig,
    shots: u64,
    seed: u64,
    mode: SwapMode,
) -> Result<KernelMatrix> {
    check_shots(shots)?;
    let (symmetric, left, right) = states_for(x, y, fmap)?;
    let right = right.as_ref().unwrap_or(&left);
    let phase = if symmetric { tag::GRAM } else { tag::CROSS };
    let values = fill_matrix(left.len(), right.len(), symmetric, |i, j| {
        let p0 = match mode {
            SwapMode::Analytic => 0.5 * (1.0 + fidelity(&left[i], &right[j])?),
            SwapMode::FullCircuit => swap_test_ancilla_zero_probability(&left[i], &right[j])?,
        };
        let mut rng = stream(seed, &[tag::SWAP, phase, i as u64, j as u64]);
        let freq = sample_frequency(p0, shots, &mut rng);
        Ok((2.0 * freq - 1.0).clamp(0.0, 1.0))
    })?;
    let evaluations = evaluation_count(left.len(), right.len(), symmetric);
    Ok(KernelMatrix::new(
        values,
        KernelMethod::Swap,
        KernelMeta {
            shots: Some(shots),
            seed: Some(seed),
            evaluations,
            total_shots: evaluations * shots,
            symmetric,
            ..Default::default()
        },
    ))
}
