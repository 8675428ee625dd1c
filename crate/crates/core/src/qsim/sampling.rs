use std::collections::BTreeMap;

use rand::Rng;

use super::state::Statevector;
use crate::error::{Error, Result};

/// Outcome counts keyed by basis index.
pub type Counts = BTreeMap<usize, u64>;

/// Renders basis index `index` of an `n_qubits` register, most-significant
/// qubit first.
pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .rev()
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Draws `shots` outcomes from `probs` (one uniform draw per shot, inverse
/// CDF lookup) and returns dense per-outcome counts.
pub fn sample_counts<R: Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let total = acc;
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let k = cdf.partition_point(|&c| c <= u).min(last_nonzero);
        counts[k] += 1;
    }
    counts
}

/// Fraction of `shots` Bernoulli trials that succeed with probability `p`.
pub fn sample_frequency<R: Rng + ?Sized>(p: f64, shots: u64, rng: &mut R) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let hits = (0..shots).filter(|_| rng.random::<f64>() < p).count();
    hits as f64 / shots as f64
}

/// Measures `state` in the computational basis `shots` times.
pub fn sample_bitstrings<R: Rng + ?Sized>(state: &Statevector, shots: u64, rng: &mut R) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be >= 1".into()));
    }
    let counts = sample_counts(&state.probabilities(), shots, rng);
    Ok(counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect())
}
