//! Dense statevector simulator.
//!
//! Qubit `q` is bit `q` of the amplitude index (little-endian). Bitstrings in
//! text output are printed most-significant qubit first.

mod feature_map;
mod gates;
mod haar;
mod sampling;
mod state;

pub use feature_map::{apply_feature_map, apply_inverse_feature_map, FeatureMapConfig};
pub use gates::{apply_gate, Gate};
pub use haar::{apply_local_unitary, sample_haar_local, sample_haar_su2, LocalUnitarySetting, Mat2};
pub use sampling::{bitstring, sample_bitstrings, sample_counts, sample_frequency, Counts};
pub use state::{fidelity, zero_state, Statevector, MAX_QUBITS};
