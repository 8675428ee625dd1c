//! Quantum-kernel one-class SVM anomaly detection.
//!
//! The crate bundles a small dense statevector simulator, five kernel
//! backends (RBF, exact fidelity, shot-sampled inversion and swap tests, and
//! randomized measurements with purity mitigation), a one-class SVM dual
//! solver working on precomputed Gram matrices, a variable-subsampling
//! ensemble, the preprocessing pipelines, imbalanced-data metrics and an
//! experiment harness for data-size and qubit-count sweeps.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod data;
pub mod ensemble;
pub mod error;
pub mod harness;
pub mod kernels;
pub mod linalg;
pub mod metrics;
pub mod ocsvm;
pub mod qsim;
pub mod rng;

pub use error::{Error, Result};
