use serde::{Deserialize, Serialize};

use super::gates::Gate;
use super::state::Statevector;
use crate::error::{Error, Result};

/// IQP-like feature map: `block_reps` repetitions of a Hadamard layer
/// followed by `RZ(2 s x_j)` on every qubit and `RZZ(2 s^2 x_j x_k)` on every
/// pair `j < k`, where `s = angle_scale`.
///
/// Two readings are available. [`FeatureMapConfig::new`] repeats the
/// unscaled block `2 * reuploadings` times. [`FeatureMapConfig::scaled`]
/// uses two blocks and folds the reuploading count into the angles (`s = λ`
/// on single-qubit rotations, `λ^2` on the pair rotations).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureMapConfig {
    pub n_qubits: usize,
    pub reuploadings: usize,
    pub block_reps: usize,
    pub angle_scale: f64,
}

impl FeatureMapConfig {
    pub fn new(n_qubits: usize, reuploadings: usize) -> Result<Self> {
        let cfg = Self {
            n_qubits,
            reuploadings,
            block_reps: 2 * reuploadings,
            angle_scale: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn scaled(n_qubits: usize, reuploadings: usize) -> Result<Self> {
        let cfg = Self {
            n_qubits,
            reuploadings,
            block_reps: 2,
            angle_scale: reuploadings as f64,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > super::MAX_QUBITS {
            return Err(Error::Capacity(format!("{} qubits", self.n_qubits)));
        }
        if self.reuploadings == 0 {
            return Err(Error::InvalidParameter("reuploadings must be >= 1".into()));
        }
        if self.block_reps < 2 {
            return Err(Error::InvalidParameter("block_reps must be >= 2".into()));
        }
        if !self.angle_scale.is_finite() {
            return Err(Error::NonFinite("angle_scale"));
        }
        Ok(())
    }

    /// The gate sequence encoding `x`.
    pub fn circuit(&self, x: &[f64]) -> Result<Vec<Gate>> {
        if x.len() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: x.len(),
                context: "feature vector length vs qubit count",
            });
        }
        let d = self.n_qubits;
        let s1 = 2.0 * self.angle_scale;
        let s2 = 2.0 * self.angle_scale * self.angle_scale;
        let mut gates = Vec::with_capacity(self.block_reps * (2 * d + d * (d - 1) / 2));
        for _ in 0..self.block_reps {
            gates.extend((0..d).map(Gate::H));
            gates.extend((0..d).map(|j| Gate::Rz(j, s1 * x[j])));
            for j in 0..d {
                for k in j + 1..d {
                    gates.push(Gate::Rzz(j, k, s2 * x[j] * x[k]));
                }
            }
        }
        Ok(gates)
    }
}

/// `|Φ(x)> = U_Φ(x)|0^d>`.
pub fn apply_feature_map(config: &FeatureMapConfig, x: &[f64]) -> Result<Statevector> {
    let mut state = Statevector::zero(config.n_qubits)?;
    for gate in config.circuit(x)? {
        state.apply(gate)?;
    }
    Ok(state)
}

/// Applies `U_Φ(x)^†` to `state`.
pub fn apply_inverse_feature_map(
    config: &FeatureMapConfig,
    x: &[f64],
    mut state: Statevector,
) -> Result<Statevector> {
    if state.n_qubits() != config.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: config.n_qubits,
            actual: state.n_qubits(),
            context: "state qubit count vs feature map",
        });
    }
    for gate in config.circuit(x)?.into_iter().rev() {
        state.apply(gate.inverse())?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{fidelity, zero_state};
    use num_complex::Complex64;

    #[test]
    fn defaults() {
        let cfg = FeatureMapConfig::new(2, 3).unwrap();
        assert_eq!(cfg.block_reps, 6);
        assert_eq!(cfg.angle_scale, 1.0);
        let eq = FeatureMapConfig::scaled(2, 3).unwrap();
        assert_eq!(eq.block_reps, 2);
        assert_eq!(eq.angle_scale, 3.0);
        assert!(FeatureMapConfig::new(2, 0).is_err());
        assert!(FeatureMapConfig::new(0, 1).is_err());
    }

    #[test]
    fn zero_input_reduces_to_hadamard_layers() {
        let cfg = FeatureMapConfig::new(2, 1).unwrap();
        let s = apply_feature_map(&cfg, &[0.0, 0.0]).unwrap();
        assert!((fidelity(&s, &zero_state(2).unwrap()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let cfg = FeatureMapConfig::new(3, 1).unwrap();
        assert!(matches!(
            apply_feature_map(&cfg, &[0.1, 0.2]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    // Straight-line evaluation of the d = 2 circuit with explicit 4x4 algebra:
    // H⊗H is written out, the diagonal layer is a literal phase table indexed
    // by (bit1, bit0).
    fn two_qubit_reference(x: [f64; 2], reps: usize, scale: f64) -> [Complex64; 4] {
        let h = 0.5;
        let hh = [
            [h, h, h, h],
            [h, -h, h, -h],
            [h, h, -h, -h],
            [h, -h, -h, h],
        ];
        let a = 2.0 * scale * x[0];
        let b = 2.0 * scale * x[1];
        let zz = 2.0 * scale * scale * x[0] * x[1];
        // index = bit1 * 2 + bit0; RZ phase sign is -1 for bit 0 and +1 for bit 1.
        let phase = |idx: usize| {
            let b0 = (idx & 1) as f64;
            let b1 = ((idx >> 1) & 1) as f64;
            let z0 = 2.0 * b0 - 1.0;
            let z1 = 2.0 * b1 - 1.0;
            let zz_sign = if (idx & 1) == ((idx >> 1) & 1) { -1.0 } else { 1.0 };
            Complex64::from_polar(1.0, 0.5 * (z0 * a + z1 * b + zz_sign * zz))
        };
        let mut psi = [Complex64::new(1.0, 0.0), Complex64::default(), Complex64::default(), Complex64::default()];
        for _ in 0..reps {
            let mut next = [Complex64::default(); 4];
            for r in 0..4 {
                for c in 0..4 {
                    next[r] += psi[c] * hh[r][c];
                }
            }
            for (i, amp) in next.iter_mut().enumerate() {
                *amp *= phase(i);
            }
            psi = next;
        }
        psi
    }

    #[test]
    fn matches_straight_line_two_qubit_computation() {
        let cfg = FeatureMapConfig::new(2, 3).unwrap();
        let s = apply_feature_map(&cfg, &[0.1, 0.2]).unwrap();
        let expect = two_qubit_reference([0.1, 0.2], 6, 1.0);
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!((a - e).norm() < 1e-12, "{a} vs {e}");
        }
        let cfg = FeatureMapConfig::scaled(2, 3).unwrap();
        let s = apply_feature_map(&cfg, &[0.1, 0.2]).unwrap();
        let expect = two_qubit_reference([0.1, 0.2], 2, 3.0);
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!((a - e).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_returns_to_zero_state() {
        let cfg = FeatureMapConfig::new(3, 2).unwrap();
        let x = [0.3, -0.7, 1.2];
        let s = apply_feature_map(&cfg, &x).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        let back = apply_inverse_feature_map(&cfg, &x, s).unwrap();
        assert!((back.amplitudes()[0].norm_sqr() - 1.0).abs() < 1e-12);
    }
}
