use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use super::state::Statevector;
use crate::error::{Error, Result};

/// Gates used by the IQP-like feature map.
///
/// `Rz(q, t) = diag(e^{-it/2}, e^{it/2})` and `Rzz(a, b, t)` applies
/// `e^{-it/2}` when bits `a` and `b` agree and `e^{it/2}` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    Rz(usize, f64),
    Rzz(usize, usize, f64),
}

impl Gate {
    pub fn inverse(self) -> Gate {
        match self {
            Gate::H(q) => Gate::H(q),
            Gate::Rz(q, t) => Gate::Rz(q, -t),
            Gate::Rzz(a, b, t) => Gate::Rzz(a, b, -t),
        }
    }
}

pub fn apply_gate(mut state: Statevector, gate: Gate) -> Result<Statevector> {
    state.apply(gate)?;
    Ok(state)
}

impl Statevector {
    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        match gate {
            Gate::H(q) => {
                self.check_qubit(q)?;
                let bit = 1usize << q;
                let amps = self.amplitudes_mut();
                for i in 0..amps.len() {
                    if i & bit == 0 {
                        let (a, b) = (amps[i], amps[i | bit]);
                        amps[i] = (a + b) * FRAC_1_SQRT_2;
                        amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::Rz(q, theta) => {
                self.check_qubit(q)?;
                let bit = 1usize << q;
                let lo = Complex64::from_polar(1.0, -theta / 2.0);
                let hi = Complex64::from_polar(1.0, theta / 2.0);
                for (i, a) in self.amplitudes_mut().iter_mut().enumerate() {
                    *a *= if i & bit == 0 { lo } else { hi };
                }
            }
            Gate::Rzz(q1, q2, theta) => {
                self.check_qubit(q1)?;
                self.check_qubit(q2)?;
                if q1 == q2 {
                    return Err(Error::InvalidParameter(format!(
                        "RZZ needs two distinct qubits, got {q1} twice"
                    )));
                }
                let (b1, b2) = (1usize << q1, 1usize << q2);
                let same = Complex64::from_polar(1.0, -theta / 2.0);
                let diff = Complex64::from_polar(1.0, theta / 2.0);
                for (i, a) in self.amplitudes_mut().iter_mut().enumerate() {
                    let equal = (i & b1 == 0) == (i & b2 == 0);
                    *a *= if equal { same } else { diff };
                }
            }
        }
        Ok(())
    }

    /// Applies an arbitrary 2x2 matrix to qubit `q`.
    pub fn apply_single(&mut self, q: usize, m: &[[Complex64; 2]; 2]) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let amps = self.amplitudes_mut();
        for i in 0..amps.len() {
            if i & bit == 0 {
                let (a, b) = (amps[i], amps[i | bit]);
                amps[i] = m[0][0] * a + m[0][1] * b;
                amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
        Ok(())
    }
}
