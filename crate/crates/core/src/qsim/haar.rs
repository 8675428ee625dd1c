use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::state::Statevector;
use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

const UNITARITY_TOL: f64 = 1e-10;

/// One 2x2 unitary per qubit; the tensor product is the local basis rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitarySetting {
    per_qubit: Vec<Mat2>,
}

impl LocalUnitarySetting {
    pub fn new(per_qubit: Vec<Mat2>) -> Result<Self> {
        if per_qubit.is_empty() {
            return Err(Error::InvalidParameter("setting needs at least one qubit".into()));
        }
        for (q, u) in per_qubit.iter().enumerate() {
            let dev = unitarity_deviation(u);
            if !(dev <= UNITARITY_TOL) {
                return Err(Error::InvalidParameter(format!(
                    "matrix for qubit {q} is not unitary (max |U†U - I| = {dev:e})"
                )));
            }
        }
        Ok(Self { per_qubit })
    }

    pub fn identity(n_qubits: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            per_qubit: vec![[[one, zero], [zero, one]]; n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.per_qubit.len()
    }

    pub fn matrices(&self) -> &[Mat2] {
        &self.per_qubit
    }
}

/// `max |(U†U - I)_{ab}|`.
pub fn unitarity_deviation(u: &Mat2) -> f64 {
    let mut dev: f64 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                s += u[k][a].conj() * u[k][b];
            }
            if a == b {
                s -= 1.0;
            }
            dev = dev.max(s.norm());
        }
    }
    dev
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random element of SU(2).
///
/// Gram-Schmidt on the columns of a complex Gaussian matrix is the QR
/// factorisation with a positive real `R` diagonal, which yields a Haar
/// unitary in U(2); dividing by a square root of the determinant moves it
/// into SU(2).
pub fn sample_haar_su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let z = [[gaussian(rng), gaussian(rng)], [gaussian(rng), gaussian(rng)]];
        let n1 = (z[0][0].norm_sqr() + z[1][0].norm_sqr()).sqrt();
        if n1 < 1e-12 {
            continue;
        }
        let q1 = [z[0][0] / n1, z[1][0] / n1];
        let proj = q1[0].conj() * z[0][1] + q1[1].conj() * z[1][1];
        let v = [z[0][1] - proj * q1[0], z[1][1] - proj * q1[1]];
        let n2 = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n2 < 1e-12 {
            continue;
        }
        let q2 = [v[0] / n2, v[1] / n2];
        let det = q1[0] * q2[1] - q2[0] * q1[1];
        let fix = Complex64::from_polar(1.0, -det.arg() / 2.0);
        return [[q1[0] * fix, q2[0] * fix], [q1[1] * fix, q2[1] * fix]];
    }
}

pub fn sample_haar_local<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<LocalUnitarySetting> {
    if n_qubits == 0 {
        return Err(Error::InvalidParameter("n_qubits must be >= 1".into()));
    }
    Ok(LocalUnitarySetting {
        per_qubit: (0..n_qubits).map(|_| sample_haar_su2(rng)).collect(),
    })
}

pub fn apply_local_unitary(mut state: Statevector, setting: &LocalUnitarySetting) -> Result<Statevector> {
    if state.n_qubits() != setting.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.n_qubits(),
            actual: setting.n_qubits(),
            context: "local unitary qubit count",
        });
    }
    for (q, u) in setting.per_qubit.iter().enumerate() {
        state.apply_single(q, u)?;
    }
    Ok(state)
}
