use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{
    estimate_purities, fidelity_exact_matrix, gamma_scale, inversion_test_matrix, mitigate, rbf_matrix,
    rm_kernel, rm_profile, rm_profile_with_settings, swap_test_matrix, KernelMatrix, ProbabilityTable,
    RbfConfig, SwapMode,
};
use crate::error::Result;
use crate::qsim::FeatureMapConfig;
use crate::rng::{derive_seed, tag};

/// A kernel backend together with its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    /// `gamma = None` resolves to [`gamma_scale`] of the training data.
    Rbf { gamma: Option<f64> },
    FidelityExact { fmap: FeatureMapConfig },
    Inversion { fmap: FeatureMapConfig, shots: u64 },
    Swap { fmap: FeatureMapConfig, shots: u64, mode: SwapMode },
    Randomized {
        fmap: FeatureMapConfig,
        settings: usize,
        shots: u64,
        mitigate: bool,
        exact: bool,
    },
}

/// A kernel bound to its training set: holds the training Gram matrix and
/// whatever state prediction kernels need (randomized-measurement settings
/// and training profiles).
#[derive(Debug, Clone)]
pub struct FittedKernel {
    spec: KernelSpec,
    seed: u64,
    train: DMatrix<f64>,
    gram: KernelMatrix,
    gamma: Option<f64>,
    train_profile: Option<ProbabilityTable>,
}

impl KernelSpec {
    pub fn fit(&self, train: &DMatrix<f64>, seed: u64) -> Result<FittedKernel> {
        let mut gamma = None;
        let mut train_profile = None;
        let gram = match self {
            KernelSpec::Rbf { gamma: g } => {
                let g = match g {
                    Some(g) => *g,
                    None => gamma_scale(train)?,
                };
                gamma = Some(g);
                rbf_matrix(train, train, RbfConfig::new(g)?)?
            }
            KernelSpec::FidelityExact { fmap } => fidelity_exact_matrix(train, train, fmap)?,
            KernelSpec::Inversion { fmap, shots } => inversion_test_matrix(train, train, fmap, *shots, seed)?,
            KernelSpec::Swap { fmap, shots, mode } => swap_test_matrix(train, train, fmap, *shots, seed, *mode)?,
            KernelSpec::Randomized {
                fmap,
                settings,
                shots,
                mitigate: mitigated,
                exact,
            } => {
                let profile = rm_profile(train, fmap, *settings, *shots, derive_seed(seed, &[tag::GRAM]), *exact)?;
                let profile = estimate_purities(&profile);
                let mut k = rm_kernel(&profile, &profile)?;
                k.meta.seed = Some(seed);
                k.meta.total_shots = profile_shots(&profile);
                if *mitigated {
                    let p = profile.purity().unwrap_or_default();
                    k = mitigate(&k, p, p)?;
                }
                train_profile = Some(profile);
                k
            }
        };
        Ok(FittedKernel {
            spec: self.clone(),
            seed,
            train: train.clone(),
            gram,
            gamma,
            train_profile,
        })
    }

    pub fn feature_map(&self) -> Option<&FeatureMapConfig> {
        match self {
            KernelSpec::Rbf { .. } => None,
            KernelSpec::FidelityExact { fmap }
            | KernelSpec::Inversion { fmap, .. }
            | KernelSpec::Swap { fmap, .. }
            | KernelSpec::Randomized { fmap, .. } => Some(fmap),
        }
    }
}

fn profile_shots(p: &ProbabilityTable) -> u64 {
    p.shots().unwrap_or(0) * (p.n_points() * p.n_settings()) as u64
}

impl FittedKernel {
    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn train(&self) -> &DMatrix<f64> {
        &self.train
    }

    /// Training Gram matrix.
    pub fn gram(&self) -> &KernelMatrix {
        &self.gram
    }

    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    /// Prediction kernel, rows = `test`, columns = training points.
    pub fn cross(&self, test: &DMatrix<f64>) -> Result<KernelMatrix> {
        let train = &self.train;
        match &self.spec {
            KernelSpec::Rbf { .. } => rbf_matrix(test, train, RbfConfig::new(self.gamma.unwrap_or(1.0))?),
            KernelSpec::FidelityExact { fmap } => fidelity_exact_matrix(test, train, fmap),
            KernelSpec::Inversion { fmap, shots } => inversion_test_matrix(test, train, fmap, *shots, self.seed),
            KernelSpec::Swap { fmap, shots, mode } => swap_test_matrix(test, train, fmap, *shots, self.seed, *mode),
            KernelSpec::Randomized {
                fmap,
                shots,
                mitigate: mitigated,
                exact,
                ..
            } => {
                let train_profile = self
                    .train_profile
                    .as_ref()
                    .expect("randomized kernels always keep their training profile");
                let test_profile = rm_profile_with_settings(
                    test,
                    fmap,
                    train_profile.settings().clone(),
                    *shots,
                    derive_seed(self.seed, &[tag::CROSS]),
                    *exact,
                )?;
                let mut k = rm_kernel(&test_profile, train_profile)?;
                k.meta.seed = Some(self.seed);
                k.meta.total_shots = profile_shots(&test_profile);
                if *mitigated {
                    let test_profile = estimate_purities(&test_profile);
                    k = mitigate(
                        &k,
                        test_profile.purity().unwrap_or_default(),
                        train_profile.purity().unwrap_or_default(),
                    )?;
                }
                Ok(k)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelMethod;
    use crate::rng::seeded;
    use rand::Rng;

    fn data(n: usize, d: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = seeded(seed);
        DMatrix::from_fn(n, d, |_, _| rng.random_range(-0.5..0.5))
    }

    #[test]
    fn every_backend_fits_and_crosses() {
        let fmap = FeatureMapConfig::new(2, 3).unwrap();
        let specs = [
            KernelSpec::Rbf { gamma: None },
            KernelSpec::FidelityExact { fmap },
            KernelSpec::Inversion { fmap, shots: 100 },
            KernelSpec::Swap { fmap, shots: 100, mode: SwapMode::Analytic },
            KernelSpec::Randomized { fmap, settings: 5, shots: 100, mitigate: false, exact: false },
            KernelSpec::Randomized { fmap, settings: 5, shots: 100, mitigate: true, exact: false },
        ];
        let train = data(6, 2, 0);
        let test = data(3, 2, 1);
        for spec in specs {
            let fitted = spec.fit(&train, 4).unwrap();
            assert_eq!(fitted.gram().nrows(), 6);
            assert!(fitted.gram().is_square());
            let cross = fitted.cross(&test).unwrap();
            assert_eq!((cross.nrows(), cross.ncols()), (3, 6));
            assert_eq!(cross.method, fitted.gram().method);
        }
    }

    #[test]
    fn mitigated_randomized_gram_has_unit_diagonal() {
        let fmap = FeatureMapConfig::new(2, 3).unwrap();
        let spec = KernelSpec::Randomized { fmap, settings: 10, shots: 200, mitigate: true, exact: false };
        let fitted = spec.fit(&data(5, 2, 2), 0).unwrap();
        assert_eq!(fitted.gram().method, KernelMethod::RandomizedMitigated);
        assert!(fitted.gram().diagonal().iter().all(|&v| v == 1.0));
        assert_eq!(fitted.gram().meta.total_shots, 5 * 10 * 200);
    }

    #[test]
    fn rbf_gamma_resolution() {
        let train = data(10, 3, 3);
        let fitted = KernelSpec::Rbf { gamma: None }.fit(&train, 0).unwrap();
        assert_eq!(fitted.gamma(), Some(gamma_scale(&train).unwrap()));
        let fixed = KernelSpec::Rbf { gamma: Some(0.5) }.fit(&train, 0).unwrap();
        assert_eq!(fixed.gamma(), Some(0.5));
    }

    #[test]
    fn spec_serializes() {
        let spec = KernelSpec::Inversion { fmap: FeatureMapConfig::new(2, 3).unwrap(), shots: 1000 };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"kind\":\"inversion\""));
        let back: KernelSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
