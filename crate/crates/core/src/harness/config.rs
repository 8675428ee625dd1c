use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::PipelineKind;
use crate::ensemble::{Combine, DEFAULT_N_MAX, DEFAULT_N_MIN};
use crate::error::{Error, Result};
use crate::kernels::{KernelSpec, SwapMode};
use crate::qsim::FeatureMapConfig;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    #[default]
    Synthetic,
    Creditcard { path: PathBuf },
}

impl DatasetSpec {
    pub fn default_features(&self) -> usize {
        match self {
            DatasetSpec::Synthetic => 2,
            DatasetSpec::Creditcard { .. } => 6,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DatasetSpec::Synthetic => "synthetic",
            DatasetSpec::Creditcard { .. } => "creditcard",
        }
    }
}

/// `synthetic` or `creditcard=<path>`.
impl FromStr for DatasetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('=') {
            None if s == "synthetic" => Ok(DatasetSpec::Synthetic),
            Some(("creditcard", path)) if !path.is_empty() => Ok(DatasetSpec::Creditcard { path: path.into() }),
            _ => Err(Error::Config(format!(
                "unknown dataset '{s}' (expected 'synthetic' or 'creditcard=<path>')"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rbf,
    FidelityExact,
    Inversion,
    Swap,
    Randomized,
    RandomizedMitigated,
    VsAverage,
    VsMax,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Rbf,
        Method::FidelityExact,
        Method::Inversion,
        Method::Swap,
        Method::Randomized,
        Method::RandomizedMitigated,
        Method::VsAverage,
        Method::VsMax,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Rbf => "rbf",
            Method::FidelityExact => "fidelity_exact",
            Method::Inversion => "inversion",
            Method::Swap => "swap",
            Method::Randomized => "randomized",
            Method::RandomizedMitigated => "randomized_mitigated",
            Method::VsAverage => "vs_average",
            Method::VsMax => "vs_max",
        }
    }

    pub fn pipeline_kind(self) -> PipelineKind {
        match self {
            Method::Rbf => PipelineKind::Rbf,
            Method::Randomized | Method::RandomizedMitigated => PipelineKind::Randomized,
            _ => PipelineKind::Inversion,
        }
    }

    /// Combination mode for the ensemble methods.
    pub fn combine(self) -> Option<Combine> {
        match self {
            Method::VsAverage => Some(Combine::Average),
            Method::VsMax => Some(Combine::Maximum),
            _ => None,
        }
    }

    /// Kernel backend for `n_features` qubits. Ensembles use the
    /// inversion test.
    pub fn kernel_spec(self, cfg: &ExperimentConfig, n_features: usize) -> Result<KernelSpec> {
        let fmap = || {
            if cfg.scaled_feature_map {
                FeatureMapConfig::scaled(n_features, cfg.lambda)
            } else {
                FeatureMapConfig::new(n_features, cfg.lambda)
            }
        };
        Ok(match self {
            Method::Rbf => KernelSpec::Rbf { gamma: cfg.gamma },
            Method::FidelityExact => KernelSpec::FidelityExact { fmap: fmap()? },
            Method::Inversion | Method::VsAverage | Method::VsMax => KernelSpec::Inversion {
                fmap: fmap()?,
                shots: cfg.shots,
            },
            Method::Swap => KernelSpec::Swap {
                fmap: fmap()?,
                shots: cfg.shots,
                mode: cfg.swap_mode,
            },
            Method::Randomized | Method::RandomizedMitigated => KernelSpec::Randomized {
                fmap: fmap()?,
                settings: cfg.r,
                shots: cfg.s,
                mitigate: self == Method::RandomizedMitigated,
                exact: cfg.exact_probabilities,
            },
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == key)
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}

/// One sweep: every combination of seed, training size and feature count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub method: Method,
    pub data_sizes: Vec<usize>,
    /// Feature (qubit) counts to sweep. Empty means the dataset default.
    pub features: Vec<usize>,
    pub seeds: Vec<u64>,
    pub nu: f64,
    /// Feature-map re-uploadings.
    pub lambda: usize,
    pub scaled_feature_map: bool,
    /// Shots per inversion or swap test evaluation.
    pub shots: u64,
    /// Randomized-measurement unitary settings.
    pub r: usize,
    /// Shots per randomized-measurement setting.
    pub s: u64,
    pub exact_probabilities: bool,
    pub swap_mode: SwapMode,
    /// Fixed RBF width. `None` uses the data-scaled default.
    pub gamma: Option<f64>,
    pub n_min: usize,
    pub n_max: usize,
    /// Overrides the `⌊n/100⌋` ensemble component count.
    pub components: Option<usize>,
    pub shot_rate_hz: f64,
    /// Runs cells concurrently. Off by default so timings are not skewed
    /// by contention.
    pub parallel_cells: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetSpec::Synthetic,
            method: Method::Inversion,
            data_sizes: vec![250, 500, 750, 1000, 1250, 1500],
            features: Vec::new(),
            seeds: (0..15).collect(),
            nu: 0.1,
            lambda: 3,
            scaled_feature_map: false,
            shots: 1000,
            r: 30,
            s: 9000,
            exact_probabilities: false,
            swap_mode: SwapMode::Analytic,
            gamma: None,
            n_min: DEFAULT_N_MIN,
            n_max: DEFAULT_N_MAX,
            components: None,
            shot_rate_hz: super::DEFAULT_SHOT_RATE_HZ,
            parallel_cells: false,
        }
    }
}

impl ExperimentConfig {
    /// Reads a TOML or JSON file, chosen by extension (TOML otherwise).
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: Self = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn feature_counts(&self) -> Vec<usize> {
        if self.features.is_empty() {
            vec![self.dataset.default_features()]
        } else {
            self.features.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return fail(format!("nu must be in (0, 1], got {}", self.nu));
        }
        if self.seeds.is_empty() || self.data_sizes.is_empty() {
            return fail("seeds and data_sizes must be non-empty".into());
        }
        if self.data_sizes.contains(&0) {
            return fail("data sizes must be positive".into());
        }
        if self.lambda == 0 || self.shots == 0 || self.r == 0 || self.s == 0 {
            return fail("lambda, shots, r and s must be positive".into());
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return fail(format!("need 1 <= n_min <= n_max, got {}..{}", self.n_min, self.n_max));
        }
        if self.shot_rate_hz <= 0.0 {
            return fail("shot_rate_hz must be positive".into());
        }
        let counts = self.feature_counts();
        if counts.contains(&0) {
            return fail("feature counts must be positive".into());
        }
        if self.dataset == DatasetSpec::Synthetic && counts.iter().any(|&m| m != 2) {
            return fail("the synthetic dataset has exactly 2 features".into());
        }
        if self.gamma.is_some_and(|g| g <= 0.0) {
            return fail("gamma must be positive".into());
        }
        Ok(())
    }
}
