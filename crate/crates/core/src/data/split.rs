use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::{Dataset, Split};
use crate::error::{Error, Result};
use crate::rng::{stream, tag};

pub const TEST_NORMALS: usize = 119;
pub const TEST_ANOMALIES: usize = 6;

/// Source-row indices of a split, persisted so a split can be rebuilt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Draws `n_train` normals for training and 119 normals plus 6 anomalies for
/// testing, all without replacement.
pub fn make_split(data: &Dataset, n_train: usize, seed: u64) -> Result<Split> {
    let labels = data
        .labels
        .as_ref()
        .ok_or_else(|| Error::Ingestion("split needs labelled data".into()))?;
    let normals: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i].is_anomaly()).collect();
    let anomalies: Vec<usize> = (0..labels.len()).filter(|&i| labels[i].is_anomaly()).collect();
    if normals.len() < n_train + TEST_NORMALS {
        return Err(Error::InsufficientRows(format!(
            "need {} normal rows, have {}",
            n_train + TEST_NORMALS,
            normals.len()
        )));
    }
    if anomalies.len() < TEST_ANOMALIES {
        return Err(Error::InsufficientRows(format!(
            "need {TEST_ANOMALIES} anomalies, have {}",
            anomalies.len()
        )));
    }
    let mut rng = stream(seed, &[tag::SPLIT]);
    let picked = sample(&mut rng, normals.len(), n_train + TEST_NORMALS).into_vec();
    let train: Vec<usize> = picked[..n_train].iter().map(|&k| normals[k]).collect();
    let mut test: Vec<usize> = picked[n_train..].iter().map(|&k| normals[k]).collect();
    test.extend(
        sample(&mut rng, anomalies.len(), TEST_ANOMALIES)
            .into_iter()
            .map(|k| anomalies[k]),
    );
    let manifest = SplitManifest { seed, train, test };
    Ok(apply_manifest(data, manifest))
}

pub(crate) fn apply_manifest(data: &Dataset, manifest: SplitManifest) -> Split {
    Split {
        train: data.select(&manifest.train),
        test: data.select(&manifest.test),
        seed: manifest.seed,
        manifest: Some(manifest),
    }
}

impl SplitManifest {
    pub fn apply(self, data: &Dataset) -> Result<Split> {
        let n = data.len();
        if let Some(&bad) = self.train.iter().chain(&self.test).find(|&&i| i >= n) {
            return Err(Error::InsufficientRows(format!("manifest index {bad} out of range for {n} rows")));
        }
        Ok(apply_manifest(data, self))
    }
}
