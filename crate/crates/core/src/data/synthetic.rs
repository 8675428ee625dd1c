use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{Dataset, Label, Split};
use crate::error::{Error, Result};
use crate::rng::{stream, tag};

pub const SYNTHETIC_TEST_NORMALS: usize = 88;
/// `0.3 * 125 = 37.5`, rounded down.
pub const SYNTHETIC_TEST_ANOMALIES: usize = 37;

const CENTER: f64 = 2.0;
const SPREAD: f64 = 0.3;
const OUTLIER_BOX: f64 = 4.0;

/// Two Gaussian blobs at `(2, 2)` and `(-2, -2)` with per-axis standard
/// deviation 0.3. The test set holds 88 blob points and 37 points drawn
/// uniformly from `[-4, 4]^2`, labelled anomalous.
pub fn gen_synthetic(n_train: usize, seed: u64) -> Result<Split> {
    if n_train < 4 {
        return Err(Error::InvalidParameter(format!("n_train must be >= 4, got {n_train}")));
    }
    let mut rng = stream(seed, &[tag::SYNTHETIC]);
    let noise = Normal::new(0.0, SPREAD).expect("valid normal");
    let blobs = |n: usize, rng: &mut crate::rng::Stream| -> Vec<[f64; 2]> {
        let first = n.div_ceil(2);
        (0..n)
            .map(|i| {
                let c = if i < first { CENTER } else { -CENTER };
                [c + noise.sample(rng), c + noise.sample(rng)]
            })
            .collect()
    };
    let train_pts = blobs(n_train, &mut rng);
    let mut test_pts = blobs(SYNTHETIC_TEST_NORMALS, &mut rng);
    for _ in 0..SYNTHETIC_TEST_ANOMALIES {
        test_pts.push([
            rng.random_range(-OUTLIER_BOX..=OUTLIER_BOX),
            rng.random_range(-OUTLIER_BOX..=OUTLIER_BOX),
        ]);
    }
    let to_matrix = |pts: &[[f64; 2]]| DMatrix::from_fn(pts.len(), 2, |r, c| pts[r][c]);
    let mut test_labels = vec![Label::Normal; SYNTHETIC_TEST_NORMALS];
    test_labels.extend(std::iter::repeat_n(Label::Anomaly, SYNTHETIC_TEST_ANOMALIES));
    Ok(Split {
        train: Dataset::new(to_matrix(&train_pts), Some(vec![Label::Normal; n_train]), "synthetic")?,
        test: Dataset::new(to_matrix(&test_pts), Some(test_labels), "synthetic")?,
        seed,
        manifest: None,
    })
}
