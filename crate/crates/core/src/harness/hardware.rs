use crate::error::{Error, Result};

/// Measurement repetition rate assumed for hardware estimates.
pub const DEFAULT_SHOT_RATE_HZ: f64 = 5000.0;
pub const SECONDS_PER_YEAR: f64 = 365.0 * 86_400.0;

/// Wall-clock seconds a device needs to take `total_shots` shots.
///
/// # Panics
/// If `rate_hz` is not positive.
pub fn estimate_hardware_seconds(total_shots: f64, rate_hz: f64) -> f64 {
    assert!(rate_hz > 0.0, "shot rate must be positive");
    total_shots / rate_hz
}

pub fn seconds_to_years(seconds: f64) -> f64 {
    seconds / SECONDS_PER_YEAR
}

/// Shots for a symmetric `n × n` kernel matrix: `n(n+1)/2` evaluations at
/// `shots` each.
pub fn symmetric_shot_count(n: u64, shots: u64) -> f64 {
    (n as f64) * (n as f64 + 1.0) / 2.0 * shots as f64
}

/// Least-squares slope of `ln(seconds)` against `ln(size)`.
pub fn scaling_fit(sizes: &[f64], seconds: &[f64]) -> Result<f64> {
    if sizes.len() != seconds.len() {
        return Err(Error::DimensionMismatch {
            expected: sizes.len(),
            actual: seconds.len(),
            context: "scaling fit inputs",
        });
    }
    if sizes.len() < 3 {
        return Err(Error::InvalidParameter("scaling fit needs at least 3 points".into()));
    }
    if sizes.iter().chain(seconds).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter("scaling fit needs positive finite inputs".into()));
    }
    let xs: Vec<f64> = sizes.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = seconds.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("scaling fit needs at least two distinct sizes".into()));
    }
    Ok(sxy / sxx)
}
