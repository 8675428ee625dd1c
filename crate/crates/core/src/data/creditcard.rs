use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{Dataset, Label};
use crate::error::{Error, Result};
use crate::rng::seeded;

/// Row and fraud counts of the complete public credit-card file.
pub const CREDITCARD_ROWS: usize = 284_807;
pub const CREDITCARD_ANOMALIES: usize = 492;

const N_COMPONENTS: usize = 28;

fn expected_header() -> Vec<String> {
    let mut h = vec!["Time".to_string()];
    h.extend((1..=N_COMPONENTS).map(|k| format!("V{k}")));
    h.push("Amount".into());
    h.push("Class".into());
    h
}

/// Reads the credit-card CSV keeping `V1..V28`; `Class = 1` marks fraud.
pub fn load_creditcard(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?;
    let headers = reader.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().trim_matches('"') == name)
            .ok_or_else(|| Error::Ingestion(format!("missing column {name}")))
    };
    for name in expected_header() {
        find(&name)?;
    }
    let v_cols: Vec<usize> = (1..=N_COMPONENTS).map(|k| find(&format!("V{k}"))).collect::<Result<_>>()?;
    let class_col = find("Class")?;

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let cell = |col: usize| -> Result<f64> {
            let raw = record.get(col).unwrap_or("").trim().trim_matches('"');
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Ingestion(format!("row {}: non-numeric cell {raw:?}", line + 2)))
        };
        for &c in &v_cols {
            values.push(cell(c)?);
        }
        labels.push(match cell(class_col)? {
            v if v == 1.0 => Label::Anomaly,
            v if v == 0.0 => Label::Normal,
            v => return Err(Error::Ingestion(format!("row {}: class must be 0 or 1, got {v}", line + 2))),
        });
    }
    if labels.is_empty() {
        return Err(Error::Ingestion(format!("{}: no data rows", path.display())));
    }
    let n = labels.len();
    let features = DMatrix::from_row_iterator(n, N_COMPONENTS, values);
    let data = Dataset::new(features, Some(labels), "creditcard")?;
    if n == CREDITCARD_ROWS && data.anomaly_count() != CREDITCARD_ANOMALIES {
        return Err(Error::Ingestion(format!(
            "full file should hold {CREDITCARD_ANOMALIES} frauds, found {}",
            data.anomaly_count()
        )));
    }
    Ok(data)
}

/// Writes a file with the credit-card schema: normal rows are standard
/// Gaussian in `V1..V28`, fraud rows are shifted by +3 in the first four
/// components.
pub fn write_creditcard_fixture(path: impl AsRef<Path>, normals: usize, anomalies: usize, seed: u64) -> Result<()> {
    let mut rng = seeded(seed);
    let gauss = Normal::new(0.0, 1.0).expect("valid normal");
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{}", expected_header().join(","))?;
    let total = normals + anomalies;
    // Frauds are spread evenly through the file.
    let step = (total / anomalies.max(1)).max(1);
    for row in 0..total {
        let fraud = anomalies > 0 && row % step == 0 && row / step < anomalies;
        let mut cells = vec![format!("{}", row as f64 * 1.5)];
        for k in 0..N_COMPONENTS {
            let shift = if fraud && k < 4 { 3.0 } else { 0.0 };
            cells.push(format!("{:.6}", gauss.sample(&mut rng) + shift));
        }
        cells.push(format!("{:.2}", rng.random_range(0.0..500.0)));
        cells.push(if fraud { "1" } else { "0" }.into());
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()?;
    Ok(())
}
