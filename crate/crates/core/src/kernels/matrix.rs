use std::io::{Read, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    Rbf,
    FidelityExact,
    Inversion,
    Swap,
    Randomized,
    RandomizedMitigated,
}

/// Provenance of a kernel matrix.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KernelMeta {
    pub shots: Option<u64>,
    pub settings: Option<usize>,
    pub seed: Option<u64>,
    pub gamma: Option<f64>,
    /// Kernel-function (or circuit) evaluations performed to build the matrix.
    pub evaluations: u64,
    /// Total measurement shots consumed, zero for analytic kernels.
    pub total_shots: u64,
    pub symmetric: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    pub values: DMatrix<f64>,
    pub method: KernelMethod,
    pub meta: KernelMeta,
}

#[derive(Serialize, Deserialize)]
struct Trailer {
    method: KernelMethod,
    #[serde(flatten)]
    meta: KernelMeta,
}

const MAGIC: &[u8; 4] = b"QKM1";

impl KernelMatrix {
    pub fn new(values: DMatrix<f64>, method: KernelMethod, meta: KernelMeta) -> Self {
        Self { values, method, meta }
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows().min(self.ncols())).map(|i| self.values[(i, i)]).collect()
    }

    /// Number of matrix entries (`rows * cols`).
    pub fn entries(&self) -> u64 {
        (self.nrows() * self.ncols()) as u64
    }

    /// Binary layout: `"QKM1"`, `u32` rows, `u32` cols, `u32` trailer length
    /// (all little-endian), row-major `f64` values, then a JSON metadata
    /// trailer.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        let rows = u32::try_from(self.nrows()).map_err(|_| Error::Format("too many rows".into()))?;
        let cols = u32::try_from(self.ncols()).map_err(|_| Error::Format("too many cols".into()))?;
        let trailer = serde_json::to_vec(&Trailer {
            method: self.method,
            meta: self.meta.clone(),
        })?;
        w.write_all(MAGIC)?;
        w.write_all(&rows.to_le_bytes())?;
        w.write_all(&cols.to_le_bytes())?;
        w.write_all(&(trailer.len() as u32).to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.nrows() * self.ncols() * 8);
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                buf.extend_from_slice(&self.values[(i, j)].to_le_bytes());
            }
        }
        w.write_all(&buf)?;
        w.write_all(&trailer)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header)?;
        if &header[..4] != MAGIC {
            return Err(Error::Format("bad kernel matrix magic".into()));
        }
        let word = |k: usize| u32::from_le_bytes(header[k..k + 4].try_into().unwrap()) as usize;
        let (rows, cols, trailer_len) = (word(4), word(8), word(12));
        let mut data = vec![0u8; rows * cols * 8];
        r.read_exact(&mut data)?;
        let mut trailer = vec![0u8; trailer_len];
        r.read_exact(&mut trailer)?;
        let trailer: Trailer = serde_json::from_slice(&trailer)?;
        let values = DMatrix::from_fn(rows, cols, |i, j| {
            let k = (i * cols + j) * 8;
            f64::from_le_bytes(data[k..k + 8].try_into().unwrap())
        });
        Ok(Self {
            values,
            method: trailer.method,
            meta: trailer.meta,
        })
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for i in 0..self.nrows() {
            out.write_record((0..self.ncols()).map(|j| format!("{:.17e}", self.values[(i, j)])))?;
        }
        out.flush()?;
        Ok(())
    }
}
