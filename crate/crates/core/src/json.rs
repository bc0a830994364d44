//! JSON matrix format: `{"rows": r, "cols": c, "data": [[re, im], ...]}` with
//! `data` in row-major order.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Serde(format!(
                "matrix {}x{} needs {} entries, got {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.data.len()
            )));
        }
        Ok(CMat::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            C64::new(re, im)
        }))
    }
}

pub fn matrix_to_string(m: &CMat) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix serialization cannot fail")
}

pub fn matrix_from_str(s: &str) -> Result<CMat> {
    let mj: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Serde(e.to_string()))?;
    mj.to_matrix()
}

/// `#[serde(with = "crate::json::cmat")]` adapter.
pub mod cmat {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMat, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMat, D::Error> {
        let mj = MatrixJson::deserialize(d)?;
        mj.to_matrix().map_err(serde::de::Error::custom)
    }
}
