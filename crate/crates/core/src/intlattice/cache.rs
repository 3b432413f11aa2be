//! Versioned JSON form of sparse integer matrices:
//! `{"version": 1, "columns": n, "rows": [[[index, "value"], ...], ...]}`.
//! Values are decimal strings so arbitrary precision survives.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::SparseRow;

pub const MATRIX_FILE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed matrix file {path}: {reason}")]
    Format { path: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub version: u32,
    pub columns: usize,
    pub rows: Vec<Vec<(u32, String)>>,
}

impl MatrixFile {
    pub fn from_rows<'a, I: IntoIterator<Item = &'a SparseRow>>(columns: usize, rows: I) -> MatrixFile {
        MatrixFile {
            version: MATRIX_FILE_VERSION,
            columns,
            rows: rows
                .into_iter()
                .map(|r| r.entries().iter().map(|(c, v)| (*c, v.to_string())).collect())
                .collect(),
        }
    }

    pub fn to_rows(&self) -> Result<Vec<SparseRow>, String> {
        if self.version != MATRIX_FILE_VERSION {
            return Err(format!("unsupported version {}", self.version));
        }
        self.rows
            .iter()
            .map(|r| {
                let mut pairs = Vec::with_capacity(r.len());
                let mut last: Option<u32> = None;
                for (c, v) in r {
                    if (*c as usize) >= self.columns || last.map_or(false, |l| l >= *c) {
                        return Err(format!("column index {c} out of order or range"));
                    }
                    last = Some(*c);
                    let v: BigInt = v.parse().map_err(|_| format!("bad integer {v:?}"))?;
                    pairs.push((*c, v));
                }
                Ok(SparseRow::from_pairs(pairs))
            })
            .collect()
    }

    pub fn write(&self, path: &Path) -> Result<(), CacheError> {
        let text = serde_json::to_string(self).expect("serializable");
        write_atomic(path, text.as_bytes())
    }

    pub fn read(path: &Path) -> Result<MatrixFile, CacheError> {
        let text = std::fs::read_to_string(path).map_err(|source| CacheError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CacheError::Format {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CacheError> {
    let io = |source| CacheError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, bytes).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

pub(crate) mod decimal_map {
    use std::collections::BTreeMap;

    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<usize, BigInt>, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(usize, String)> = m.iter().map(|(k, v)| (*k, v.to_string())).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, BigInt>, D::Error> {
        let pairs: Vec<(usize, String)> = Vec::deserialize(d)?;
        pairs
            .into_iter()
            .map(|(k, v)| v.parse().map(|v| (k, v)).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(ToString::to_string).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let strings: Vec<String> = Vec::deserialize(d)?;
        strings
            .into_iter()
            .map(|v| v.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_big_values() {
        let big: BigInt = "-123456789012345678901234567890".parse().unwrap();
        let rows = vec![
            SparseRow::from_pairs([(0, BigInt::from(3)), (4, big)]),
            SparseRow::new(),
        ];
        let f = MatrixFile::from_rows(5, &rows);
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.starts_with(r#"{"version":1,"columns":5,"rows":[[[0,"3"],[4,"-1234"#));
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_rows().unwrap(), rows);
    }

    #[test]
    fn rejects_bad_files() {
        let mut f = MatrixFile::from_rows(2, &[SparseRow::unit(1)]);
        f.columns = 1;
        assert!(f.to_rows().is_err());
        f.columns = 2;
        f.version = 99;
        assert!(f.to_rows().is_err());
    }
}
