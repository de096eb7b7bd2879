//! File formats.
//!
//! State file: `{"dims":[d,d,d],"amplitudes":[[re,im],...]}` with amplitudes
//! in flat `(i,j,k)` order, `k` fastest. Campaign CSV columns follow
//! [`CampaignRow`]. Decompositions export as
//! `{"probabilities":[...],"members":[[[[re,im],...],...],...]}`, each member a
//! row-major `d × d` amplitude matrix.

use std::io::Write;
use std::path::Path;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::monogamy::CampaignRow;
use crate::roof::EnsembleDecomposition;
use crate::state::PureTripartiteState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &PureTripartiteState<f64>) -> Self {
        let d = state.dim();
        StateFile { dims: vec![d, d, d], amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect() }
    }

    /// Validates the header and builds the state. Norm drift up to the
    /// ingestion tolerance is renormalized away; more is an error unless
    /// `renormalize` is set.
    pub fn into_state(self, renormalize: bool) -> Result<PureTripartiteState<f64>> {
        let d = match self.dims.as_slice() {
            [a, b, c] if a == b && b == c => *a,
            other => return Err(Error::Format(format!("dims must be [d,d,d], got {other:?}"))),
        };
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if self.amplitudes.len() != d * d * d {
            return Err(Error::LengthMismatch { expected: d * d * d, actual: self.amplitudes.len() });
        }
        if self.amplitudes.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Format("amplitudes must be finite".into()));
        }
        let amps = self.amplitudes.into_iter().map(|[re, im]| Complex::new(re, im)).collect();
        PureTripartiteState::new(d, amps, renormalize)
    }
}

pub fn parse_state_json(text: &str, renormalize: bool) -> Result<PureTripartiteState<f64>> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.into_state(renormalize)
}

pub fn read_state_file(path: &Path, renormalize: bool) -> Result<PureTripartiteState<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_state_json(&text, renormalize)
}

pub fn state_to_json(state: &PureTripartiteState<f64>) -> Result<String> {
    to_json_checked(&StateFile::from_state(state))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub probabilities: Vec<f64>,
    pub members: Vec<Vec<Vec<[f64; 2]>>>,
}

impl DecompositionFile {
    pub fn from_decomposition(dec: &EnsembleDecomposition<f64>) -> Self {
        let members = dec
            .members
            .iter()
            .map(|m| {
                let a = m.amplitudes();
                (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| [a[(i, j)].re, a[(i, j)].im]).collect()).collect()
            })
            .collect();
        DecompositionFile { probabilities: dec.probabilities.clone(), members }
    }
}

fn find_null(value: &Value, path: &mut String) -> bool {
    match value {
        Value::Null => true,
        Value::Array(items) => items.iter().enumerate().any(|(i, v)| {
            let len = path.len();
            path.push_str(&format!("[{i}]"));
            let found = find_null(v, path);
            if !found {
                path.truncate(len);
            }
            found
        }),
        Value::Object(map) => map.iter().any(|(k, v)| {
            let len = path.len();
            path.push('.');
            path.push_str(k);
            let found = find_null(v, path);
            if !found {
                path.truncate(len);
            }
            found
        }),
        _ => false,
    }
}

/// Pretty JSON, refusing any non-finite number. `serde_json` writes NaN and
/// infinities as `null`, and the emitted types have no optional fields, so a
/// `null` anywhere marks a non-finite value.
pub fn to_json_checked<S: Serialize>(value: &S) -> Result<String> {
    let tree = serde_json::to_value(value).map_err(|e| Error::Format(e.to_string()))?;
    let mut path = String::from("$");
    if find_null(&tree, &mut path) {
        return Err(Error::NonFinite(path));
    }
    serde_json::to_string_pretty(&tree).map_err(|e| Error::Format(e.to_string()))
}

/// Appends rows as CSV, with the header first when `header` is set.
pub fn write_csv_rows<W: Write>(out: W, rows: &[CampaignRow], header: bool) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(header).from_writer(out);
    for row in rows {
        if ![row.lhs_pow_d, row.rhs12_pow_d, row.rhs13_pow_d, row.residual].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite(format!("row {}", row.sample_index)));
        }
        writer.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes `bytes` to a temporary sibling of `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(Error::from)
}
