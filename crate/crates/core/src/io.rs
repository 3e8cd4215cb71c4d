//! Versioned JSON documents and CSV tables.
//!
//! Complex numbers are `[re, im]` pairs, points are arrays of those, and
//! matrices are arrays of rows. Every JSON document carries
//! `"schema_version": 1`.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::imp::FalsifyReport;
use crate::kernels::C64;
use crate::linalg::CMat;
use crate::outer::OuterFunction;

pub const SCHEMA_VERSION: u64 = 1;

/// Parse a document, checking and stripping `schema_version`.
pub fn parse_versioned<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut v: Value = serde_json::from_str(text)?;
    let obj = v.as_object_mut().ok_or_else(|| Error::Schema("document must be a JSON object".into()))?;
    match obj.remove("schema_version").and_then(|s| s.as_u64()) {
        Some(SCHEMA_VERSION) => {}
        Some(other) => return Err(Error::Schema(format!("unsupported schema_version {other}"))),
        None => return Err(Error::Schema("missing schema_version".into())),
    }
    serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))
}

pub fn read_versioned<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_versioned(&std::fs::read_to_string(path)?)
}

/// Pretty JSON with `schema_version` added at the top level. Object keys
/// come out sorted, so equal values give byte-identical text.
pub fn to_versioned_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    match v.as_object_mut() {
        Some(obj) => {
            obj.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        }
        None => return Err(Error::Schema("top-level report must be an object".into())),
    }
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_versioned<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_versioned_json(value)?)?;
    Ok(())
}

pub fn matrix_to_rows(m: &CMat) -> Vec<Vec<C64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub fn matrix_from_rows(rows: &[Vec<C64>]) -> Result<CMat> {
    let n = rows.len();
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        return Err(Error::Schema(format!("matrix row {i} has length {}, expected {n}", rows[i].len())));
    }
    Ok(CMat::from_fn(n, n, |i, j| rows[i][j]))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Schema(e.to_string())
}

/// Columns `t, re, im, modulus, weight` at the boundary nodes.
pub fn write_outer_csv<W: Write>(f: &OuterFunction, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "re", "im", "modulus", "weight"]).map_err(csv_err)?;
    for (j, (v, wt)) in f.boundary_values().iter().zip(&f.weight).enumerate() {
        let t = 2.0 * std::f64::consts::PI * j as f64 / f.nodes as f64;
        out.serialize((t, v.re, v.im, v.norm(), wt)).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `x, y, g, laplacian, laplacian_fd` over the sample grid.
pub fn write_imp_csv<W: Write>(r: &FalsifyReport, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "y", "g", "laplacian", "laplacian_fd"]).map_err(csv_err)?;
    for s in &r.samples {
        out.serialize((s.z.re, s.z.im, s.g, s.laplacian, s.laplacian_fd)).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn create(path: &Path) -> Result<File> {
    Ok(File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::PointSet;

    #[test]
    fn version_is_required_and_checked() {
        let ok: PointSet =
            parse_versioned(r#"{"schema_version": 1, "domain": {"kind": "disk", "dim": 1}, "points": [[[0.5, 0.0]]]}"#)
                .unwrap();
        assert_eq!(ok.len(), 1);
        assert!(matches!(
            parse_versioned::<PointSet>(r#"{"domain": {"kind": "disk", "dim": 1}, "points": []}"#),
            Err(Error::Schema(_))
        ));
        assert!(parse_versioned::<PointSet>(
            r#"{"schema_version": 2, "domain": {"kind": "disk", "dim": 1}, "points": []}"#
        )
        .is_err());
    }

    #[test]
    fn matrix_rows_round_trip() {
        let m = CMat::from_fn(2, 2, |i, j| C64::new(i as f64, j as f64));
        assert_eq!(matrix_from_rows(&matrix_to_rows(&m)).unwrap(), m);
        assert!(matrix_from_rows(&[vec![C64::new(0.0, 0.0)], vec![]]).is_err());
    }
}
