//! Matrix files (CSV and raw binary) and the JSON cohort manifest.
//!
//! CSV: one row per series, one column per sample. An all-text first row is
//! treated as a header and ignored; an all-text first column is taken as ROI
//! names. Values are written in shortest round-trip form, so save/load is
//! exact.
//!
//! Binary: the 8-byte magic `LSXGCMAT`, rows and cols as little-endian
//! `u64`, then row-major little-endian `f64`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timeseries::{default_roi_names, SubjectDataset, SubjectRecord, TimeSeriesEnsemble};

pub const BINARY_MAGIC: &[u8; 8] = b"LSXGCMAT";

/// Formats a float so that parsing it back yields the same bits.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn parse_matrix_csv<R: Read>(reader: R) -> Result<TimeSeriesEnsemble> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut rows: Vec<Vec<String>> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            row: i + 1,
            col: 0,
            msg: e.to_string(),
        })?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        rows.push(rec.iter().map(str::to_owned).collect());
    }

    let is_num = |s: &str| s.parse::<f64>().is_ok();
    let mut first_row = 1;
    if rows.first().is_some_and(|r| r.iter().all(|c| !is_num(c))) {
        rows.remove(0);
        first_row = 2;
    }
    let has_names = !rows.is_empty() && rows.iter().all(|r| !r.is_empty() && !is_num(&r[0]));
    let skip = usize::from(has_names);

    let width = rows.first().map_or(0, Vec::len);
    let t = width.saturating_sub(skip);
    let n = rows.len();
    let mut data = Vec::with_capacity(n * t);
    let mut names = Vec::with_capacity(n);
    for (i, r) in rows.iter().enumerate() {
        let row = i + first_row;
        if r.len() != width {
            return Err(Error::Parse {
                row,
                col: r.len().min(width) + 1,
                msg: format!("expected {width} fields, found {}", r.len()),
            });
        }
        if has_names {
            names.push(r[0].clone());
        }
        for (j, cell) in r.iter().enumerate().skip(skip) {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                col: j + 1,
                msg: format!("not a number: {cell:?}"),
            })?;
            data.push(v);
        }
    }
    if n < 2 || t < 2 {
        return Err(Error::Dimension(format!(
            "matrix needs at least 2 rows and 2 columns, got {n}x{t}"
        )));
    }
    let data = Array2::from_shape_vec((n, t), data).expect("shape checked");
    let names = if has_names { names } else { default_roi_names(n) };
    TimeSeriesEnsemble::with_names(data, names)
}

pub fn load_matrix_csv(path: impl AsRef<Path>) -> Result<TimeSeriesEnsemble> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_csv(BufReader::new(f))
}

pub fn write_matrix_csv<W: Write>(m: &Array2<f64>, mut w: W) -> std::io::Result<()> {
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|&v| format_f64(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()
}

pub fn save_matrix_csv(m: &Array2<f64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_matrix_csv(m, BufWriter::new(f)).map_err(|e| Error::io(path, e))
}

pub fn write_matrix_binary<W: Write>(m: &Array2<f64>, mut w: W) -> std::io::Result<()> {
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    for v in m.iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

pub fn read_matrix_binary<R: Read>(mut r: R) -> Result<Array2<f64>> {
    let bad = |msg: &str| Error::Parse {
        row: 0,
        col: 0,
        msg: msg.to_owned(),
    };
    let mut header = [0u8; 24];
    r.read_exact(&mut header).map_err(|_| bad("truncated binary header"))?;
    if &header[..8] != BINARY_MAGIC {
        return Err(bad("missing LSXGCMAT magic"));
    }
    let rows = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(header[16..24].try_into().unwrap()) as usize;
    let len = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| bad("binary dimensions overflow"))?;
    let mut buf = Vec::with_capacity(len);
    r.take(len as u64).read_to_end(&mut buf).map_err(|_| bad("truncated payload"))?;
    if buf.len() != len {
        return Err(bad("truncated payload"));
    }
    let data = buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Array2::from_shape_vec((rows, cols), data).expect("length checked"))
}

pub fn save_matrix_binary(m: &Array2<f64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_matrix_binary(m, BufWriter::new(f)).map_err(|e| Error::io(path, e))
}

/// Loads an ensemble from either format, sniffing the binary magic.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<TimeSeriesEnsemble> {
    let path = path.as_ref();
    let mut f = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
    let mut magic = [0u8; 8];
    let n = f.read(&mut magic).map_err(|e| Error::io(path, e))?;
    drop(f);
    if n == 8 && &magic == BINARY_MAGIC {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        TimeSeriesEnsemble::new(read_matrix_binary(BufReader::new(f))?)
    } else {
        load_matrix_csv(path)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub label: i64,
    pub path: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub subjects: Vec<ManifestEntry>,
}

/// Loads every subject referenced by a manifest; relative paths resolve
/// against the manifest's directory. Record order follows the manifest.
pub fn load_dataset_manifest(path: impl AsRef<Path>) -> Result<SubjectDataset> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    let manifest: Manifest = serde_json::from_reader(BufReader::new(f))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let records = manifest
        .subjects
        .par_iter()
        .map(|s| {
            let err = |msg: String| Error::Manifest {
                subject: s.id.clone(),
                msg,
            };
            if s.label != 0 && s.label != 1 {
                return Err(err(format!("label {} is not 0 or 1", s.label)));
            }
            let p = if s.path.is_absolute() { s.path.clone() } else { base.join(&s.path) };
            if !p.exists() {
                return Err(err(format!("missing file {}", p.display())));
            }
            let ensemble = load_matrix(&p).map_err(|e| err(e.to_string()))?;
            Ok(SubjectRecord {
                subject_id: s.id.clone(),
                label: s.label as u8,
                ensemble,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SubjectDataset::new(records)
}
