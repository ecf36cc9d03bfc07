//! Deterministic CSV and JSON artifact writers.
//!
//! Every writer is plain-text, byte-reproducible, and round-trip safe:
//! floating values carry 17 significant digits, which f64 parsing restores
//! bit-exactly. CSV rows are RFC 4180 style with CRLF line endings.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::history::TrajectoryHistory;
use crate::model::ModelParams;
use crate::retardation::solve_retarded_time;
use crate::selfforce::eom_residual;
use crate::spectrum::RootSet;

/// The column layout of an exported trajectory.
pub const TRAJECTORY_SCHEMA: [&str; 6] = ["t", "x", "v", "a", "r", "residual"];

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Write `rows` under `header` as CSV; returns the data row count.
///
/// Every row must have exactly as many fields as the header.
pub fn export_csv<W: Write>(out: &mut W, header: &[&str], rows: &[Vec<f64>]) -> Result<usize> {
    let wrap = |e: std::io::Error| Error::Io {
        path: "<writer>".into(),
        source: e,
    };
    let mut line = header.join(",");
    line.push_str("\r\n");
    out.write_all(line.as_bytes()).map_err(wrap)?;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(Error::SchemaMismatch {
                row: i,
                got: row.len(),
                expected: header.len(),
            });
        }
        let mut line = row.iter().map(|&v| fmt(v)).collect::<Vec<_>>().join(",");
        line.push_str("\r\n");
        out.write_all(line.as_bytes()).map_err(wrap)?;
    }
    out.flush().map_err(wrap)?;
    Ok(rows.len())
}

/// [`export_csv`] to a file path.
pub fn export_csv_path<P: AsRef<Path>>(path: P, header: &[&str], rows: &[Vec<f64>]) -> Result<usize> {
    let path = path.as_ref();
    let wrap = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    let mut out = BufWriter::new(File::create(path).map_err(wrap)?);
    export_csv(&mut out, header, rows)
}

/// Expand a trajectory into (t, x, v, a, r, residual) rows.
///
/// The delay r and the equation-of-motion residual require retarded
/// coverage reaching two light-crossing times behind a node; nodes without
/// it (the early part of any history) carry NaN in those columns.
pub fn trajectory_records(
    trajectory: &TrajectoryHistory,
    params: &ModelParams,
) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::with_capacity(trajectory.len());
    for s in trajectory.states() {
        let (r, residual) = match solve_retarded_time(trajectory, s.t, params) {
            Ok(sol) => {
                let emit = trajectory.sample(sol.t_r)?;
                (sol.r, eom_residual(&emit, s.x, sol.r, params))
            }
            Err(Error::HistoryTooShort { .. }) | Err(Error::BracketFailure { .. }) => {
                (f64::NAN, f64::NAN)
            }
            Err(e) => return Err(e),
        };
        rows.push(vec![s.t, s.x, s.v, s.a, r, residual]);
    }
    Ok(rows)
}

/// One root in an exported root-set document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootRecord {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    /// Per-delay angular factor η of the mode ladder; present on roots
    /// with positive imaginary part.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_n: Option<f64>,
    pub conjugate_partner: bool,
}

/// The two rectangles of a root search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootSetBoxes {
    /// [re_min, re_max, im_min, im_max] as requested.
    pub search: [f64; 4],
    /// The contour actually integrated for the count certificate.
    pub certification: [f64; 4],
}

/// Serializable form of a certified root set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootSetDocument {
    pub beta: f64,
    pub boxes: RootSetBoxes,
    pub certified_count: i64,
    pub roots: Vec<RootRecord>,
}

impl RootSetDocument {
    pub fn from_root_set(rs: &RootSet) -> Self {
        RootSetDocument {
            beta: rs.beta,
            boxes: RootSetBoxes {
                search: [
                    rs.search_box.re_min,
                    rs.search_box.re_max,
                    rs.search_box.im_min,
                    rs.search_box.im_max,
                ],
                certification: [
                    rs.certification_box.re_min,
                    rs.certification_box.re_max,
                    rs.certification_box.im_min,
                    rs.certification_box.im_max,
                ],
            },
            certified_count: rs.certified_count,
            roots: rs
                .roots
                .iter()
                .map(|r| RootRecord {
                    re: r.re,
                    im: r.im,
                    residual: r.residual,
                    eta_n: (r.im > 0.0).then_some(r.im),
                    conjugate_partner: r.conjugate_partner,
                })
                .collect(),
        }
    }
}

/// Write a root set as pretty-printed JSON.
pub fn export_root_set<W: Write>(out: &mut W, rs: &RootSet) -> Result<()> {
    let wrap = |e: std::io::Error| Error::Io {
        path: "<writer>".into(),
        source: e,
    };
    let doc = RootSetDocument::from_root_set(rs);
    let text = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.write_all(text.as_bytes()).map_err(wrap)?;
    out.write_all(b"\n").map_err(wrap)?;
    out.flush().map_err(wrap)
}

/// [`export_root_set`] to a file path.
pub fn export_root_set_path<P: AsRef<Path>>(path: P, rs: &RootSet) -> Result<()> {
    let path = path.as_ref();
    let wrap = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    let mut out = BufWriter::new(File::create(path).map_err(wrap)?);
    export_root_set(&mut out, rs)
}

/// Parse a root-set document back from JSON text.
pub fn parse_root_set(text: &str) -> Result<RootSetDocument> {
    serde_json::from_str(text).map_err(|e| Error::SchemaMismatch {
        row: e.line(),
        got: e.column(),
        expected: 0,
    })
}
