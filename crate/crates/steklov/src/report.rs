//! Verification reports and their JSON / CSV forms.
//!
//! Field order is the declaration order below. Computed reals are rounded to
//! 12 significant digits before they are stored, so a report read back from
//! its JSON compares equal to the original.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::spec::SpecFile;

pub const SCHEMA_VERSION: &str = "1";

/// How the diameter entering the bound is measured.
pub const DIAMETER_CONVENTION: &str = "closure: maximum ambient distance between boundary vertices";

/// Columns of the corpus CSV, in order.
pub const CSV_HEADER: [&str; 10] =
    ["name", "sigma1_fem", "sigma1_star", "C", "ratio", "q41", "q42", "q43", "pass", "error"];

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub name: String,
    pub spec: SpecFile,
    /// Richardson-extrapolated first nonzero Steklov eigenvalue.
    pub sigma1_fem: f64,
    /// `|sigma_L - sigma_{L-1}| / 3` for the two finest levels.
    pub sigma1_error: f64,
    pub volume: f64,
    pub diameter: f64,
    pub diameter_convention: String,
    pub ball_radius_star: f64,
    pub sigma1_star: f64,
    pub constant_c: f64,
    pub bound: f64,
    pub ratio: f64,
    /// Relative slack `max(1e-3, 3 sigma1_error / sigma1_fem)`.
    pub slack: f64,
    pub pass: bool,
    pub chain: ChainReport,
    pub mesh: MeshStats,
    pub refinements: Vec<LevelReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub q41: f64,
    pub q42: f64,
    pub q43: f64,
    /// `sigma1_fem <= q41 <= q42 <= q43 ~ C sigma1_star`, each up to the slack.
    pub ordering_ok: bool,
    pub center: [f64; 2],
    pub center_residual: f64,
    pub center_tolerance: f64,
    pub center_iterations: usize,
    pub h_domain: f64,
    pub g_domain: f64,
    pub h_star: f64,
    pub g_star: f64,
    pub h_rearrangement_gap: f64,
    pub g_rearrangement_gap: f64,
}

/// The finest mesh, on which volume, diameter and the chain are evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    pub h: f64,
    pub vertices: usize,
    pub triangles: usize,
    pub boundary_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: usize,
    pub h: f64,
    pub vertices: usize,
    pub boundary_vertices: usize,
    pub sigma1: f64,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String, HarnessError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<(), HarnessError> {
        let text = self.to_json()?;
        let io = |source| HarnessError::Io { path: path.to_path_buf(), source };
        File::create(path).and_then(|mut f| f.write_all(text.as_bytes())).map_err(io)
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            name: self.name.clone(),
            sigma1_fem: Some(self.sigma1_fem),
            sigma1_star: Some(self.sigma1_star),
            constant_c: Some(self.constant_c),
            ratio: Some(self.ratio),
            q41: Some(self.chain.q41),
            q42: Some(self.chain.q42),
            q43: Some(self.chain.q43),
            pass: Some(self.pass && self.chain.ordering_ok),
            error: String::new(),
        }
    }
}

/// One corpus line; numeric fields are empty when the run failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub name: String,
    pub sigma1_fem: Option<f64>,
    pub sigma1_star: Option<f64>,
    #[serde(rename = "C")]
    pub constant_c: Option<f64>,
    pub ratio: Option<f64>,
    pub q41: Option<f64>,
    pub q42: Option<f64>,
    pub q43: Option<f64>,
    pub pass: Option<bool>,
    pub error: String,
}

impl CsvRow {
    pub fn failed(name: String, error: String) -> Self {
        CsvRow {
            name,
            sigma1_fem: None,
            sigma1_star: None,
            constant_c: None,
            ratio: None,
            q41: None,
            q42: None,
            q43: None,
            pass: None,
            error,
        }
    }
}

pub fn write_csv(rows: &[CsvRow], path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    write_csv_to(rows, file)
}

pub fn write_csv_to<W: Write>(rows: &[CsvRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| HarnessError::Csv(e.into()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(sig12(std::f64::consts::PI), 3.14159265359);
        assert_eq!(sig12(-1.0 / 3.0), -0.333333333333);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(sig12(2.0f64.sqrt())), sig12(2.0f64.sqrt()));
    }

    #[test]
    fn csv_header_and_failed_row() {
        let mut out = Vec::new();
        write_csv_to(&[CsvRow::failed("bad".into(), "invalid spec: x".into())], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("name,sigma1_fem,sigma1_star,C,ratio,q41,q42,q43,pass,error"));
        assert_eq!(lines.next(), Some("bad,,,,,,,,,invalid spec: x"));
    }
}
