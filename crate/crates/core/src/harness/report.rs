//! Machine-readable verification reports.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bumped whenever a field is added, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Outcome of one identity over all sampled points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    pub description: String,
    pub points_sampled: usize,
    /// Points where the identity does not apply (degenerate field, vanishing
    /// component below its floor).
    pub points_skipped: usize,
    pub max_relative_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub scenario: String,
    pub seed: u64,
    pub points: usize,
    pub order: usize,
    pub degenerate_points: usize,
    pub records: Vec<IdentityRecord>,
    pub overall_pass: bool,
    /// Excluded from determinism comparisons.
    pub wall_time_seconds: f64,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers")
    }

    pub fn from_json(text: &str) -> Result<VerificationReport> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("invalid report: {e}")))
    }

    pub fn failed(&self) -> impl Iterator<Item = &IdentityRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// The report with its wall time zeroed, for comparisons.
    pub fn without_timing(&self) -> VerificationReport {
        VerificationReport {
            wall_time_seconds: 0.0,
            ..self.clone()
        }
    }

    /// Human-readable table, one line per identity.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "scenario {} | seed {} | {} points | order {} | {} degenerate\n",
            self.scenario, self.seed, self.points, self.order, self.degenerate_points
        );
        for r in &self.records {
            out.push_str(&format!(
                "{:<4} {:<28} max {:>10.3e}  tol {:>8.1e}  sampled {:>4}  skipped {:>4}\n",
                if r.pass { "ok" } else { "FAIL" },
                r.id,
                r.max_relative_residual,
                r.tolerance,
                r.points_sampled,
                r.points_skipped
            ));
        }
        out.push_str(if self.overall_pass { "PASS\n" } else { "FAIL\n" });
        out
    }
}

/// One identity evaluated at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub point_index: usize,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub identity: String,
    /// Empty when skipped.
    pub relative_residual: Option<f64>,
    pub status: String,
}

pub fn write_csv<W: Write>(rows: &[PointRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.into(),
            scenario: "constant_E1".into(),
            seed: 7,
            points: 2,
            order: 6,
            degenerate_points: 0,
            records: vec![IdentityRecord {
                id: "elimination_b".into(),
                description: "d".into(),
                points_sampled: 2,
                points_skipped: 0,
                max_relative_residual: 1.234_567_890_123_456_7e-15,
                tolerance: 1e-10,
                pass: true,
            }],
            overall_pass: true,
            wall_time_seconds: 0.125,
        }
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let r = sample();
        assert_eq!(VerificationReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rows = vec![PointRow {
            point_index: 0,
            t: 0.0,
            x: 1.0,
            y: 0.0,
            z: 0.0,
            identity: "elimination_b".into(),
            relative_residual: None,
            status: "skipped".into(),
        }];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("point_index,t,x,y,z,identity,relative_residual,status\n"));
        assert!(text.contains("0,0.0,1.0,0.0,0.0,elimination_b,,skipped"));
    }
}
