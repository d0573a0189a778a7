//! Emission and re-parsing of the tool's file formats.
//!
//! Every writer has a matching reader so emitted files round-trip through
//! the tool itself. All numeric output uses Rust's shortest-roundtrip
//! float formatting, which keeps reports byte-stable for identical
//! inputs.

use crate::error::{Error, Result};
use crate::green::GreenPair;
use crate::grid::RadialGrid;
use crate::minimizer::{ConvergenceReport, LambdaEstimate, MinimizeResult};
use crate::profile::Profile;
use crate::shooting::LinniRow;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// `green.csv`: the normalized pair and the Green diagonal per node.
pub fn write_green_csv<W: Write>(mut w: W, pair: &GreenPair) -> Result<()> {
    writeln!(w, "r,xi,zeta,G_diag")?;
    let grid = pair.grid();
    for (i, &r) in grid.nodes().iter().enumerate() {
        let g = r.powi(grid.dimension() as i32 - 1)
            * pair.xi().values[i]
            * pair.zeta().values[i];
        writeln!(
            w,
            "{},{},{},{}",
            r, pair.xi().values[i], pair.zeta().values[i], g
        )?;
    }
    Ok(())
}

/// `F.csv`: landscape samples.
pub fn write_f_csv<W: Write>(mut w: W, rs: &[f64], fs: &[f64]) -> Result<()> {
    writeln!(w, "r,F")?;
    for (r, f) in rs.iter().zip(fs) {
        writeln!(w, "{r},{f}")?;
    }
    Ok(())
}

/// Profile CSV for solve runs: `r,u,v_rescaled`.
pub fn write_profile_csv<W: Write>(
    mut w: W,
    grid: &RadialGrid,
    u: &Profile,
    v: &Profile,
) -> Result<()> {
    writeln!(w, "r,u,v_rescaled")?;
    for (i, &r) in grid.nodes().iter().enumerate() {
        writeln!(w, "{},{},{}", r, u.values[i], v.values[i])?;
    }
    Ok(())
}

/// Sweep table: `lambda,p,found,a_star,peak_radius`.
pub fn write_linni_csv<W: Write>(mut w: W, rows: &[LinniRow]) -> Result<()> {
    writeln!(w, "lambda,p,found,a_star,peak_radius")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            row.lambda,
            row.p,
            row.found,
            row.a_star.map_or(String::new(), |x| x.to_string()),
            row.peak_radius.map_or(String::new(), |x| x.to_string()),
        )?;
    }
    Ok(())
}

/// Generic numeric-table reader for the emitted CSVs; returns the header
/// fields and the numeric rows (empty cells as NaN, booleans as 0/1).
pub fn read_csv<R: BufRead>(reader: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 {
            header = line.split(',').map(|s| s.trim().to_string()).collect();
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(',') {
            let cell = cell.trim();
            let value = if cell.is_empty() {
                f64::NAN
            } else if cell == "true" {
                1.0
            } else if cell == "false" {
                0.0
            } else {
                cell.parse().map_err(|e| Error::Parse {
                    what: "csv".into(),
                    detail: format!("line {}: {e}", lineno + 1),
                })?
            };
            row.push(value);
        }
        if row.len() != header.len() {
            return Err(Error::Parse {
                what: "csv".into(),
                detail: format!("line {}: expected {} columns", lineno + 1, header.len()),
            });
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Per-run solve document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveDoc {
    pub p: f64,
    pub j_p: f64,
    pub lambda_p: f64,
    pub gamma_p: f64,
    pub kkt_residual: f64,
    pub mass_residual: f64,
    pub active_set_size: usize,
    pub iterations: usize,
    pub converged: bool,
    pub sup_dist_to_limit: f64,
    pub lambda_estimates: Option<LambdaEstimate>,
}

impl SolveDoc {
    pub fn from_result(
        res: &MinimizeResult,
        sup_dist_to_limit: f64,
        lambda_estimates: Option<LambdaEstimate>,
    ) -> Self {
        Self {
            p: res.p,
            j_p: res.j_p,
            lambda_p: res.lambda_p,
            gamma_p: res.gamma_p,
            kkt_residual: res.kkt_residual,
            mass_residual: res.mass_residual,
            active_set_size: res.active_set_size,
            iterations: res.iterations,
            converged: res.converged,
            sup_dist_to_limit,
            lambda_estimates,
        }
    }
}

/// Shooting comparison block attached to solve runs when requested.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossCheckDoc {
    pub p: f64,
    pub shot_center: f64,
    pub shot_mismatch: f64,
    pub shot_converged: bool,
    pub sup_dist_rescaled_vs_shot: f64,
}

/// Top-level document for a solve pipeline run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveRunDoc {
    pub runs: Vec<SolveDoc>,
    pub convergence: ConvergenceReport,
    pub cross_checks: Vec<CrossCheckDoc>,
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse {
        what: "json".into(),
        detail: e.to_string(),
    })
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        what: "json".into(),
        detail: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::landscape;

    #[test]
    fn green_csv_roundtrip() {
        let grid = Arc::clone(&fixtures_grid());
        let pair = fixtures::constant_pair(grid).unwrap();
        let mut buf = Vec::new();
        write_green_csv(&mut buf, &pair).unwrap();
        let (header, rows) = read_csv(&buf[..]).unwrap();
        assert_eq!(header, ["r", "xi", "zeta", "G_diag"]);
        assert_eq!(rows.len(), pair.grid().len());
        // last row is the boundary node
        let last = rows.last().unwrap();
        assert_eq!(last[0], 1.0);
        assert!((last[3] - pair.green_diag(1.0)).abs() < 1e-12);
    }

    fn fixtures_grid() -> Arc<crate::grid::RadialGrid> {
        use std::sync::OnceLock;
        static GRID: OnceLock<Arc<crate::grid::RadialGrid>> = OnceLock::new();
        Arc::clone(GRID.get_or_init(fixtures::standard_grid))
    }

    use std::sync::Arc;

    #[test]
    fn f_csv_roundtrip_and_landscape_json() {
        let grid = fixtures_grid();
        let pair = fixtures::constant_pair(Arc::clone(&grid)).unwrap();
        let (rs, fs) = landscape::f_samples(&pair, 0.05);
        let mut buf = Vec::new();
        write_f_csv(&mut buf, &rs, &fs).unwrap();
        let (header, rows) = read_csv(&buf[..]).unwrap();
        assert_eq!(header, ["r", "F"]);
        assert_eq!(rows.len(), rs.len());

        let report = landscape::landscape_report(&pair, 0.05, &[]).unwrap();
        let text = to_json_pretty(&report).unwrap();
        let back: landscape::LandscapeReport = from_json(&text).unwrap();
        assert_eq!(back.minima.len(), report.minima.len());
        // byte-identical on re-serialization
        assert_eq!(to_json_pretty(&back).unwrap(), text);
    }

    #[test]
    fn linni_csv_handles_missing_cells() {
        let rows = vec![
            crate::shooting::LinniRow {
                lambda: 0.001,
                p: 10.0,
                found: false,
                a_star: None,
                peak_radius: None,
            },
            crate::shooting::LinniRow {
                lambda: 10.0,
                p: 10.0,
                found: true,
                a_star: Some(2.4),
                peak_radius: Some(0.1),
            },
        ];
        let mut buf = Vec::new();
        write_linni_csv(&mut buf, &rows).unwrap();
        let (header, parsed) = read_csv(&buf[..]).unwrap();
        assert_eq!(header[0], "lambda");
        assert!(parsed[0][3].is_nan());
        assert_eq!(parsed[1][2], 1.0);
    }
}
