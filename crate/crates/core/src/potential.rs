//! Radial potentials V(r) >= 0 on [0, 1].

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use serde::{Deserialize, Serialize};
use std::io::BufRead;

/// A nonnegative, not identically zero radial potential.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// V(r) = lambda.
    Constant { lambda: f64 },
    /// V(r) = base + amplitude * exp(-((r - center)/width)^2).
    Bump {
        base: f64,
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// Monotone-cubic interpolation of sample pairs covering [0, 1].
    Tabulated { samples: Vec<(f64, f64)> },
}

impl PotentialSpec {
    pub fn constant(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidPotential(format!(
                "constant potential needs lambda > 0, got {lambda}"
            )));
        }
        Ok(Self::Constant { lambda })
    }

    pub fn bump(base: f64, amplitude: f64, center: f64, width: f64) -> Result<Self> {
        if base < 0.0 || !base.is_finite() {
            return Err(Error::InvalidPotential(format!("bump base {base} must be >= 0")));
        }
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::InvalidPotential(format!(
                "bump amplitude {amplitude} must be > 0"
            )));
        }
        if !(center > 0.0 && center < 1.0) {
            return Err(Error::InvalidPotential(format!(
                "bump center {center} must lie in (0, 1)"
            )));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidPotential(format!("bump width {width} must be > 0")));
        }
        Ok(Self::Bump {
            base,
            amplitude,
            center,
            width,
        })
    }

    /// Build from (r, V) samples; validates coverage of [0, 1], ordering,
    /// nonnegativity of the data and of the interpolant.
    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidPotential(
                "tabulated potential needs at least two samples".into(),
            ));
        }
        if !samples.windows(2).all(|p| p[0].0 < p[1].0) {
            return Err(Error::InvalidPotential(
                "tabulated samples must be strictly increasing in r".into(),
            ));
        }
        let (r0, rn) = (samples[0].0, samples.last().unwrap().0);
        if r0.abs() > 1e-9 || (rn - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidPotential(format!(
                "samples must cover [0, 1]; got [{r0}, {rn}]"
            )));
        }
        if samples.iter().any(|&(_, v)| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidPotential("sample values must be >= 0".into()));
        }
        if samples.iter().all(|&(_, v)| v == 0.0) {
            return Err(Error::InvalidPotential("potential is identically zero".into()));
        }
        let spec = Self::Tabulated { samples };
        // Monotone-cubic interpolation does not overshoot the local data
        // range by construction; a fine sweep guards against data that
        // still drives the interpolant below zero.
        for i in 0..=4000 {
            let r = i as f64 / 4000.0;
            if spec.eval_raw(r) < -1e-12 {
                return Err(Error::InvalidPotential(format!(
                    "interpolant dips below zero near r = {r}"
                )));
            }
        }
        Ok(spec)
    }

    /// Parse the CSV interface: header `r,V`, rows sorted by r.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut samples = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if lineno == 0 {
                let hdr: Vec<&str> = line.split(',').map(str::trim).collect();
                if hdr != ["r", "V"] {
                    return Err(Error::Parse {
                        what: "potential csv".into(),
                        detail: format!("expected header `r,V`, got `{line}`"),
                    });
                }
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 2 {
                return Err(Error::Parse {
                    what: "potential csv".into(),
                    detail: format!("line {}: expected 2 columns", lineno + 1),
                });
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse().map_err(|e| Error::Parse {
                    what: "potential csv".into(),
                    detail: format!("line {}: {e}", lineno + 1),
                })
            };
            samples.push((parse(cols[0])?, parse(cols[1])?));
        }
        Self::tabulated(samples)
    }

    pub fn from_csv_path(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv(std::io::BufReader::new(file))
    }

    /// V(r); clamps interpolation roundoff at zero.
    pub fn eval(&self, r: f64) -> f64 {
        self.eval_raw(r).max(0.0)
    }

    fn eval_raw(&self, r: f64) -> f64 {
        match self {
            Self::Constant { lambda } => *lambda,
            Self::Bump {
                base,
                amplitude,
                center,
                width,
            } => {
                let t = (r - center) / width;
                base + amplitude * (-t * t).exp()
            }
            Self::Tabulated { samples } => monotone_cubic_eval(samples, r),
        }
    }

    /// Checks V >= 0 and V not identically zero over the grid.
    pub fn validate_on(&self, grid: &RadialGrid) -> Result<()> {
        let mut max = 0.0_f64;
        for &r in grid.nodes() {
            let v = self.eval(r);
            if v < 0.0 || !v.is_finite() {
                return Err(Error::InvalidPotential(format!("V({r}) = {v}")));
            }
            max = max.max(v);
        }
        if max <= 0.0 {
            return Err(Error::InvalidPotential(
                "potential vanishes on the whole grid".into(),
            ));
        }
        Ok(())
    }
}

/// Fritsch-Carlson monotone cubic Hermite interpolation.
fn monotone_cubic_eval(samples: &[(f64, f64)], r: f64) -> f64 {
    let n = samples.len();
    if r <= samples[0].0 {
        return samples[0].1;
    }
    if r >= samples[n - 1].0 {
        return samples[n - 1].1;
    }
    // Secant slopes.
    let mut delta = Vec::with_capacity(n - 1);
    for w in samples.windows(2) {
        delta.push((w[1].1 - w[0].1) / (w[1].0 - w[0].0));
    }
    // Limited endpoint tangents.
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for i in 1..n - 1 {
        m[i] = if delta[i - 1] * delta[i] <= 0.0 {
            0.0
        } else {
            0.5 * (delta[i - 1] + delta[i])
        };
    }
    for i in 0..n - 1 {
        if delta[i] == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
        } else {
            let a = m[i] / delta[i];
            let b = m[i + 1] / delta[i];
            let s = a * a + b * b;
            if s > 9.0 {
                let tau = 3.0 / s.sqrt();
                m[i] = tau * a * delta[i];
                m[i + 1] = tau * b * delta[i];
            }
        }
    }
    let k = match samples.binary_search_by(|&(x, _)| x.partial_cmp(&r).unwrap()) {
        Ok(i) => return samples[i].1,
        Err(i) => i - 1,
    };
    let h = samples[k + 1].0 - samples[k].0;
    let t = (r - samples[k].0) / h;
    let (t2, t3) = (t * t, t * t * t);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * samples[k].1 + h10 * h * m[k] + h01 * samples[k + 1].1 + h11 * h * m[k + 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_and_bump_eval() {
        let v = PotentialSpec::constant(2.5).unwrap();
        assert_eq!(v.eval(0.3), 2.5);
        let b = PotentialSpec::bump(1.0, 3.0, 0.5, 0.1).unwrap();
        assert_relative_eq!(b.eval(0.5), 4.0, max_relative = 1e-12);
        assert!(b.eval(0.0) >= 1.0);
    }

    #[test]
    fn tabulated_interpolates_and_preserves_sign() {
        let samples = vec![(0.0, 1.0), (0.25, 0.0), (0.5, 0.0), (0.75, 2.0), (1.0, 3.0)];
        let v = PotentialSpec::tabulated(samples).unwrap();
        assert_relative_eq!(v.eval(0.0), 1.0);
        assert_relative_eq!(v.eval(0.75), 2.0);
        // flat-zero stretch must stay at zero, not undershoot
        assert!(v.eval(0.375) >= 0.0);
        assert!(v.eval(0.375) < 1e-12);
        for i in 0..=1000 {
            assert!(v.eval(i as f64 / 1000.0) >= 0.0);
        }
    }

    #[test]
    fn tabulated_rejects_bad_data() {
        assert!(PotentialSpec::tabulated(vec![(0.0, 1.0)]).is_err());
        assert!(PotentialSpec::tabulated(vec![(0.1, 1.0), (1.0, 1.0)]).is_err());
        assert!(PotentialSpec::tabulated(vec![(0.0, 1.0), (0.9, 1.0)]).is_err());
        assert!(PotentialSpec::tabulated(vec![(0.0, -1.0), (1.0, 1.0)]).is_err());
        assert!(PotentialSpec::tabulated(vec![(0.0, 0.0), (1.0, 0.0)]).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let csv = "r,V\n0.0,1.0\n0.5,2.0\n1.0,0.5\n";
        let v = PotentialSpec::from_csv(csv.as_bytes()).unwrap();
        assert_relative_eq!(v.eval(0.5), 2.0);
        assert!(PotentialSpec::from_csv("x,y\n0,1\n1,1\n".as_bytes()).is_err());
    }
}
