//! Run configuration: JSON file plus command-line overrides (flags win).

use anyhow::{anyhow, bail, Context, Result};
use radgreen::green::BoundarySpec;
use radgreen::grid::RadialGrid;
use radgreen::landscape::ConstraintBox;
use radgreen::potential::PotentialSpec;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: Option<u32>,
    pub bc: Option<String>,
    pub potential: Option<PotentialSpec>,
    pub grid: Option<usize>,
    pub eps: Option<f64>,
    pub p_list: Option<Vec<f64>>,
    pub r_lo: Option<f64>,
    pub tol: Option<f64>,
    #[serde(rename = "box")]
    pub box_override: Option<BoxOverride>,
    pub rbar: Option<f64>,
    pub lambdas: Option<Vec<f64>>,
    pub cross_check: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxOverride {
    pub r1: f64,
    pub r2: Option<f64>,
    pub c: Option<f64>,
    pub target: Option<f64>,
}

/// Fully resolved configuration used by the commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: u32,
    pub bc: BoundarySpec,
    pub potential: PotentialSpec,
    pub grid_points: usize,
    pub eps: f64,
    pub p_list: Vec<f64>,
    pub r_lo: f64,
    pub tol: f64,
    pub box_override: Option<BoxOverride>,
    pub rbar: Option<f64>,
    pub lambdas: Vec<f64>,
    pub cross_check: bool,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn grid(&self) -> Result<Arc<RadialGrid>> {
        Ok(Arc::new(RadialGrid::new(self.n, self.grid_points, self.eps)?))
    }

    /// The fields that determine outputs, echoed into every run directory.
    pub fn echo(&self) -> ConfigFile {
        ConfigFile {
            n: Some(self.n),
            bc: Some(self.bc.name().to_string()),
            potential: Some(self.potential.clone()),
            grid: Some(self.grid_points),
            eps: Some(self.eps),
            p_list: Some(self.p_list.clone()),
            r_lo: Some(self.r_lo),
            tol: Some(self.tol),
            box_override: self.box_override.clone(),
            rbar: self.rbar,
            lambdas: Some(self.lambdas.clone()),
            cross_check: Some(self.cross_check),
        }
    }
}

/// Shorthand grammar: `const:LAMBDA`, `bump:BASE,AMP,CENTER,WIDTH`,
/// `file:PATH`.
pub fn parse_potential(spec: &str) -> Result<PotentialSpec> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("potential `{spec}`: expected const:, bump: or file:"))?;
    match kind {
        "const" => {
            let lambda: f64 = rest
                .parse()
                .with_context(|| format!("potential `{spec}`: bad lambda"))?;
            Ok(PotentialSpec::constant(lambda)?)
        }
        "bump" => {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 4 {
                bail!("potential `{spec}`: bump needs BASE,AMP,CENTER,WIDTH");
            }
            let vals: Vec<f64> = parts
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .with_context(|| format!("potential `{spec}`: bad bump parameter"))?;
            Ok(PotentialSpec::bump(vals[0], vals[1], vals[2], vals[3])?)
        }
        "file" => {
            let path = Path::new(rest);
            PotentialSpec::from_csv_path(path)
                .with_context(|| format!("potential file {}", path.display()))
        }
        other => bail!("potential `{spec}`: unknown kind `{other}`"),
    }
}

pub fn parse_bc(s: &str) -> Result<BoundarySpec> {
    match s {
        "neumann" => Ok(BoundarySpec::Neumann),
        "dirichlet" => Ok(BoundarySpec::Dirichlet),
        other => bail!("boundary condition must be neumann or dirichlet, got `{other}`"),
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .with_context(|| format!("bad list entry `{x}`"))
        })
        .collect()
}

pub struct Overrides {
    pub n: Option<u32>,
    pub bc: Option<String>,
    pub potential: Option<String>,
    pub grid: Option<usize>,
    pub eps: Option<f64>,
    pub p_list: Option<String>,
    pub r_lo: Option<f64>,
    pub tol: Option<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub c: Option<f64>,
    pub rbar: Option<f64>,
    pub lambdas: Option<String>,
    pub cross_check: bool,
    pub out: PathBuf,
}

/// Resolve file + flags into a validated configuration; flags win.
pub fn resolve(config_path: Option<&Path>, ov: Overrides) -> Result<RunConfig> {
    let file: ConfigFile = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => ConfigFile::default(),
    };

    let n = ov.n.or(file.n).unwrap_or(3);
    let bc_name = ov.bc.or(file.bc).unwrap_or_else(|| "neumann".into());
    let bc = parse_bc(&bc_name)?;
    let potential = match ov.potential {
        Some(ref s) => parse_potential(s)?,
        None => file
            .potential
            .unwrap_or(PotentialSpec::Constant { lambda: 1.0 }),
    };
    let grid_points = ov.grid.or(file.grid).unwrap_or(2001);
    let eps = ov.eps.or(file.eps).unwrap_or(1e-6);
    let p_list = match ov.p_list {
        Some(ref s) => parse_list(s)?,
        None => file.p_list.unwrap_or_default(),
    };
    let r_lo = ov.r_lo.or(file.r_lo).unwrap_or(0.05);
    let tol = ov.tol.or(file.tol).unwrap_or(1e-6);
    let lambdas = match ov.lambdas {
        Some(ref s) => parse_list(s)?,
        None => file
            .lambdas
            .unwrap_or_else(|| (0..=10).map(|i| 10f64.powf(-3.0 + 0.5 * i as f64)).collect()),
    };

    let mut box_override = file.box_override;
    if ov.r1.is_some() || ov.r2.is_some() || ov.c.is_some() {
        let base = box_override.take();
        box_override = Some(BoxOverride {
            r1: ov
                .r1
                .or(base.as_ref().map(|b| b.r1))
                .ok_or_else(|| anyhow!("box override needs --r1"))?,
            r2: ov.r2.or(base.as_ref().and_then(|b| b.r2)),
            c: ov.c.or(base.as_ref().and_then(|b| b.c)),
            target: base.as_ref().and_then(|b| b.target),
        });
    }
    let rbar = ov.rbar.or(file.rbar);

    // validation shared by all commands
    for &p in &p_list {
        if !(p > 1.0) {
            bail!("exponent p = {p} must be > 1");
        }
    }
    let target_requested = rbar.or(box_override.as_ref().and_then(|b| b.target));
    if bc == BoundarySpec::Dirichlet && target_requested.map_or(false, |t| t >= 1.0) {
        bail!("a boundary target (rbar = 1) is not admissible under Dirichlet conditions");
    }

    Ok(RunConfig {
        n,
        bc,
        potential,
        grid_points,
        eps,
        p_list,
        r_lo,
        tol,
        box_override,
        rbar,
        lambdas,
        cross_check: ov.cross_check || file.cross_check.unwrap_or(false),
        out: ov.out,
    })
}

/// Resolve the constraint box: explicit override wins, otherwise the
/// landscape minima are scanned and the minimum nearest to `rbar` (or the
/// lowest-F one) is boxed.
pub fn resolve_box(
    cfg: &RunConfig,
    pair: &radgreen::green::GreenPair,
) -> Result<ConstraintBox> {
    if let Some(b) = &cfg.box_override {
        let r2 = b.r2.unwrap_or(1.0);
        let target = b.target.unwrap_or(if r2 >= 1.0 && cfg.bc == BoundarySpec::Neumann {
            1.0
        } else {
            0.5 * (b.r1 + r2)
        });
        let mut bx = ConstraintBox::new(b.r1, r2, b.c.unwrap_or(0.5), target)?;
        if b.c.is_none() {
            let m = bx.obstacle_ratio(pair)?;
            if m >= 1.0 {
                bail!("obstacle ratio {m} >= 1: the pair violates the maximum principle");
            }
            bx.c = 0.5 * (1.0 + m);
        }
        bx.validate_against(pair)?;
        return Ok(bx);
    }
    let minima = radgreen::landscape::find_local_minima(pair, cfg.r_lo)?;
    if minima.is_empty() {
        bail!("no landscape minima found; supply --r1/--r2/--c explicitly");
    }
    let min = match cfg.rbar {
        Some(target) => minima
            .iter()
            .min_by(|a, b| {
                (a.location - target)
                    .abs()
                    .total_cmp(&(b.location - target).abs())
            })
            .unwrap(),
        None => minima
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .unwrap(),
    };
    Ok(radgreen::landscape::build_constraint_box(pair, min)?)
}
