//! The landscape function F(r) = |∂B_1| r^{n-1} / G(r,r), its minima,
//! the boundary-descent and reflection identities, and the monotonicity
//! flag for the Dirichlet nonexistence criterion.

use crate::error::{Error, Result};
use crate::green::{BoundarySpec, GreenPair};
use crate::potential::PotentialSpec;
use crate::profile::energy_q;
use serde::{Deserialize, Serialize};

/// Default inner cutoff for minima searches. F tends to 0 at the origin
/// (zeta is unbounded there), so global scans over (0, 1] are ill-posed.
pub const DEFAULT_R_LO: f64 = 0.05;

/// Absolute F-variation under which consecutive samples count as a plateau.
const PLATEAU_TOL: f64 = 1e-10;

/// F(r) = |∂B_1| / (xi(r) zeta(r)).
///
/// Under Dirichlet conditions F(1) = +infinity (zeta(1) = 0); the value is
/// reported as such rather than as an error.
pub fn eval_f(pair: &GreenPair, r: f64) -> Result<f64> {
    let eps = pair.grid().eps();
    if !(r >= eps && r <= 1.0) {
        return Err(Error::OutOfDomain(r, eps));
    }
    let denom = pair.xi_at(r) * pair.zeta_at(r);
    if denom <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(pair.grid().sphere_area() / denom)
}

/// F'(r) from the factorized form: F' = -F (xi' zeta + xi zeta')/(xi zeta).
/// Uses only first derivatives of the pair.
pub fn eval_f_prime(pair: &GreenPair, r: f64) -> f64 {
    let (xi, ze) = (pair.xi_at(r), pair.zeta_at(r));
    let s = pair.xi_deriv_at(r) * ze + xi * pair.zeta_deriv_at(r);
    -pair.grid().sphere_area() * s / (xi * xi * ze * ze)
}

/// F_p(r) = r^{(p-1)(n-1)/(p+3)} / G(r,r), the finite-p landscape.
pub fn eval_fp(pair: &GreenPair, r: f64, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidP(p));
    }
    let eps = pair.grid().eps();
    if !(r >= eps && r < 1.0) {
        return Err(Error::OutOfDomain(r, eps));
    }
    let n = pair.grid().dimension() as f64;
    let expo = (p - 1.0) / (p + 3.0) * (n - 1.0);
    Ok(r.powf(expo) / pair.green_diag(r))
}

/// |∂B_1| F_p(r); converges pointwise to F(r) as p grows.
pub fn eval_fp_scaled(pair: &GreenPair, r: f64, p: f64) -> Result<f64> {
    Ok(pair.grid().sphere_area() * eval_fp(pair, r, p)?)
}

/// Relative residual of the energy identity F(r) = Q(G(.,r)/G(r,r)).
///
/// The left side comes from the pointwise factorization, the right side
/// from quadrature of the normalized Green profile; the profile's kink at
/// r is split inside the energy quadrature.
pub fn check_f_energy_identity(pair: &GreenPair, v: &PotentialSpec, r: f64) -> Result<f64> {
    let f = eval_f(pair, r)?;
    if !f.is_finite() {
        return Err(Error::OutOfDomain(r, pair.grid().eps()));
    }
    let profile = pair.normalized_profile(r)?;
    let q = energy_q(pair.grid(), v, &profile)?;
    Ok((q - f).abs() / f)
}

/// A located local minimum of F.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimumRecord {
    pub location: f64,
    pub value: f64,
    /// Interval on which the minimum is the strict global minimum of F.
    pub bracket: (f64, f64),
    /// True when the minimum sits at r = 1 (Neumann boundary descent).
    pub boundary: bool,
}

/// One-sided slope data at r = 1 (Neumann).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundaryDescent {
    /// Finite-difference slope over the last 1% of radius.
    pub fd_slope: f64,
    /// -|∂B_1| (xi'(1)/xi(1))^2, the exact one-sided limit.
    pub analytic_slope: f64,
}

impl BoundaryDescent {
    /// Both slopes negative and within 5% of each other.
    pub fn is_consistent(&self) -> bool {
        self.fd_slope < 0.0
            && self.analytic_slope < 0.0
            && ((self.fd_slope - self.analytic_slope) / self.analytic_slope).abs() <= 0.05
    }
}

/// One-sided derivatives of the normalized Green function at a critical
/// point, which the reflection identity pins at +1/2 and -1/2.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReflectionValues {
    pub radius: f64,
    pub left: f64,
    pub right: f64,
}

/// Per-exponent monotonicity verdict for the Dirichlet landscape.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatrinaVerdict {
    pub p: f64,
    /// "increasing", "decreasing" or "none".
    pub monotone: String,
    /// True when F_p is strictly monotone (nonconstant): no positive
    /// solution is expected for this p.
    pub no_solution_expected: bool,
}

/// Everything the landscape analysis produces for one pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LandscapeReport {
    pub n: u32,
    pub boundary: String,
    pub r_lo: f64,
    pub minima: Vec<MinimumRecord>,
    pub f_samples: FSamples,
    pub fprime_at_1: Option<BoundaryDescent>,
    pub catrina: Vec<CatrinaVerdict>,
    pub reflection: Vec<ReflectionValues>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FSamples {
    pub r: Vec<f64>,
    pub f: Vec<f64>,
}

/// Nodal F samples on [r_lo, 1], excluding r = 1 under Dirichlet.
pub fn f_samples(pair: &GreenPair, r_lo: f64) -> (Vec<f64>, Vec<f64>) {
    let area = pair.grid().sphere_area();
    let mut rs = Vec::new();
    let mut fs = Vec::new();
    let last = pair.grid().len() - 1;
    for (i, &r) in pair.grid().nodes().iter().enumerate() {
        if r < r_lo {
            continue;
        }
        if pair.boundary() == BoundarySpec::Dirichlet && i == last {
            continue;
        }
        rs.push(r);
        fs.push(area / (pair.xi().values[i] * pair.zeta().values[i]));
    }
    (rs, fs)
}

fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

fn scan_plateaus(rs: &[f64], fs: &[f64]) -> Result<()> {
    let mut run = 1usize;
    for i in 1..fs.len() {
        if (fs[i] - fs[i - 1]).abs() < PLATEAU_TOL {
            run += 1;
            if run >= 3 {
                return Err(Error::Plateau {
                    nodes: run,
                    radius: rs[i],
                });
            }
        } else {
            run = 1;
        }
    }
    Ok(())
}

/// Scan F for local minima on [r_lo, 1], refine them by golden-section
/// search, and classify the Neumann endpoint by its one-sided slope.
///
/// The bracket attached to each record spans to the neighboring maxima
/// (or scan ends), on which the minimum is the strict global one.
pub fn find_local_minima(pair: &GreenPair, r_lo: f64) -> Result<Vec<MinimumRecord>> {
    let (rs, fs) = f_samples(pair, r_lo);
    if rs.len() < 5 {
        return Err(Error::InvalidGrid(
            "landscape scan needs at least 5 samples above r_lo".into(),
        ));
    }
    scan_plateaus(&rs, &fs)?;

    let m = rs.len();
    let mut minima = Vec::new();

    // interior sign changes of the discrete slope: down then up
    for i in 1..m - 1 {
        if fs[i] < fs[i - 1] && fs[i] <= fs[i + 1] && fs[i + 1] > fs[i] {
            let refined = golden_section_min(
                |r| eval_f(pair, r).unwrap_or(f64::INFINITY),
                rs[i - 1],
                rs[i + 1],
                1e-7,
            );
            let value = eval_f(pair, refined)?;
            let bracket = bracket_of(&rs, &fs, i);
            minima.push(MinimumRecord {
                location: refined,
                value,
                bracket,
                boundary: false,
            });
        }
    }

    // Neumann boundary: r = 1 is a local minimum when F'(1-) < 0
    if pair.boundary() == BoundarySpec::Neumann {
        let slope = boundary_descent_check(pair)?;
        if slope.fd_slope < 0.0 {
            let bracket = bracket_of(&rs, &fs, m - 1);
            minima.push(MinimumRecord {
                location: 1.0,
                value: *fs.last().unwrap(),
                bracket,
                boundary: true,
            });
        }
    }

    // keep brackets pairwise disjoint
    let h = pair.grid().spacing();
    for i in 1..minima.len() {
        if minima[i].bracket.0 < minima[i - 1].bracket.1 {
            minima[i].bracket.0 = minima[i - 1].bracket.1 + h;
        }
    }
    Ok(minima)
}

/// Walk from sample index `i` to the adjacent local maxima (or scan ends).
fn bracket_of(rs: &[f64], fs: &[f64], i: usize) -> (f64, f64) {
    let mut a = i;
    while a > 0 && fs[a - 1] > fs[a] {
        a -= 1;
    }
    let mut b = i;
    while b + 1 < fs.len() && fs[b + 1] > fs[b] {
        b += 1;
    }
    (rs[a], rs[b])
}

/// One-sided slope of F at r = 1 for Neumann pairs.
pub fn boundary_descent_check(pair: &GreenPair) -> Result<BoundaryDescent> {
    if pair.boundary() != BoundarySpec::Neumann {
        return Err(Error::WrongBoundary {
            expected: "neumann",
            actual: pair.boundary().name(),
        });
    }
    let f1 = eval_f(pair, 1.0)?;
    let f99 = eval_f(pair, 0.99)?;
    let fd_slope = (f1 - f99) / 0.01;
    let xi1 = pair.xi_at(1.0);
    let dxi1 = pair.xi_deriv_at(1.0);
    let ratio = dxi1 / xi1;
    let analytic_slope = -pair.grid().sphere_area() * ratio * ratio;
    Ok(BoundaryDescent {
        fd_slope,
        analytic_slope,
    })
}

/// Interior critical points of F in (r_lo, 1), located by bisection on
/// s(r) = xi' zeta + xi zeta' (the numerator of -F'/F, first derivatives
/// only).
pub fn critical_points(pair: &GreenPair, r_lo: f64) -> Vec<f64> {
    let s = |r: f64| {
        pair.xi_deriv_at(r) * pair.zeta_at(r) + pair.xi_at(r) * pair.zeta_deriv_at(r)
    };
    let nodes = pair.grid().nodes();
    let last = nodes.len() - 1;
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (i, &r) in nodes.iter().enumerate() {
        if r < r_lo || (pair.boundary() == BoundarySpec::Dirichlet && i == last) || r >= 1.0 {
            continue;
        }
        let sr = s(r);
        if let Some((rp, sp)) = prev {
            if sp == 0.0 {
                roots.push(rp);
            } else if sp * sr < 0.0 {
                let (mut a, mut b) = (rp, r);
                let mut sa = sp;
                for _ in 0..80 {
                    let mid = 0.5 * (a + b);
                    let sm = s(mid);
                    if sa * sm <= 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                        sa = sm;
                    }
                }
                roots.push(0.5 * (a + b));
            }
        }
        prev = Some((r, sr));
    }
    roots
}

/// Tolerance on |F'(r)| below which a radius counts as critical.
pub const CRITICALITY_TOL: f64 = 1e-6;

/// One-sided derivatives of G(., rbar) at a critical point rbar of F.
///
/// Returns (rbar^{n-1} xi'(rbar) zeta(rbar), rbar^{n-1} xi(rbar) zeta'(rbar));
/// at a critical point these are +1/2 and -1/2, and their difference is the
/// normalized conserved product (= 1) at every radius.
pub fn reflection_check(pair: &GreenPair, rbar: f64) -> Result<ReflectionValues> {
    let fprime = eval_f_prime(pair, rbar);
    if fprime.abs() > CRITICALITY_TOL {
        return Err(Error::NotCritical {
            radius: rbar,
            fprime,
            tol: CRITICALITY_TOL,
        });
    }
    Ok(reflection_values(pair, rbar))
}

/// The same one-sided derivative pair without the criticality gate
/// (the difference identity holds at every radius).
pub fn reflection_values(pair: &GreenPair, r: f64) -> ReflectionValues {
    let w = r.powi(pair.grid().dimension() as i32 - 1);
    ReflectionValues {
        radius: r,
        left: w * pair.xi_deriv_at(r) * pair.zeta_at(r),
        right: w * pair.xi_at(r) * pair.zeta_deriv_at(r),
    }
}

/// Monotonicity verdicts of F_p on [0.05, 1 - eps] for a Dirichlet pair.
pub fn catrina_flag(pair: &GreenPair, ps: &[f64]) -> Result<Vec<CatrinaVerdict>> {
    if pair.boundary() != BoundarySpec::Dirichlet {
        return Err(Error::WrongBoundary {
            expected: "dirichlet",
            actual: pair.boundary().name(),
        });
    }
    let nodes = pair.grid().nodes();
    let last = nodes.len() - 1;
    let mut verdicts = Vec::new();
    for &p in ps {
        if !(p > 1.0) {
            return Err(Error::InvalidP(p));
        }
        let mut rs = Vec::new();
        let mut vals = Vec::new();
        for (i, &r) in nodes.iter().enumerate() {
            if r < 0.05 || i == last {
                continue;
            }
            rs.push(r);
            vals.push(eval_fp(pair, r, p)?);
        }
        scan_plateaus(&rs, &vals)?;
        let mut inc = true;
        let mut dec = true;
        for w in vals.windows(2) {
            let d = w[1] - w[0];
            if d <= PLATEAU_TOL {
                inc = false;
            }
            if d >= -PLATEAU_TOL {
                dec = false;
            }
        }
        let monotone = if inc {
            "increasing"
        } else if dec {
            "decreasing"
        } else {
            "none"
        };
        verdicts.push(CatrinaVerdict {
            p,
            monotone: monotone.into(),
            no_solution_expected: inc || dec,
        });
    }
    Ok(verdicts)
}

/// The obstacle box (R1, R2, c) around a target minimum.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ConstraintBox {
    pub r1: f64,
    pub r2: f64,
    pub c: f64,
    /// The minimum the box is built around.
    pub target: f64,
}

impl ConstraintBox {
    pub fn new(r1: f64, r2: f64, c: f64, target: f64) -> Result<Self> {
        if !(r1 > 0.0 && r1 < r2 && r2 <= 1.0) {
            return Err(Error::InvalidBox(format!(
                "need 0 < R1 < R2 <= 1, got R1 = {r1}, R2 = {r2}"
            )));
        }
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidBox(format!("need c in (0,1), got {c}")));
        }
        if !(target >= r1 && target <= r2) {
            return Err(Error::InvalidBox(format!(
                "target {target} outside [R1, R2] = [{r1}, {r2}]"
            )));
        }
        Ok(Self { r1, r2, c, target })
    }

    /// True when the box targets the boundary minimum r = 1, where the
    /// obstacle applies only on [0, R1].
    pub fn is_boundary(&self) -> bool {
        self.target >= 1.0
    }

    /// Obstacle membership: |u| <= c is enforced on r <= R1 and, for
    /// interior boxes, on r > R2.
    pub fn is_obstacle(&self, r: f64) -> bool {
        r <= self.r1 || (!self.is_boundary() && r > self.r2)
    }

    /// max{G(R1, target), G(R2, target)} / G(target, target); must stay
    /// below c for the box to be admissible.
    pub fn obstacle_ratio(&self, pair: &GreenPair) -> Result<f64> {
        let g_tt = pair.green_eval(self.target, self.target)?;
        let mut m = pair.green_eval(self.r1, self.target)? / g_tt;
        if !self.is_boundary() {
            m = m.max(pair.green_eval(self.r2, self.target)? / g_tt);
        }
        Ok(m)
    }

    /// Validate c against the pair: obstacle_ratio < c < 1.
    pub fn validate_against(&self, pair: &GreenPair) -> Result<()> {
        let m = self.obstacle_ratio(pair)?;
        if m >= 1.0 {
            return Err(Error::InvalidBox(format!(
                "obstacle ratio {m} >= 1 violates the maximum principle; pair is broken"
            )));
        }
        if self.c <= m {
            return Err(Error::InvalidBox(format!(
                "c = {} must exceed the obstacle ratio {m}",
                self.c
            )));
        }
        Ok(())
    }
}

/// Build the box for a located minimum: bracket endpoints for (R1, R2),
/// c halfway between the obstacle ratio and 1.
pub fn build_constraint_box(pair: &GreenPair, min: &MinimumRecord) -> Result<ConstraintBox> {
    let (mut a, b) = min.bracket;
    let h = pair.grid().spacing();
    // shrink endpoints that fail the strict-minimum property (guard; the
    // bracket construction already guarantees it on the sampled F)
    let fbar = min.value;
    while a < min.location - h && eval_f(pair, a)? <= fbar {
        a += h;
    }
    let mut bx = ConstraintBox::new(a, b.max(min.location), 0.5, min.location)?;
    let m = bx.obstacle_ratio(pair)?;
    if m >= 1.0 {
        return Err(Error::InvalidBox(format!(
            "obstacle ratio {m} >= 1: Green pair violates the maximum principle"
        )));
    }
    bx.c = 0.5 * (1.0 + m);
    Ok(bx)
}

/// Full landscape analysis: minima, samples, boundary slope (Neumann),
/// reflection values at interior critical points, and the per-p
/// monotonicity flags (Dirichlet, when exponents are supplied).
pub fn landscape_report(pair: &GreenPair, r_lo: f64, ps: &[f64]) -> Result<LandscapeReport> {
    let minima = find_local_minima(pair, r_lo)?;
    let (r, f) = f_samples(pair, r_lo);
    let fprime_at_1 = if pair.boundary() == BoundarySpec::Neumann {
        Some(boundary_descent_check(pair)?)
    } else {
        None
    };
    let catrina = if pair.boundary() == BoundarySpec::Dirichlet && !ps.is_empty() {
        catrina_flag(pair, ps)?
    } else {
        Vec::new()
    };
    let reflection = critical_points(pair, r_lo)
        .into_iter()
        .map(|r| reflection_values(pair, r))
        .collect();
    Ok(LandscapeReport {
        n: pair.grid().dimension(),
        boundary: pair.boundary().name().into(),
        r_lo,
        minima,
        f_samples: FSamples { r, f },
        fprime_at_1,
        catrina,
        reflection,
    })
}
