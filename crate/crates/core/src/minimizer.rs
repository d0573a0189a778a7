//! Obstacle-constrained minimization of Q over the unit-mass set, the
//! Lagrange multiplier extraction, the PDE rescaling, and the limit
//! problem at p = infinity.
//!
//! The scalar mass constraint (normalized L^{p+1} norm = 1) is handled by
//! an augmented-Lagrangian outer loop; each inner problem is solved by
//! projected gradient descent with Barzilai-Borwein steps, clipping to
//! [0, c] on the obstacle region and [0, u_cap] elsewhere.

use crate::error::{Error, Result};
use crate::fem::RadialFem;
use crate::green::{BoundarySpec, GreenPair};
use crate::grid::RadialGrid;
use crate::landscape::ConstraintBox;
use crate::potential::PotentialSpec;
use crate::profile::Profile;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct MinimizeOptions {
    /// Sup-norm tolerance on the projected KKT gradient.
    pub tol: f64,
    /// Tolerance on the mass residual |N(u) - 1|.
    pub mass_tol: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Hard cap on iterate values; feasible iterates stay well below it.
    pub u_cap: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            mass_tol: 1e-8,
            max_outer: 60,
            max_inner: 40_000,
            u_cap: 10.0,
        }
    }
}

/// Converged (or best-effort) KKT point of the constrained problem.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub p: f64,
    /// Mass-normalized, box-feasible minimizer.
    pub u: Profile,
    /// Q(u) of the reported iterate.
    pub j_p: f64,
    /// Multiplier of the PDE form L u = lambda_p u^p.
    pub lambda_p: f64,
    /// Annulus mass (|A|^{-1} ∫_A u^{p+1})^{1/(p+1)}.
    pub gamma_p: f64,
    /// Sup-norm of the projected gradient of Q - lambda (N - 1).
    pub kkt_residual: f64,
    pub mass_residual: f64,
    /// Nodes where a box bound binds.
    pub active_set_size: usize,
    pub iterations: usize,
    pub converged: bool,
    /// v = lambda_p^{1/(p-1)} u, the PDE-normalized profile.
    pub rescaled: Profile,
    /// Q of the accepted feasible iterate after each outer step
    /// (nonincreasing by the acceptance rule).
    pub j_history: Vec<f64>,
}

/// u^p on nonnegative iterates, asserting the cap that keeps powers
/// representable. Integral exponents take the cheap square-and-multiply
/// path; the general case goes through logs.
fn powp(u: f64, p: f64, cap: f64) -> f64 {
    debug_assert!(u <= cap * (1.0 + 1e-9), "iterate {u} above cap {cap}");
    if u <= 0.0 {
        return 0.0;
    }
    if p.fract() == 0.0 && p.abs() < 1024.0 {
        u.powi(p as i32)
    } else {
        (p * u.ln()).exp()
    }
}

struct Bounds {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

fn box_bounds(
    grid: &RadialGrid,
    bx: &ConstraintBox,
    boundary: BoundarySpec,
    u_cap: f64,
) -> Bounds {
    let m = grid.len();
    let mut lo = vec![0.0; m];
    let mut hi = vec![u_cap; m];
    for (i, &r) in grid.nodes().iter().enumerate() {
        if bx.is_obstacle(r) {
            hi[i] = bx.c;
        }
    }
    if boundary == BoundarySpec::Dirichlet {
        hi[m - 1] = 0.0;
        lo[m - 1] = 0.0;
    }
    Bounds { lo, hi }
}

fn clip(u: &mut [f64], b: &Bounds) {
    for i in 0..u.len() {
        u[i] = u[i].clamp(b.lo[i], b.hi[i]);
    }
}

/// Normalized L^{p+1} mass functional m(u) = n Σ w_i u_i^{p+1};
/// the constraint set is m = 1.
fn mass(grid: &RadialGrid, u: &[f64], p: f64, cap: f64) -> f64 {
    let n = grid.dimension() as f64;
    let w = grid.weights();
    let mut s = 0.0;
    for i in 0..u.len() {
        s += w[i] * powp(u[i], p + 1.0, cap);
    }
    n * s
}

/// Find t so that clip(t g) has unit mass; errors when the caps cannot
/// accommodate unit mass at any scale.
fn feasible_rescale(
    grid: &RadialGrid,
    g: &[f64],
    p: f64,
    b: &Bounds,
    cap: f64,
) -> Result<Vec<f64>> {
    let eval = |t: f64| -> (Vec<f64>, f64) {
        let mut u: Vec<f64> = g.iter().map(|x| t * x.max(0.0)).collect();
        clip(&mut u, b);
        let m = mass(grid, &u, p, cap);
        (u, m)
    };
    let (_, m1) = eval(1.0);
    if (m1 - 1.0).abs() < 1e-14 {
        return Ok(eval(1.0).0);
    }
    // bracket the unit-mass scale
    let (mut t_lo, mut t_hi) = (1.0_f64, 1.0_f64);
    let mut guard = 0;
    while eval(t_lo).1 > 1.0 {
        t_lo *= 0.5;
        guard += 1;
        if guard > 200 {
            return Err(Error::InfeasibleBox { c: 0.0, mass: 0.0 });
        }
    }
    guard = 0;
    loop {
        let (_, m) = eval(t_hi);
        if m >= 1.0 {
            break;
        }
        t_hi *= 2.0;
        guard += 1;
        if guard > 60 {
            // caps saturated everywhere and the mass still fails to reach 1
            return Err(Error::InfeasibleBox {
                c: b.hi.iter().cloned().fold(f64::INFINITY, f64::min),
                mass: m,
            });
        }
    }
    for _ in 0..200 {
        let t = 0.5 * (t_lo + t_hi);
        let (_, m) = eval(t);
        if m > 1.0 {
            t_hi = t;
        } else {
            t_lo = t;
        }
        if (t_hi - t_lo) / t_hi < 1e-15 {
            break;
        }
    }
    Ok(eval(0.5 * (t_lo + t_hi)).0)
}

/// Natural projected-gradient residual: sup |u - P(u - g)|.
///
/// Band-free: activity at the bounds is resolved by the projection
/// itself, so iterates sitting a rescale-epsilon off a cap do not leak
/// their bound multiplier into the measure.
fn projected_residual(u: &[f64], g: &[f64], b: &Bounds) -> f64 {
    let mut sup = 0.0_f64;
    for i in 0..u.len() {
        let proj = (u[i] - g[i]).clamp(b.lo[i], b.hi[i]);
        sup = sup.max((u[i] - proj).abs());
    }
    sup
}

struct AlState<'a> {
    fem: &'a RadialFem,
    grid: &'a RadialGrid,
    p: f64,
    area: f64,
    cap: f64,
    /// AL multiplier estimate y and penalty rho for h = N - 1.
    y: f64,
    rho: f64,
}

/// Scalars and vectors of the frozen inner-objective Hessian.
struct HessModel {
    psi1: f64,
    psi2: f64,
    /// q = grad N at the freeze point.
    q: Vec<f64>,
    /// u^{p-1} samples.
    diag_pow: Vec<f64>,
    diag_scale: f64,
    q_scale: f64,
}

impl AlState<'_> {
    fn n_norm(&self, u: &[f64]) -> f64 {
        mass(self.grid, u, self.p, self.cap).powf(1.0 / (self.p + 1.0))
    }

    /// Least-squares multiplier over strictly free nodes:
    /// y = -<grad Q, grad N> / |grad N|^2. Refines the running estimate
    /// once the mass residual is small, which keeps the KKT residual at
    /// the level of the inner-solver accuracy instead of the (noisier)
    /// first-order multiplier update. Nodes within a small band of a
    /// bound are left out of the fit.
    fn least_squares_multiplier(&self, u: &[f64], b: &Bounds) -> f64 {
        let m = u.len();
        let mut au = vec![0.0; m];
        self.fem.apply(u, &mut au);
        let nn = self.n_norm(u);
        let mscale = nn.powf(-self.p);
        let nf = self.grid.dimension() as f64;
        let w = self.grid.weights();
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..m {
            let band = 2e-3 * (1.0 + b.hi[i].min(1.0));
            if u[i] <= b.lo[i] + band || u[i] >= b.hi[i] - band {
                continue;
            }
            let dn = mscale * nf * w[i] * powp(u[i], self.p, self.cap);
            num += 2.0 * self.area * au[i] * dn;
            den += dn * dn;
        }
        if den > 0.0 {
            -num / den
        } else {
            self.y
        }
    }

    /// L = Q + y h + rho/2 h^2 with h = N - 1.
    fn lagrangian(&self, u: &[f64]) -> f64 {
        let q = self.area * self.fem.quadratic_form(u);
        let h = self.n_norm(u) - 1.0;
        q + self.y * h + 0.5 * self.rho * h * h
    }

    fn gradient(&self, u: &[f64], au: &mut [f64], g: &mut [f64]) {
        self.fem.apply(u, au);
        let nf = self.grid.dimension() as f64;
        let w = self.grid.weights();
        // single power pass: u^p feeds both the mass and its gradient
        let mut msum = 0.0;
        for i in 0..u.len() {
            let up = powp(u[i], self.p, self.cap);
            g[i] = up; // stash u^p
            msum += w[i] * up * u[i].max(0.0);
        }
        let m = nf * msum;
        let nn = m.powf(1.0 / (self.p + 1.0));
        let h = nn - 1.0;
        let mult = self.y + self.rho * h;
        // dN/du_i = m^{-p/(p+1)} n w_i u_i^p
        let mscale = nn.powf(-self.p);
        for i in 0..u.len() {
            let dn = mscale * nf * w[i] * g[i];
            g[i] = 2.0 * self.area * au[i] + mult * dn;
        }
    }

    /// Frozen-point quadratic model of the inner objective for the
    /// conjugate-gradient bursts: scalars and vectors entering
    /// Hessian-vector products.
    fn hessian_model(&self, u: &[f64]) -> HessModel {
        let nf = self.grid.dimension() as f64;
        let w = self.grid.weights();
        let m = u.len();
        let mut q = vec![0.0; m];
        let mut diag_pow = vec![0.0; m];
        let mut msum = 0.0;
        for i in 0..m {
            let up = powp(u[i], self.p, self.cap);
            msum += w[i] * up * u[i].max(0.0);
            q[i] = up;
            diag_pow[i] = powp(u[i], self.p - 1.0, self.cap);
        }
        let mval = nf * msum;
        let gamma = 1.0 / (self.p + 1.0);
        let nn = mval.powf(gamma);
        let mg1 = mval.powf(gamma - 1.0);
        for i in 0..m {
            q[i] *= mg1 * nf * w[i];
        }
        let h = nn - 1.0;
        HessModel {
            psi1: self.y + self.rho * h,
            psi2: self.rho,
            q,
            diag_pow,
            diag_scale: mg1 * nf * self.p,
            q_scale: self.p / nn, // p m^{-gamma}
        }
    }

    /// Hessian-vector product of the frozen quadratic model.
    fn hess_vec(&self, model: &HessModel, v: &[f64], av: &mut [f64], out: &mut [f64]) {
        self.fem.apply(v, av);
        let w = self.grid.weights();
        let qv: f64 = model.q.iter().zip(v).map(|(a, b)| a * b).sum();
        let coef_q = model.psi2 * qv - model.psi1 * model.q_scale * qv;
        for i in 0..v.len() {
            out[i] = 2.0 * self.area * av[i]
                + model.psi1 * model.diag_scale * w[i] * model.diag_pow[i] * v[i]
                + coef_q * model.q[i];
        }
    }

    /// Projected gradient of Q - lambda (N - 1) at the current multiplier.
    fn kkt_residual(&self, u: &[f64], b: &Bounds) -> f64 {
        let m = u.len();
        let mut au = vec![0.0; m];
        let mut g = vec![0.0; m];
        self.fem.apply(u, &mut au);
        let nn = self.n_norm(u);
        let mscale = nn.powf(-self.p);
        let nf = self.grid.dimension() as f64;
        let w = self.grid.weights();
        let lambda_hat = -self.y;
        for i in 0..m {
            let dn = mscale * nf * w[i] * powp(u[i], self.p, self.cap);
            g[i] = 2.0 * self.area * au[i] - lambda_hat * dn;
        }
        projected_residual(u, &g, b)
    }
}

/// Inner solve: projected BB gradient descent with a nonmonotone
/// (memory-8) Armijo safeguard, interleaved with conjugate-gradient
/// polishing sweeps on the currently free subspace (the gradient
/// projection + CG pattern for box-constrained problems).
///
/// Steps are taken in the fixed diagonal metric of the energy form
/// (Jacobi scaling): the r^{n-1} weight spreads the Hessian diagonal over
/// twelve orders of magnitude, and unscaled descent stalls long before
/// the KKT tolerance. Box projection remains an exact per-coordinate clip
/// in any diagonal metric.
fn inner_solve(
    st: &AlState,
    u: &mut Vec<f64>,
    b: &Bounds,
    tol_inner: f64,
    max_iter: usize,
) -> usize {
    let m = u.len();
    let mut au = vec![0.0; m];
    let mut g = vec![0.0; m];
    let mut g_prev = vec![0.0; m];
    let mut u_prev = vec![0.0; m];
    let d: Vec<f64> = (0..m)
        .map(|i| (2.0 * st.area * st.fem.diag_at(i)).max(1e-30))
        .collect();
    st.gradient(u, &mut au, &mut g);
    let mut lval = st.lagrangian(u);
    let mut memory = vec![lval; 1];
    let mut step = 1.0;
    let mut iters = 0;
    'sweeps: while iters < max_iter {
        // projected-BB phase: makes global progress and settles the
        // active set
        for _ in 0..40 {
            if projected_residual(u, &g, b) <= tol_inner || iters >= max_iter {
                break 'sweeps;
            }
            iters += 1;
            let mut accepted = false;
            let mut t = step;
            let l_ref = memory.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            for _ in 0..60 {
                let mut trial: Vec<f64> = (0..m).map(|i| u[i] - t * g[i] / d[i]).collect();
                clip(&mut trial, b);
                let decrease: f64 = (0..m).map(|i| g[i] * (u[i] - trial[i])).sum();
                let l_trial = st.lagrangian(&trial);
                if l_trial <= l_ref - 1e-4 * decrease.max(0.0) {
                    u_prev.copy_from_slice(u);
                    g_prev.copy_from_slice(&g);
                    *u = trial;
                    lval = l_trial;
                    accepted = true;
                    break;
                }
                t *= 0.25;
            }
            if !accepted {
                break 'sweeps; // step collapsed; residual reported by caller
            }
            memory.push(lval);
            if memory.len() > 8 {
                memory.remove(0);
            }
            st.gradient(u, &mut au, &mut g);
            // Barzilai-Borwein step from the accepted move, in the
            // D-metric; alternating the two formulas improves the tail.
            let mut ss = 0.0;
            let mut sy = 0.0;
            let mut yy = 0.0;
            for i in 0..m {
                let s = u[i] - u_prev[i];
                let y = g[i] - g_prev[i];
                ss += d[i] * s * s;
                sy += s * y;
                yy += y * y / d[i];
            }
            step = if sy > 1e-300 {
                let bb = if iters % 2 == 0 {
                    ss / sy
                } else {
                    sy / yy.max(1e-300)
                };
                bb.clamp(1e-14, 1e10)
            } else {
                (t * 4.0).clamp(1e-14, 1e10)
            };
        }
        // CG phase on the free subspace of the frozen quadratic model
        iters += cg_burst(st, u, b, &d, &mut g, tol_inner, 1200);
        st.gradient(u, &mut au, &mut g);
        lval = st.lagrangian(u);
        memory.push(lval);
        if memory.len() > 8 {
            memory.remove(0);
        }
    }
    iters
}

/// Preconditioned conjugate gradients on the free nodes of the frozen
/// inner-objective model, truncated at the first bound hit or on
/// negative curvature, with a decrease safeguard against the (mild)
/// non-quadraticity of the mass term.
fn cg_burst(
    st: &AlState,
    u: &mut Vec<f64>,
    b: &Bounds,
    d: &[f64],
    g: &[f64],
    tol: f64,
    max_cg: usize,
) -> usize {
    let m = u.len();
    let free: Vec<bool> = (0..m)
        .map(|i| u[i] > b.lo[i] + 1e-13 && u[i] < b.hi[i] - 1e-13)
        .collect();
    if !free.iter().any(|&f| f) {
        return 0;
    }
    let model = st.hessian_model(u);
    let mut x = u.clone();
    let mut r: Vec<f64> = (0..m).map(|i| if free[i] { -g[i] } else { 0.0 }).collect();
    let mut z: Vec<f64> = (0..m).map(|i| r[i] / d[i]).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut hp = vec![0.0; m];
    let mut scratch = vec![0.0; m];
    let mut used = 0;
    for _ in 0..max_cg {
        used += 1;
        st.hess_vec(&model, &p, &mut scratch, &mut hp);
        for i in 0..m {
            if !free[i] {
                hp[i] = 0.0;
            }
        }
        let php: f64 = p.iter().zip(&hp).map(|(a, b)| a * b).sum();
        if php <= 1e-300 {
            break; // nonpositive curvature: keep what we have
        }
        let alpha = rz / php;
        // largest feasible step along p
        let mut alpha_max = f64::INFINITY;
        for i in 0..m {
            if p[i] > 0.0 {
                alpha_max = alpha_max.min((b.hi[i] - x[i]) / p[i]);
            } else if p[i] < 0.0 {
                alpha_max = alpha_max.min((b.lo[i] - x[i]) / p[i]);
            }
        }
        if alpha >= alpha_max {
            for i in 0..m {
                x[i] += alpha_max * p[i];
            }
            break; // bound hit: back to the projection phase
        }
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * hp[i];
        }
        let sup = r
            .iter()
            .enumerate()
            .filter(|(i, _)| free[*i])
            .map(|(_, v)| v.abs())
            .fold(0.0_f64, f64::max);
        if sup <= 0.5 * tol {
            break;
        }
        let mut rz_new = 0.0;
        for i in 0..m {
            z[i] = r[i] / d[i];
            rz_new += r[i] * z[i];
        }
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
    }
    // decrease safeguard on the aggregate move
    let l0 = st.lagrangian(u);
    let mut t = 1.0;
    for _ in 0..30 {
        let mut trial: Vec<f64> = (0..m)
            .map(|i| u[i] + t * (x[i] - u[i]))
            .collect();
        clip(&mut trial, b);
        if st.lagrangian(&trial) <= l0 + 1e-14 * l0.abs().max(1.0) {
            *u = trial;
            break;
        }
        t *= 0.5;
    }
    used
}

/// Minimize Q over the unit-mass, box-constrained set.
///
/// The initial iterate is the normalized Green profile at the box target,
/// rescaled into the constraint set, unless a warm start is supplied.
pub fn minimize_jp(
    pair: &GreenPair,
    v: &PotentialSpec,
    bx: &ConstraintBox,
    p: f64,
    opts: &MinimizeOptions,
    warm: Option<&Profile>,
) -> Result<MinimizeResult> {
    if !(p > 1.0) {
        return Err(Error::InvalidP(p));
    }
    let grid = pair.grid_arc();
    let fem = RadialFem::assemble(Arc::clone(&grid), v);
    let area = grid.sphere_area();
    let bounds = box_bounds(&grid, bx, pair.boundary(), opts.u_cap);

    let seed: Vec<f64> = match warm {
        Some(w) => w.values.clone(),
        None => {
            let target = if bx.is_boundary() {
                pair.boundary_profile()?
            } else {
                pair.normalized_profile(bx.target)?
            };
            target.values
        }
    };
    let mut u = feasible_rescale(&grid, &seed, p, &bounds, opts.u_cap)?;

    let mut st = AlState {
        fem: &fem,
        grid: &grid,
        p,
        area,
        cap: opts.u_cap,
        y: 0.0,
        rho: 10.0 * (area * fem.quadratic_form(&u)).max(1.0),
    };
    st.y = st.least_squares_multiplier(&u, &bounds);

    // best feasible iterate by energy (the accepted-descent record) and
    // by KKT residual (the reported point when unconverged)
    let mut best_j: Option<(f64, Vec<f64>)> = None;
    let mut best_kkt: Option<(f64, Vec<f64>, f64)> = None;
    let mut j_history = Vec::new();
    let mut h_prev = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    let mut tol_inner = (opts.tol * 1e3).max(1e-4);

    let debug = std::env::var("RADGREEN_MIN_DEBUG").is_ok();
    for _outer in 0..opts.max_outer {
        let used = inner_solve(&st, &mut u, &bounds, tol_inner, opts.max_inner);
        iterations += used;
        let h = st.n_norm(&u) - 1.0;

        // exact mass projection; test optimality on the projected point
        // with the least-squares multiplier
        let mut keep_ls = false;
        if h.abs() < 1e-3 {
            if let Ok(feas) = feasible_rescale(&grid, &u, p, &bounds, opts.u_cap) {
                let y_save = st.y;
                st.y = st.least_squares_multiplier(&feas, &bounds);
                let kkt = st.kkt_residual(&feas, &bounds);
                let jq = area * fem.quadratic_form(&feas);
                if debug {
                    eprintln!(
                        "outer {_outer}: inner={used} tol_in={tol_inner:.1e} h={h:.3e} rho={:.1e} y_ls={:.6} kkt={kkt:.3e} J={jq:.8}",
                        st.rho, st.y
                    );
                }
                if best_j.as_ref().map_or(true, |(jb, _)| jq <= jb + 1e-12) {
                    best_j = Some((jq, feas.clone()));
                    j_history.push(jq);
                }
                if best_kkt.as_ref().map_or(true, |(kb, _, _)| kkt < *kb) {
                    best_kkt = Some((kkt, feas.clone(), st.y));
                }
                if kkt <= opts.tol {
                    converged = true;
                    u = feas;
                    break;
                }
                // once the constraint is essentially met, the refined
                // multiplier beats the first-order update
                if h.abs() <= 1e-5 {
                    keep_ls = true;
                } else {
                    st.y = y_save;
                }
            }
        } else if debug {
            eprintln!(
                "outer {_outer}: inner={used} tol_in={tol_inner:.1e} h={h:.3e} rho={:.1e} y={:.6}",
                st.rho, st.y
            );
        }

        // multiplier and penalty updates; the exact projection handles
        // the last digits of the mass, so rho stops escalating once the
        // residual is projection-small
        if !keep_ls {
            st.y += st.rho * h;
        }
        if h.abs() > 1e-5 && h.abs() > 0.25 * h_prev {
            st.rho = (st.rho * 10.0).min(1e14);
        }
        h_prev = h.abs();
        tol_inner = (tol_inner * 0.1).max(opts.tol * 0.5);
    }

    let (kkt_residual, u_feas, y_final) = if converged {
        let y = st.least_squares_multiplier(&u, &bounds);
        st.y = y;
        (st.kkt_residual(&u, &bounds), u, y)
    } else {
        best_kkt.ok_or(Error::InfeasibleBox {
            c: bx.c,
            mass: st.n_norm(&u),
        })?
    };
    st.y = y_final;
    let j_p = area * fem.quadratic_form(&u_feas);
    let mass_residual = (st.n_norm(&u_feas) - 1.0).abs();
    let lambda_hat = -y_final;
    let lambda_p = lambda_hat * grid.dimension() as f64 / (2.0 * area);
    if converged && lambda_p <= 0.0 {
        return Err(Error::LambdaDisagreement {
            gap: 100.0,
            max: 5.0,
        });
    }

    let active_set_size = (0..u_feas.len())
        .filter(|&i| {
            u_feas[i] <= bounds.lo[i] + 1e-12 || u_feas[i] >= bounds.hi[i] - 1e-12
        })
        .count();

    let scale = lambda_p.max(1e-300).powf(1.0 / (p - 1.0));
    let rescaled = Profile::new(u_feas.iter().map(|x| x * scale).collect());
    let gamma_p = gamma_mass(&grid, &Profile::new(u_feas.clone()), p, bx);

    Ok(MinimizeResult {
        p,
        u: Profile::new(u_feas),
        j_p,
        lambda_p,
        gamma_p,
        kkt_residual,
        mass_residual,
        active_set_size,
        iterations,
        converged,
        rescaled,
        j_history,
    })
}

/// Two independent estimates of the PDE multiplier from a minimizer.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LambdaEstimate {
    /// Least-squares fit of (L u)_i = lambda u_i^p over interior nodes.
    pub fit: f64,
    /// Energy-ratio estimate from integrating the equation against u.
    pub energy_ratio: f64,
    /// Relative gap between the two.
    pub rel_gap: f64,
}

/// Fit the multiplier on the inactive annulus interior; errors when the
/// two estimates disagree by more than 5% (unconverged minimizer).
pub fn extract_lambda(
    grid: &RadialGrid,
    fem: &RadialFem,
    v: &PotentialSpec,
    u: &Profile,
    p: f64,
    bx: &ConstraintBox,
) -> Result<LambdaEstimate> {
    u.check_shape(grid)?;
    let m = grid.len();
    let mut au = vec![0.0; m];
    fem.apply(&u.values, &mut au);
    let w = grid.weights();
    let nodes = grid.nodes();

    // inset the annulus to stay away from the obstacle boundary and the
    // profile kink forming at the target
    let width = bx.r2 - bx.r1;
    let (a, b) = (bx.r1 + 0.05 * width, bx.r2 - 0.05 * width);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..m {
        let r = nodes[i];
        if r < a || r > b || u.values[i] <= 1e-8 {
            continue;
        }
        let strong = au[i] / w[i];
        let up = u.values[i].powf(p);
        num += strong * up;
        den += up * up;
    }
    if den <= 0.0 {
        return Err(Error::LambdaDisagreement {
            gap: f64::INFINITY,
            max: 5.0,
        });
    }
    let fit = num / den;

    // energy route: lambda = [E(a,b) - flux] / ∫_a^b u^{p+1} r^{n-1}
    let du = u.derivatives(grid);
    let dprof = Profile::with_derivs(u.values.clone(), du.clone());
    let ni = grid.dimension() as i32 - 1;
    let energy = grid.integrate_weighted_on(a, b, |r| {
        let d = dprof_deriv(&dprof, grid, r);
        let uv = u.eval(grid, r);
        d * d + v.eval(r) * uv * uv
    });
    let flux = |r: f64| r.powi(ni) * dprof_deriv(&dprof, grid, r) * u.eval(grid, r);
    let numerator = energy - (flux(b) - flux(a));
    let denominator = grid.integrate_weighted_on(a, b, |r| u.eval(grid, r).powf(p + 1.0));
    let energy_ratio = numerator / denominator;

    let rel_gap = (fit - energy_ratio).abs() / fit.abs().max(1e-300);
    if rel_gap > 0.05 {
        return Err(Error::LambdaDisagreement {
            gap: rel_gap * 100.0,
            max: 5.0,
        });
    }
    Ok(LambdaEstimate {
        fit,
        energy_ratio,
        rel_gap,
    })
}

fn dprof_deriv(p: &Profile, grid: &RadialGrid, r: f64) -> f64 {
    // linear interpolation of the nodal derivative samples
    let nodes = grid.nodes();
    let r = r.clamp(nodes[0], 1.0);
    let k = grid.cell_of(r);
    let t = (r - nodes[k]) / (nodes[k + 1] - nodes[k]);
    let d = p.derivs.as_ref().unwrap();
    (1.0 - t) * d[k] + t * d[k + 1]
}

/// v = lambda^{1/(p-1)} u; the multiple of the minimizer that solves the
/// PDE with unit coefficient.
pub fn rescale_to_pde(u: &Profile, lambda: f64, p: f64) -> Profile {
    let scale = lambda.powf(1.0 / (p - 1.0));
    let mut v = u.clone();
    for x in &mut v.values {
        *x *= scale;
    }
    if let Some(d) = &mut v.derivs {
        for x in d {
            *x *= scale;
        }
    }
    v
}

/// Sup over the inset annulus of the weak PDE residual
/// |2|∂B_1|((A v)_i - w_i v_i^p)| for the rescaled profile.
pub fn pde_residual_weak(
    grid: &RadialGrid,
    fem: &RadialFem,
    vprof: &Profile,
    p: f64,
    bx: &ConstraintBox,
) -> f64 {
    let m = grid.len();
    let mut av = vec![0.0; m];
    fem.apply(&vprof.values, &mut av);
    let w = grid.weights();
    let area = grid.sphere_area();
    let width = bx.r2 - bx.r1;
    let (a, b) = (bx.r1 + 0.05 * width, bx.r2 - 0.05 * width);
    let mut sup = 0.0_f64;
    for (i, &r) in grid.nodes().iter().enumerate() {
        if r < a || r > b {
            continue;
        }
        let res = 2.0 * area * (av[i] - w[i] * vprof.values[i].powf(p));
        sup = sup.max(res.abs());
    }
    sup
}

/// Annulus mass (|A|^{-1} ∫_A u^{p+1})^{1/(p+1)} with A the box annulus.
pub fn gamma_mass(grid: &RadialGrid, u: &Profile, p: f64, bx: &ConstraintBox) -> f64 {
    let n = grid.dimension();
    let vol = (bx.r2.powi(n as i32) - bx.r1.powi(n as i32)) / n as f64;
    let integral =
        grid.integrate_weighted_on(bx.r1, bx.r2, |r| u.eval(grid, r).abs().powf(p + 1.0));
    (integral / vol).powf(1.0 / (p + 1.0))
}

/// Solution of the limit problem: peak pinned at the best radius in
/// [R1, R2], linear two-sided solve per candidate with the obstacle caps
/// active-set enforced, energy minimized over the candidate peaks.
#[derive(Debug, Clone)]
pub struct JinftyResult {
    pub profile: Profile,
    pub peak_radius: f64,
    pub energy: f64,
    pub obstacle_active: usize,
}

pub fn solve_jinfty(
    pair: &GreenPair,
    v: &PotentialSpec,
    bx: &ConstraintBox,
) -> Result<JinftyResult> {
    let grid = pair.grid_arc();
    let fem = RadialFem::assemble(Arc::clone(&grid), v);
    let area = grid.sphere_area();
    let nodes = grid.nodes();
    let m = nodes.len();

    let caps: Vec<(usize, f64)> = nodes
        .iter()
        .enumerate()
        .filter(|(_, &r)| bx.is_obstacle(r))
        .map(|(i, _)| (i, bx.c))
        .collect();
    let dirichlet_pin = (pair.boundary() == BoundarySpec::Dirichlet).then_some((m - 1, 0.0));

    let lo = grid
        .nodes()
        .iter()
        .position(|&r| r >= bx.r1)
        .unwrap_or(0);
    let hi = grid
        .nodes()
        .iter()
        .rposition(|&r| r <= bx.r2)
        .unwrap_or(m - 1);
    // under Dirichlet the peak cannot sit on the boundary node
    let hi = if dirichlet_pin.is_some() {
        hi.min(m - 2)
    } else {
        hi
    };

    let mut best: Option<(f64, usize, Vec<f64>, usize)> = None;
    for k in lo..=hi {
        if bx.is_obstacle(nodes[k]) {
            continue;
        }
        let mut pins = vec![(k, 1.0)];
        if let Some(pin) = dirichlet_pin {
            pins.push(pin);
        }
        let (u, n_active) = fem.solve_obstacle(&pins, &caps, 50);
        let e = area * fem.quadratic_form(&u);
        // ties resolve to the smaller radius: strict improvement required
        if best.as_ref().map_or(true, |(eb, _, _, _)| e < *eb - 0.0) {
            best = Some((e, k, u, n_active));
        }
    }
    let (energy, k, u, obstacle_active) =
        best.ok_or_else(|| Error::InvalidBox("no admissible peak node in [R1, R2]".into()))?;

    // a minimizer pinned to the search edge means the box fails to
    // isolate the minimum (the boundary target r̄ = 1 is the exception)
    let at_left_edge = k == lo || (k > 0 && bx.is_obstacle(nodes[k - 1]) && k - 1 >= lo);
    let at_right_edge = k == hi;
    let target_node = grid.nearest_node(bx.target);
    if (at_left_edge || at_right_edge) && k != target_node {
        return Err(Error::PeakAtBracketBoundary { radius: nodes[k] });
    }

    // maximum principle keeps the solve in [0, 1]; assert and clamp roundoff
    debug_assert!(u.iter().all(|&x| x >= -1e-12 && x <= 1.0 + 1e-12));

    Ok(JinftyResult {
        profile: Profile::new(u),
        peak_radius: nodes[k],
        energy,
        obstacle_active,
    })
}

/// Per-exponent convergence diagnostics against the limit profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceEntry {
    pub p: f64,
    pub j_p: f64,
    pub lambda_p: f64,
    pub gamma_p: f64,
    pub sup_dist_to_limit: f64,
    pub energy_dist_to_limit: f64,
    pub peak_radius: f64,
    pub peak_count: usize,
    /// c - max(u_p) over the obstacle region; positive means the obstacle
    /// is inactive and the minimizer solves the PDE.
    pub obstacle_margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub target: f64,
    pub limit_energy: f64,
    pub entries: Vec<ConvergenceEntry>,
}

pub fn convergence_report(
    results: &[MinimizeResult],
    pair: &GreenPair,
    bx: &ConstraintBox,
) -> Result<ConvergenceReport> {
    let grid = pair.grid_arc();
    let limit = if bx.is_boundary() {
        pair.boundary_profile()?
    } else {
        pair.normalized_profile(bx.target)?
    };
    let limit_energy = crate::landscape::eval_f(pair, bx.target)?;
    let mut entries = Vec::new();
    for res in results {
        let sup_dist = res
            .u
            .values
            .iter()
            .zip(&limit.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        let (peak_radius, peak_count) = annulus_peaks(&grid, &res.u, bx);
        let mut margin = f64::INFINITY;
        for (i, &r) in grid.nodes().iter().enumerate() {
            if bx.is_obstacle(r) {
                margin = margin.min(bx.c - res.u.values[i]);
            }
        }
        entries.push(ConvergenceEntry {
            p: res.p,
            j_p: res.j_p,
            lambda_p: res.lambda_p,
            gamma_p: res.gamma_p,
            sup_dist_to_limit: sup_dist,
            energy_dist_to_limit: (res.j_p - limit_energy).abs(),
            peak_radius,
            peak_count,
            obstacle_margin: margin,
        });
    }
    Ok(ConvergenceReport {
        target: bx.target,
        limit_energy,
        entries,
    })
}

/// Peak location and count of prominence-filtered local maxima of u on
/// [R1, R2].
fn annulus_peaks(grid: &RadialGrid, u: &Profile, bx: &ConstraintBox) -> (f64, usize) {
    let nodes = grid.nodes();
    let vals = &u.values;
    let tol = 1e-5 * u.sup_norm();
    let mut count = 0;
    let mut peak_r = bx.target;
    let mut peak_v = f64::NEG_INFINITY;
    let m = vals.len();
    for i in 0..m {
        let r = nodes[i];
        if r < bx.r1 || r > bx.r2 {
            continue;
        }
        if vals[i] > peak_v {
            peak_v = vals[i];
            peak_r = r;
        }
        let left_ok = if i == 0 {
            true
        } else {
            vals[i] > vals[i - 1] + tol
        };
        let right_ok = if i + 1 == m {
            true
        } else {
            vals[i] > vals[i + 1] + tol
        };
        // plateau tops: climb right over near-equal values
        let mut j = i;
        while j + 1 < m && (vals[j + 1] - vals[i]).abs() <= tol {
            j += 1;
        }
        let right_plateau_ok = j + 1 >= m || vals[j + 1] < vals[i] - tol;
        if left_ok && (right_ok || (j > i && right_plateau_ok)) {
            count += 1;
        }
    }
    // boundary peak at r = 1 for boundary boxes
    if bx.is_boundary() && peak_r >= *nodes.last().unwrap() - grid.spacing() {
        peak_r = 1.0;
    }
    (peak_r, count.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn boundary_fixture() -> (GreenPair, PotentialSpec, ConstraintBox) {
        let grid = Arc::new(RadialGrid::new(3, 2001, 1e-6).unwrap());
        let v = PotentialSpec::constant(1.0).unwrap();
        let pair = GreenPair::build(grid, &v, BoundarySpec::Neumann).unwrap();
        let bx = ConstraintBox::new(0.5, 1.0, 0.9434093477158866, 1.0).unwrap();
        (pair, v, bx)
    }

    #[test]
    fn minimize_p10_boundary_fixture() {
        let (pair, v, bx) = boundary_fixture();
        let opts = MinimizeOptions::default();
        let res = minimize_jp(&pair, &v, &bx, 10.0, &opts, None).unwrap();
        assert!(res.converged, "kkt={} mass={}", res.kkt_residual, res.mass_residual);
        assert!(res.mass_residual <= 1e-8);
        assert!(res.kkt_residual <= 1e-6);
        assert!(res.lambda_p > 0.0);
        assert!(res.u.values.iter().all(|&x| x >= 0.0));
        // obstacle feasibility
        for (i, &r) in pair.grid().nodes().iter().enumerate() {
            if bx.is_obstacle(r) {
                assert!(res.u.values[i] <= bx.c + 1e-10);
            }
        }
        // descent from the feasible start
        let init = pair.boundary_profile().unwrap();
        let b = box_bounds(pair.grid(), &bx, BoundarySpec::Neumann, opts.u_cap);
        let start = feasible_rescale(pair.grid(), &init.values, 10.0, &b, opts.u_cap).unwrap();
        let fem = RadialFem::assemble(pair.grid_arc(), &v);
        let q0 = pair.grid().sphere_area() * fem.quadratic_form(&start);
        assert!(res.j_p <= q0 + 1e-12, "J_p={} > Q(init)={q0}", res.j_p);
        // accepted outer steps are nonincreasing
        assert!(res
            .j_history
            .windows(2)
            .all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn lambda_extraction_consistent() {
        let (pair, v, bx) = boundary_fixture();
        let res = minimize_jp(&pair, &v, &bx, 10.0, &MinimizeOptions::default(), None).unwrap();
        let fem = RadialFem::assemble(pair.grid_arc(), &v);
        let est = extract_lambda(pair.grid(), &fem, &v, &res.u, 10.0, &bx).unwrap();
        assert!(est.rel_gap <= 0.01, "gap {}", est.rel_gap);
        // both estimators agree with the AL multiplier
        assert_relative_eq!(est.fit, res.lambda_p, max_relative = 0.01);
    }

    #[test]
    fn rescale_roundtrip_and_identity() {
        let grid = Arc::new(RadialGrid::new(3, 201, 1e-6).unwrap());
        let u = Profile::from_fn(&grid, |r| 1.0 + r);
        // identity at lambda = 1
        let same = rescale_to_pde(&u, 1.0, 10.0);
        assert_eq!(same.values, u.values);
        // algebraic inverse round trip
        let lambda = 3.7;
        let v = rescale_to_pde(&u, lambda, 10.0);
        let back: Vec<f64> = v
            .values
            .iter()
            .map(|x| x / lambda.powf(1.0 / 9.0))
            .collect();
        for (a, b) in back.iter().zip(&u.values) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn gamma_of_constants() {
        let grid = Arc::new(RadialGrid::new(3, 501, 1e-6).unwrap());
        let bx = ConstraintBox::new(0.4, 0.8, 0.9, 0.6).unwrap();
        let one = Profile::constant(&grid, 1.0);
        for p in [2.0, 10.0, 50.0] {
            assert_relative_eq!(gamma_mass(&grid, &one, p, &bx), 1.0, max_relative = 1e-9);
        }
        let c = Profile::constant(&grid, 0.9);
        assert_relative_eq!(gamma_mass(&grid, &c, 10.0, &bx), 0.9, max_relative = 1e-9);
    }

    #[test]
    fn jinfty_matches_green_profile_boundary() {
        let (pair, v, bx) = boundary_fixture();
        let res = solve_jinfty(&pair, &v, &bx).unwrap();
        assert_eq!(res.peak_radius, 1.0);
        assert_relative_eq!(*res.profile.values.last().unwrap(), 1.0);
        let limit = pair.boundary_profile().unwrap();
        let sup = res
            .profile
            .values
            .iter()
            .zip(&limit.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(sup <= 1e-6, "sup distance {sup}");
        // energy equals F(1) within quadrature tolerance
        let f1 = crate::landscape::eval_f(&pair, 1.0).unwrap();
        assert_relative_eq!(res.energy, f1, max_relative = 1e-6);
    }

    #[test]
    fn unconstrained_p2_stationarity() {
        // obstacle region empty: the minimizer satisfies the plain
        // Euler-Lagrange equation; for V ≡ 1 the constant 1 is the solution
        let (pair, v, _) = boundary_fixture();
        let bx = ConstraintBox::new(5e-7, 1.0, 0.99, 0.5).unwrap();
        // strong-form residuals divide by the r^{n-1}-scaled weights, so
        // the weak solve must be tight for the small-radius nodes
        let opts = MinimizeOptions {
            tol: 3e-8,
            ..Default::default()
        };
        let res = minimize_jp(&pair, &v, &bx, 2.0, &opts, None).unwrap();
        assert!(res.converged);
        let fem = RadialFem::assemble(pair.grid_arc(), &v);
        let grid = pair.grid();
        let m = grid.len();
        let mut au = vec![0.0; m];
        fem.apply(&res.u.values, &mut au);
        for (i, &r) in grid.nodes().iter().enumerate() {
            if r < 0.1 || r > 0.9 {
                continue;
            }
            let strong = au[i] / grid.weights()[i];
            let rhs = res.lambda_p * res.u.values[i] * res.u.values[i];
            assert!(
                (strong - rhs).abs() <= 1e-4 * rhs.abs().max(1.0),
                "EL residual at r={r}: {strong} vs {rhs}"
            );
        }
    }
}
