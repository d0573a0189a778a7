//! Piecewise-linear finite elements on the radial grid with the r^{n-1}
//! weight: tridiagonal stiffness + potential-mass forms, pinned solves,
//! and an active-set solver for upper obstacles.

use crate::grid::RadialGrid;
use crate::potential::PotentialSpec;
use std::sync::Arc;

/// Assembled bilinear form a(u, w) = ∫ (u'w' + V u w) r^{n-1} dr
/// (without the |∂B_1| factor).
#[derive(Debug, Clone)]
pub struct RadialFem {
    grid: Arc<RadialGrid>,
    diag: Vec<f64>,
    /// off[i] couples nodes i and i+1.
    off: Vec<f64>,
}

impl RadialFem {
    pub fn assemble(grid: Arc<RadialGrid>, v: &PotentialSpec) -> Self {
        let nodes = grid.nodes();
        let n = grid.dimension();
        let m = nodes.len();
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m - 1];
        for i in 0..m - 1 {
            let (a, b) = (nodes[i], nodes[i + 1]);
            let h = b - a;
            let m0 = (b.powi(n as i32) - a.powi(n as i32)) / n as f64;
            let k = m0 / (h * h);
            diag[i] += k;
            diag[i + 1] += k;
            off[i] -= k;
            // potential mass by two-point Gauss
            let mid = 0.5 * (a + b);
            let go = 0.5 * h / 3.0_f64.sqrt();
            for x in [mid - go, mid + go] {
                let t = (x - a) / h;
                let w = 0.5 * h * v.eval(x) * x.powi(n as i32 - 1);
                diag[i] += w * (1.0 - t) * (1.0 - t);
                diag[i + 1] += w * t * t;
                off[i] += w * t * (1.0 - t);
            }
        }
        Self { grid, diag, off }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn diag_at(&self, i: usize) -> f64 {
        self.diag[i]
    }

    /// out = A u.
    pub fn apply(&self, u: &[f64], out: &mut [f64]) {
        let m = u.len();
        for i in 0..m {
            let mut s = self.diag[i] * u[i];
            if i > 0 {
                s += self.off[i - 1] * u[i - 1];
            }
            if i + 1 < m {
                s += self.off[i] * u[i + 1];
            }
            out[i] = s;
        }
    }

    /// u^T A u (the energy without the |∂B_1| factor).
    pub fn quadratic_form(&self, u: &[f64]) -> f64 {
        let m = u.len();
        let mut s = 0.0;
        for i in 0..m {
            s += self.diag[i] * u[i] * u[i];
            if i + 1 < m {
                s += 2.0 * self.off[i] * u[i] * u[i + 1];
            }
        }
        s
    }

    /// Solve A u = 0 with the given nodes pinned to fixed values
    /// (essential conditions), Thomas elimination on the free nodes.
    pub fn solve_pinned(&self, pins: &[(usize, f64)]) -> Vec<f64> {
        let m = self.diag.len();
        let mut fixed = vec![f64::NAN; m];
        for &(i, val) in pins {
            fixed[i] = val;
        }
        // Build the modified tridiagonal system: pinned rows become
        // identity, their couplings move to the right-hand side.
        let mut a = vec![0.0; m]; // sub-diagonal
        let mut b = vec![0.0; m]; // diagonal
        let mut c = vec![0.0; m]; // super-diagonal
        let mut d = vec![0.0; m]; // rhs
        for i in 0..m {
            if fixed[i].is_finite() {
                b[i] = 1.0;
                d[i] = fixed[i];
                continue;
            }
            b[i] = self.diag[i];
            if i > 0 {
                if fixed[i - 1].is_finite() {
                    d[i] -= self.off[i - 1] * fixed[i - 1];
                } else {
                    a[i] = self.off[i - 1];
                }
            }
            if i + 1 < m {
                if fixed[i + 1].is_finite() {
                    d[i] -= self.off[i] * fixed[i + 1];
                } else {
                    c[i] = self.off[i];
                }
            }
        }
        // Thomas sweep
        for i in 1..m {
            let w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        let mut u = vec![0.0; m];
        u[m - 1] = d[m - 1] / b[m - 1];
        for i in (0..m - 1).rev() {
            u[i] = (d[i] - c[i] * u[i + 1]) / b[i];
        }
        u
    }

    /// Solve min 1/2 u^T A u with pinned values and upper bounds
    /// u_i <= cap_i on selected nodes (primal-dual active set).
    ///
    /// Returns the solution together with the final active node count.
    pub fn solve_obstacle(
        &self,
        pins: &[(usize, f64)],
        caps: &[(usize, f64)],
        max_sweeps: usize,
    ) -> (Vec<f64>, usize) {
        let mut active: Vec<bool> = vec![false; self.diag.len()];
        let mut residual = vec![0.0; self.diag.len()];
        let mut u = Vec::new();
        for _ in 0..max_sweeps {
            let mut all_pins: Vec<(usize, f64)> = pins.to_vec();
            for (k, &(i, cap)) in caps.iter().enumerate() {
                let _ = k;
                if active[i] {
                    all_pins.push((i, cap));
                }
            }
            u = self.solve_pinned(&all_pins);
            self.apply(&u, &mut residual);
            let mut changed = false;
            for &(i, cap) in caps {
                if active[i] {
                    // multiplier for u_i <= cap is -(A u)_i; release if negative
                    if residual[i] > 1e-14 {
                        active[i] = false;
                        changed = true;
                    }
                } else if u[i] > cap + 1e-14 {
                    active[i] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let count = active.iter().filter(|&&x| x).count();
        (u, count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pinned_solve_reproduces_homogeneous_solution() {
        // V ≡ 1, n = 3: pin u(r̂) = 1 at a node and u' natural elsewhere;
        // on [eps, r̂]: solution is sinh(r)/r normalized; on [r̂, 1]
        // (Neumann): e^r/r normalized.
        let grid = Arc::new(RadialGrid::new(3, 2001, 1e-6).unwrap());
        let v = PotentialSpec::constant(1.0).unwrap();
        let fem = RadialFem::assemble(Arc::clone(&grid), &v);
        let k = grid.nearest_node(0.6);
        let rk = grid.nodes()[k];
        let u = fem.solve_pinned(&[(k, 1.0)]);
        for (i, &r) in grid.nodes().iter().enumerate().step_by(100) {
            let exact = if r <= rk {
                (r.sinh() / r) / (rk.sinh() / rk)
            } else {
                (r.exp() / r) / (rk.exp() / rk)
            };
            assert!(
                (u[i] - exact).abs() < 5e-7,
                "fem vs exact at r={r}: {} vs {exact}",
                u[i]
            );
        }
        // energy should equal F(rk)/|∂B_1| = 1/(xi zeta)(rk)
        let q = fem.quadratic_form(&u);
        let exact_energy = 1.0 / ((rk.sinh() / rk) * (rk.exp() / rk));
        assert_relative_eq!(q, exact_energy, max_relative = 1e-6);
    }

    #[test]
    fn obstacle_solve_respects_caps() {
        let grid = Arc::new(RadialGrid::new(3, 801, 1e-6).unwrap());
        let v = PotentialSpec::constant(1.0).unwrap();
        let fem = RadialFem::assemble(Arc::clone(&grid), &v);
        let k = grid.nearest_node(0.55);
        // cap 0.9 on an inner region that the free solution exceeds
        let caps: Vec<(usize, f64)> = grid
            .nodes()
            .iter()
            .enumerate()
            .filter(|(_, &r)| r <= 0.5)
            .map(|(i, _)| (i, 0.9))
            .collect();
        let free = fem.solve_pinned(&[(k, 1.0)]);
        assert!(free[grid.nearest_node(0.5)] > 0.9);
        let (u, n_active) = fem.solve_obstacle(&[(k, 1.0)], &caps, 50);
        assert!(n_active > 0);
        for &(i, cap) in &caps {
            assert!(u[i] <= cap + 1e-12);
        }
        assert_relative_eq!(u[k], 1.0);
        // constrained energy is at least the free one
        assert!(fem.quadratic_form(&u) >= fem.quadratic_form(&free) - 1e-12);
    }
}
