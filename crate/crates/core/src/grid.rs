//! Radial grids on (0, 1] with r^{n-1}-weighted quadrature.
//!
//! The grid is uniform on [eps, 1]; the quadrature weights use the exact
//! moments of r^{n-1} per cell, so piecewise-linear integrands are
//! integrated exactly (up to the O(eps^n) sliver at the origin, which is
//! folded onto the first node).

use crate::error::{Error, Result};

/// Measure of the unit sphere S^{n-1}: |∂B_1| = 2 π^{n/2} / Γ(n/2).
///
/// n is an integer, so Γ(n/2) is evaluated by the exact half-integer
/// recursion instead of a general-purpose approximation.
pub fn unit_sphere_area(n: u32) -> f64 {
    let pi = std::f64::consts::PI;
    2.0 * pi.powf(n as f64 / 2.0) / gamma_half_integer(n)
}

/// Measure of the unit ball: |B_1| = |∂B_1| / n.
pub fn unit_ball_volume(n: u32) -> f64 {
    unit_sphere_area(n) / n as f64
}

/// Γ(k/2) for integer k >= 1 via Γ(x+1) = x Γ(x), Γ(1/2) = sqrt(pi), Γ(1) = 1.
fn gamma_half_integer(k: u32) -> f64 {
    assert!(k >= 1);
    let mut x = if k % 2 == 0 { 1.0 } else { 0.5 };
    let mut g = if k % 2 == 0 {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    while 2.0 * x < k as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Uniform radial grid with r^{n-1}-weighted quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    n: u32,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    eps: f64,
    spacing: f64,
}

impl RadialGrid {
    /// Build a grid with `points` uniformly spaced nodes on [eps, 1].
    ///
    /// Rejects `n < 2`, `points < 64` (quadrature accuracy unguaranteed) and
    /// `eps` outside (0, 1e-4].
    pub fn new(n: u32, points: usize, eps: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("dimension n = {n} must be >= 2")));
        }
        if points < 64 {
            return Err(Error::InvalidGrid(format!(
                "points = {points} < 64: quadrature accuracy unguaranteed"
            )));
        }
        if !(eps > 0.0 && eps <= 1e-4) {
            return Err(Error::InvalidGrid(format!(
                "inner offset eps = {eps} must lie in (0, 1e-4]"
            )));
        }

        let m = points - 1;
        let spacing = (1.0 - eps) / m as f64;
        let mut nodes: Vec<f64> = (0..points)
            .map(|i| eps + spacing * i as f64)
            .collect();
        nodes[m] = 1.0;

        let nf = n as f64;
        let mut weights = vec![0.0; points];
        // Mass of the excluded ball [0, eps], attributed to the first node.
        weights[0] = eps.powi(n as i32) / nf;
        for i in 0..m {
            let (a, b) = (nodes[i], nodes[i + 1]);
            let h = b - a;
            // Exact moments of r^{n-1} over the cell.
            let m0 = (b.powi(n as i32) - a.powi(n as i32)) / nf;
            let m1 = (b.powi(n as i32 + 1) - a.powi(n as i32 + 1)) / (nf + 1.0);
            // Split so that linear integrands are exact: w_a*f(a) + w_b*f(b).
            weights[i] += (b * m0 - m1) / h;
            weights[i + 1] += (m1 - a * m0) / h;
        }

        Ok(Self {
            n,
            nodes,
            weights,
            eps,
            spacing,
        })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn sphere_area(&self) -> f64 {
        unit_sphere_area(self.n)
    }

    /// Index of the grid node closest to `r`.
    pub fn nearest_node(&self, r: f64) -> usize {
        let i = ((r - self.eps) / self.spacing).round() as isize;
        i.clamp(0, self.nodes.len() as isize - 1) as usize
    }

    /// Index of the cell [r_i, r_{i+1}] containing `r` (clamped to the domain).
    pub fn cell_of(&self, r: f64) -> usize {
        let i = ((r - self.eps) / self.spacing).floor() as isize;
        i.clamp(0, self.nodes.len() as isize - 2) as usize
    }

    /// Σ w_i f_i, approximating ∫_0^1 f(r) r^{n-1} dr.
    pub fn quad(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.nodes.len() {
            return Err(Error::ShapeMismatch {
                expected: self.nodes.len(),
                actual: values.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(values)
            .map(|(w, f)| w * f)
            .sum())
    }

    /// ∫_a^b f(r) r^{n-1} dr with f sampled at (sub)cell endpoints.
    ///
    /// Uses the same exact-moment split as the grid weights on every cell
    /// intersected with [a, b]; accuracy O(h^2) for smooth f.
    pub fn integrate_weighted_on<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        assert!(b >= a);
        let a = a.max(self.eps);
        let b = b.min(1.0);
        if b <= a {
            return 0.0;
        }
        let nf = self.n as f64;
        let ni = self.n as i32;
        let mut total = 0.0;
        let mut lo = a;
        let mut cell = self.cell_of(a);
        loop {
            let hi = self.nodes[cell + 1].min(b);
            if hi > lo {
                let m0 = (hi.powi(ni) - lo.powi(ni)) / nf;
                let m1 = (hi.powi(ni + 1) - lo.powi(ni + 1)) / (nf + 1.0);
                let h = hi - lo;
                let (fa, fb) = (f(lo), f(hi));
                total += fa * (hi * m0 - m1) / h + fb * (m1 - lo * m0) / h;
            }
            if hi >= b {
                break;
            }
            lo = hi;
            cell += 1;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sphere_area_matches_known_dimensions() {
        let pi = std::f64::consts::PI;
        assert_relative_eq!(unit_sphere_area(2), 2.0 * pi, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(3), 4.0 * pi, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(4), 2.0 * pi * pi, max_relative = 1e-14);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * pi / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn constant_mass_is_one_over_n() {
        // n=3, 2001 points: ∫_0^1 r^2 dr = 1/3
        let g = RadialGrid::new(3, 2001, 1e-6).unwrap();
        let ones = vec![1.0; g.len()];
        assert_relative_eq!(g.quad(&ones).unwrap(), 1.0 / 3.0, max_relative = 1e-8);

        // n=2, 1001 points: ∫_0^1 r dr = 1/2
        let g = RadialGrid::new(2, 1001, 1e-6).unwrap();
        let ones = vec![1.0; g.len()];
        assert_relative_eq!(g.quad(&ones).unwrap(), 0.5, max_relative = 1e-8);

        // still within tolerance at the largest admissible offset
        let g = RadialGrid::new(2, 1001, 1e-4).unwrap();
        let ones = vec![1.0; g.len()];
        assert_relative_eq!(g.quad(&ones).unwrap(), 0.5, max_relative = 1e-8);
    }

    #[test]
    fn linear_integrand_n3() {
        // ∫_0^1 r · r^2 dr = 1/4
        let g = RadialGrid::new(3, 2001, 1e-6).unwrap();
        let f: Vec<f64> = g.nodes().to_vec();
        assert_relative_eq!(g.quad(&f).unwrap(), 0.25, max_relative = 1e-8);
    }

    #[test]
    fn quadratic_integrand_n3() {
        // ∫_0^1 r^2 · r^2 dr = 1/5
        let g = RadialGrid::new(3, 2001, 1e-6).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|r| r * r).collect();
        assert_relative_eq!(g.quad(&f).unwrap(), 0.2, max_relative = 1e-6);
    }

    /// Richardson-extrapolated trapezoid oracle for ∫_0^1 f(r) r^{n-1} dr.
    fn richardson_oracle<F: Fn(f64) -> f64>(n: u32, f: F) -> f64 {
        let trap = |m: usize| -> f64 {
            let h = 1.0 / m as f64;
            let g = |r: f64| f(r) * r.powi(n as i32 - 1);
            let mut s = 0.5 * (g(0.0) + g(1.0));
            for i in 1..m {
                s += g(i as f64 * h);
            }
            s * h
        };
        // Two levels of Richardson on trapezoid: error O(h^6).
        let (t1, t2, t3) = (trap(4096), trap(8192), trap(16384));
        let r1 = (4.0 * t2 - t1) / 3.0;
        let r2 = (4.0 * t3 - t2) / 3.0;
        (16.0 * r2 - r1) / 15.0
    }

    #[test]
    fn sinh_squared_matches_refined_oracle() {
        let g = RadialGrid::new(3, 2001, 1e-6).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|r| r.sinh().powi(2)).collect();
        let reference = richardson_oracle(3, |r| r.sinh().powi(2));
        // closed form: (3/4 sinh 2 - 1/2 cosh 2 - 1/3)/2
        let closed = (0.75 * 2.0_f64.sinh() - 0.5 * 2.0_f64.cosh() - 1.0 / 3.0) / 2.0;
        assert_relative_eq!(reference, closed, max_relative = 1e-10);
        assert_relative_eq!(g.quad(&f).unwrap(), reference, max_relative = 1e-6);
    }

    #[test]
    fn partial_interval_integration() {
        let g = RadialGrid::new(3, 2001, 1e-6).unwrap();
        // ∫_0.25^0.75 r^2 dr = (0.75^3 - 0.25^3)/3
        let exact = (0.75_f64.powi(3) - 0.25_f64.powi(3)) / 3.0;
        let got = g.integrate_weighted_on(0.25, 0.75, |_| 1.0);
        assert_relative_eq!(got, exact, max_relative = 1e-12);
        // smooth integrand, cut points off the mesh
        let exact_sinh = {
            let f = |r: f64| r.sinh() * r * r;
            // fine Simpson
            let (a, b, m) = (0.31_f64, 0.87_f64, 20000);
            let h = (b - a) / m as f64;
            let mut s = f(a) + f(b);
            for i in 1..m {
                let x = a + i as f64 * h;
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
            }
            s * h / 3.0
        };
        let got = g.integrate_weighted_on(0.31, 0.87, |r| r.sinh());
        assert_relative_eq!(got, exact_sinh, max_relative = 1e-6);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(RadialGrid::new(1, 2001, 1e-6).is_err());
        assert!(RadialGrid::new(3, 63, 1e-6).is_err());
        assert!(RadialGrid::new(3, 2001, 0.0).is_err());
        assert!(RadialGrid::new(3, 2001, 1e-3).is_err());
    }

    #[test]
    fn weights_positive_and_nodes_increasing() {
        let g = RadialGrid::new(4, 501, 1e-5).unwrap();
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!(g.nodes().windows(2).all(|p| p[0] < p[1]));
        assert_eq!(*g.nodes().last().unwrap(), 1.0);
    }
}
