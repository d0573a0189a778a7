//! Dev instrumentation for the constrained minimizer.

use radgreen::green::{BoundarySpec, GreenPair};
use radgreen::grid::RadialGrid;
use radgreen::landscape::ConstraintBox;
use radgreen::minimizer::{minimize_jp, MinimizeOptions};
use radgreen::potential::PotentialSpec;
use std::sync::Arc;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let p: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(10.0);
    let points: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(2001);

    let grid = Arc::new(RadialGrid::new(3, points, 1e-6).unwrap());
    let v = PotentialSpec::constant(1.0).unwrap();
    let pair = GreenPair::build(grid, &v, BoundarySpec::Neumann).unwrap();
    let bx = ConstraintBox::new(0.5, 1.0, 0.9434093477158866, 1.0).unwrap();
    let opts = MinimizeOptions::default();
    let t0 = Instant::now();
    match minimize_jp(&pair, &v, &bx, p, &opts, None) {
        Ok(res) => println!(
            "p={p}: converged={} J_p={:.6} lambda={:.6} kkt={:.3e} mass={:.3e} iters={} time={:?}",
            res.converged,
            res.j_p,
            res.lambda_p,
            res.kkt_residual,
            res.mass_residual,
            res.iterations,
            t0.elapsed()
        ),
        Err(e) => println!("p={p}: ERROR {e} after {:?}", t0.elapsed()),
    }
}
