//! Dev probe: minimizer profile details on the boundary fixture.

use radgreen::green::{BoundarySpec, GreenPair};
use radgreen::grid::RadialGrid;
use radgreen::landscape::ConstraintBox;
use radgreen::minimizer::{minimize_jp, MinimizeOptions};
use radgreen::potential::PotentialSpec;
use std::sync::Arc;

fn main() {
    let p: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().unwrap())
        .unwrap_or(10.0);
    let grid = Arc::new(RadialGrid::new(3, 2001, 1e-6).unwrap());
    let v = PotentialSpec::constant(1.0).unwrap();
    let pair = GreenPair::build(Arc::clone(&grid), &v, BoundarySpec::Neumann).unwrap();
    let bx = ConstraintBox::new(0.5, 1.0, 0.9434093477158866, 1.0).unwrap();
    let res = minimize_jp(&pair, &v, &bx, p, &MinimizeOptions::default(), None).unwrap();
    println!(
        "p={p} converged={} lambda={:.6} J={:.6} active={} kkt={:.2e}",
        res.converged, res.lambda_p, res.j_p, res.active_set_size, res.kkt_residual
    );
    let iv = |r: f64| {
        let i = grid.nearest_node(r);
        (res.u.values[i], res.rescaled.values[i])
    };
    for r in [1e-6, 0.2, 0.4, 0.45, 0.5, 0.55, 0.7, 0.9, 1.0] {
        let (u, vv) = iv(r);
        println!("  r={r:<8} u={u:.6} v={vv:.6} (c = {})", bx.c);
    }
    // where does the obstacle bind?
    let mut nbind = 0;
    let mut first = f64::NAN;
    let mut last = f64::NAN;
    for (i, &r) in grid.nodes().iter().enumerate() {
        if bx.is_obstacle(r) && res.u.values[i] >= bx.c - 1e-12 {
            if nbind == 0 {
                first = r;
            }
            last = r;
            nbind += 1;
        }
    }
    println!("  obstacle-bound nodes: {nbind} on [{first:.4}, {last:.4}]");
}

// appended: fine print near the obstacle edge via env var
