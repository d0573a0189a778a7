//! Dev probe: profile and slopes at the obstacle edge.

use radgreen::green::{BoundarySpec, GreenPair};
use radgreen::grid::RadialGrid;
use radgreen::landscape::ConstraintBox;
use radgreen::minimizer::{minimize_jp, MinimizeOptions};
use radgreen::potential::PotentialSpec;
use std::sync::Arc;

fn main() {
    let grid = Arc::new(RadialGrid::new(3, 2001, 1e-6).unwrap());
    let v = PotentialSpec::constant(1.0).unwrap();
    let pair = GreenPair::build(Arc::clone(&grid), &v, BoundarySpec::Neumann).unwrap();
    let c = 0.9434093477158866;
    let bx = ConstraintBox::new(0.5, 1.0, c, 1.0).unwrap();
    let res = minimize_jp(&pair, &v, &bx, 10.0, &MinimizeOptions::default(), None).unwrap();
    let k = grid.nearest_node(0.5);
    for i in (k - 6)..(k + 6) {
        let r = grid.nodes()[i];
        let u = res.u.values[i];
        let slope = (res.u.values[i + 1] - res.u.values[i]) / grid.spacing();
        println!(
            "i={i} r={r:.7} obstacle={} u={u:.10} c-u={:.3e} right-slope={slope:.5}",
            bx.is_obstacle(r),
            c - u
        );
    }
}
