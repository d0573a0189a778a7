//! Dev probe: inspect the Dirichlet p=10 pseudo-solution.

use radgreen::green::BoundarySpec;
use radgreen::grid::RadialGrid;
use radgreen::potential::PotentialSpec;
use radgreen::shooting::{default_ratio_ladder, find_positive_solution};
use std::sync::Arc;

fn main() {
    let grid = Arc::new(RadialGrid::new(3, 2001, 1e-6).unwrap());
    let v = PotentialSpec::constant(1.0).unwrap();
    let ladder = default_ratio_ladder();
    if let Some(res) =
        find_positive_solution(&grid, &v, 10.0, BoundarySpec::Dirichlet, 1.0, &ladder).unwrap()
    {
        println!(
            "FOUND a*={} mismatch={:.3e} nonconstant={} sup={}",
            res.a_star,
            res.mismatch,
            res.nonconstant,
            res.profile.sup_norm()
        );
        for i in (0..grid.len()).step_by(100) {
            println!("r={:.4} u={:.8}", grid.nodes()[i], res.profile.values[i]);
        }
        let last = grid.len() - 1;
        println!("u(1)={:.3e} u(1-h)={:.3e}", res.profile.values[last], res.profile.values[last-1]);
    } else {
        println!("no solution found");
    }
}
