//! Dev sweep: locate interior F-minima for bump potentials.

use radgreen::green::{BoundarySpec, GreenPair};
use radgreen::grid::RadialGrid;
use radgreen::landscape::{self, DEFAULT_R_LO};
use radgreen::potential::PotentialSpec;
use std::sync::Arc;

fn main() {
    let grid = Arc::new(RadialGrid::new(3, 2001, 1e-6).unwrap());
    let args: Vec<String> = std::env::args().collect();
    let amp: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(100.0);
    let center: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(0.85);
    let width: f64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(0.08);
    let base: f64 = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(1.0);

    let v = PotentialSpec::bump(base, amp, center, width).unwrap();
    println!(
        "V(0) = {:.4}, V(0.5) = {:.4}, V(0.85) = {:.4}",
        v.eval(0.0),
        v.eval(0.5),
        v.eval(0.85)
    );
    for bc in [BoundarySpec::Neumann, BoundarySpec::Dirichlet] {
        let pair = GreenPair::build(Arc::clone(&grid), &v, bc).unwrap();
        println!("--- A={amp} center={center} width={width} base={base} {bc:?}");
        for i in 0..=20 {
            let r = 0.05 + 0.9499 * i as f64 / 20.0;
            let f = landscape::eval_f(&pair, r).unwrap();
            println!("  F({r:.4}) = {f:.5}");
        }
        let minima = landscape::find_local_minima(&pair, DEFAULT_R_LO).unwrap();
        for m in &minima {
            println!(
                "  min at r = {:.5} (F = {:.5}, bracket [{:.4}, {:.4}], boundary={})",
                m.location, m.value, m.bracket.0, m.bracket.1, m.boundary
            );
        }
        if bc == BoundarySpec::Dirichlet {
            let cat = landscape::catrina_flag(&pair, &[6.0, 10.0, 50.0]).unwrap();
            for c in &cat {
                println!("  [p={}: {} flag={}]", c.p, c.monotone, c.no_solution_expected);
            }
        }
    }
}
