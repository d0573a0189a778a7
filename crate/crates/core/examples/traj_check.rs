//! Dev probe: does the rescaled minimizer profile follow the shooting ODE?

use radgreen::green::{BoundarySpec, GreenPair};
use radgreen::grid::RadialGrid;
use radgreen::landscape::ConstraintBox;
use radgreen::minimizer::{minimize_jp, MinimizeOptions};
use radgreen::ode::{integrate_along, OdeOptions};
use radgreen::potential::PotentialSpec;
use radgreen::profile::fd_derivatives;
use std::sync::Arc;

fn main() {
    let p = 10.0;
    let grid = Arc::new(RadialGrid::new(3, 2001, 1e-6).unwrap());
    let v = PotentialSpec::constant(1.0).unwrap();
    let pair = GreenPair::build(Arc::clone(&grid), &v, BoundarySpec::Neumann).unwrap();
    let bx = ConstraintBox::new(0.5, 1.0, 0.9434093477158866, 1.0).unwrap();
    let res = minimize_jp(&pair, &v, &bx, p, &MinimizeOptions::default(), None).unwrap();
    let vv = &res.rescaled.values;
    let dv = fd_derivatives(&grid, vv);
    // start the IVP from the minimizer data at r0 = 0.3, run to 1
    let i0 = grid.nearest_node(0.3);
    let targets: Vec<f64> = grid.nodes()[i0..].to_vec();
    let rhs = |r: f64, y: [f64; 2]| {
        let u: f64 = y[0];
        [y[1], -2.0 / r * y[1] + u - u.powi(10)]
    };
    let run = integrate_along(rhs, &targets, [vv[i0], dv[i0]], &OdeOptions::default());
    for (k, &r) in targets.iter().enumerate().step_by(200) {
        println!(
            "r={r:.3}  v_min={:.6}  v_ivp={:.6}  diff={:.2e}   v'_min={:.5} v'_ivp={:.5}",
            vv[i0 + k],
            run.values[k],
            (vv[i0 + k] - run.values[k]).abs(),
            dv[i0 + k],
            run.derivs[k]
        );
    }
    let last = targets.len() - 1;
    println!(
        "at r=1: v_min={:.6} v_ivp={:.6}  v'_min={:.5} v'_ivp={:.5}",
        vv[i0 + last],
        run.values[last],
        dv[i0 + last],
        run.derivs[last]
    );
}
