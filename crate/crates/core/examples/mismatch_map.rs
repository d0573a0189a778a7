//! Dev probe: terminal mismatch vs center value for shooting.

use radgreen::green::BoundarySpec;
use radgreen::grid::RadialGrid;
use radgreen::potential::PotentialSpec;
use radgreen::shooting::integrate_from_center;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let p: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(10.0);
    let lambda: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(1.0);
    let lo: f64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(0.05);
    let hi: f64 = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(3.0);
    let bc = if args.get(5).map(|s| s == "d").unwrap_or(false) {
        BoundarySpec::Dirichlet
    } else {
        BoundarySpec::Neumann
    };
    let grid = RadialGrid::new(3, 1001, 1e-6).unwrap();
    let v = PotentialSpec::constant(lambda).unwrap();
    let m = 40;
    for i in 0..=m {
        let a = lo * (hi / lo).powf(i as f64 / m as f64);
        let shot = integrate_from_center(&grid, &v, p, a, bc).unwrap();
        let peak = shot
            .profile
            .as_ref()
            .map(|pr| pr.peak(&grid).0)
            .unwrap_or(f64::NAN);
        println!(
            "a = {a:>10.6}  mismatch = {:>13.6e}  completed = {}  peak_r = {peak:.4}",
            shot.mismatch, shot.completed
        );
    }
}
