//! Recorded desk-scale fixtures shared by the verification suite and the
//! integration tests.

use crate::error::Result;
use crate::green::{BoundarySpec, GreenPair};
use crate::grid::RadialGrid;
use crate::landscape::ConstraintBox;
use crate::potential::PotentialSpec;
use std::sync::Arc;

/// Standard verification grid: n = 3, 2001 points, inner offset 1e-6.
pub fn standard_grid() -> Arc<RadialGrid> {
    Arc::new(RadialGrid::new(3, 2001, 1e-6).unwrap())
}

/// Unit constant potential.
pub fn unit_potential() -> PotentialSpec {
    PotentialSpec::constant(1.0).unwrap()
}

/// The boundary-minimum box for the constant-potential Neumann problem:
/// R1 = 0.5 with c halfway between xi(0.5)/xi(1) and 1.
pub fn boundary_box() -> ConstraintBox {
    let m = (0.5_f64.sinh() / 0.5) / 1.0_f64.sinh();
    ConstraintBox::new(0.5, 1.0, 0.5 * (1.0 + m), 1.0).unwrap()
}

/// Bump potential whose Dirichlet landscape has an interior minimum:
/// V(r) = 1 + 100 exp(-((r - 0.3)/0.1)^2).
///
/// Recorded by an amplitude sweep: the interior minimum sits near
/// r = 0.442 with the landscape non-monotone for every tested exponent.
pub fn interior_bump_potential() -> PotentialSpec {
    PotentialSpec::bump(1.0, 100.0, 0.3, 0.1).unwrap()
}

/// Location band of the recorded interior minimum.
pub const INTERIOR_MIN_BAND: (f64, f64) = (0.4, 0.7);

/// The Dirichlet pair for the interior-minimum fixture.
pub fn interior_pair(grid: Arc<RadialGrid>) -> Result<GreenPair> {
    GreenPair::build(grid, &interior_bump_potential(), BoundarySpec::Dirichlet)
}

/// Neumann pair for the constant unit potential.
pub fn constant_pair(grid: Arc<RadialGrid>) -> Result<GreenPair> {
    GreenPair::build(grid, &unit_potential(), BoundarySpec::Neumann)
}
