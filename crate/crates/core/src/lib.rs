//! Radial Green functions on the unit ball, the landscape function F(r),
//! and obstacle-constrained energy minimization for large exponents.

pub mod error;
pub mod fem;
pub mod fixtures;
pub mod grid;
pub mod green;
pub mod landscape;
pub mod minimizer;
pub mod ode;
pub mod potential;
pub mod shooting;
pub mod profile;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use green::{BoundarySpec, GreenPair};
pub use grid::RadialGrid;
pub use potential::PotentialSpec;
pub use profile::Profile;
