use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("profile has {actual} values but the grid has {expected} nodes")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("norm exponent must be > 1, got {0}")]
    InvalidExponent(f64),

    #[error("radius {0} outside the grid domain [{1}, 1]")]
    OutOfDomain(f64, f64),

    #[error("integrated solution became non-positive at r = {radius} (inadmissible potential?)")]
    NonPositiveSolution { radius: f64 },

    #[error("solution pair is numerically dependent: normalization constant {kappa} too small")]
    DependentSolutions { kappa: f64 },

    #[error("conserved product varies by {variation:.3e} relative to its median; pair unusable")]
    WronskianDrift { variation: f64 },

    #[error("operation requires {expected} boundary conditions, pair has {actual}")]
    WrongBoundary {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("plateau detected in F over {nodes} nodes near r = {radius} (degenerate landscape)")]
    Plateau { nodes: usize, radius: f64 },

    #[error("r = {radius} is not a critical point of F: |F'| = {fprime:.3e} exceeds {tol:.1e}")]
    NotCritical { radius: f64, fprime: f64, tol: f64 },

    #[error("constraint box rejected: {0}")]
    InvalidBox(String),

    #[error("obstacle cap {c} cannot accommodate unit mass (projection stalled at mass {mass})")]
    InfeasibleBox { c: f64, mass: f64 },

    #[error("lambda estimates disagree by {gap:.2}% (> {max:.0}%): minimizer likely unconverged")]
    LambdaDisagreement { gap: f64, max: f64 },

    #[error("peak search ended on the bracket boundary at r = {radius}; box does not isolate the minimum")]
    PeakAtBracketBoundary { radius: f64 },

    #[error("fixed-point iteration did not converge within {cap} iterations (last delta {delta:.3e})")]
    NoConvergence { cap: usize, delta: f64 },

    #[error("transformed construction requires n >= 3, got n = {0}")]
    DimensionTooLow(u32),

    #[error("shooting bracket [{lo}, {hi}] does not change sign of the terminal mismatch")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("exponent p must be > 1, got {0}")]
    InvalidP(f64),

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse error in {what}: {detail}")]
    Parse { what: String, detail: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
