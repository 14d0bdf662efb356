//! Error types of the solver pipeline.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has zero perimeter")]
    DegeneratePolygon,
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("point lies on the boundary (edge {edge}, distance {distance:e})")]
    FocusOnBoundary { edge: usize, distance: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlotError {
    #[error("division by zero: origin coincides with the apex abscissa {0}")]
    DivisionDegeneracy(f64),
    #[error("origin {o} is not left of the apex abscissa {m}")]
    PreconditionViolated { o: f64, m: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("no event found at t = {t} in state {state}")]
    NoEventFound { t: f64, state: String },
    #[error("event budget of {budget} exceeded")]
    EventBudgetExceeded { budget: usize },
    #[error("sweep ended in state {found}, expected {expected}")]
    TerminalStateMismatch { found: String, expected: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("points at parameters {0} and {1} coincide")]
    CoincidentPoints(f64, f64),
}

/// Any failure of the full solve.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
}
