//! Optimal feed-link placement: given a polygon boundary and a point, find
//! the boundary point to connect so that the largest detour ratio over the
//! whole boundary is as small as possible.

pub mod error;
pub mod geom;
pub mod instances;
pub mod merge;
pub mod oracle;
pub mod plot;
pub mod poly;
pub mod retarget;
pub mod sweep;
pub mod tol;

pub use error::{GeomError, OracleError, PlotError, SolveError, SweepError};
pub use geom::{HyperbolaSeg, Point, PolygonChain, Segments};
pub use merge::{optimal_feedlink, solve, FeedLinkResult, MergedSequence, Solution};
pub use retarget::{RetargetingPoint, Retargets};
pub use sweep::{LeverKind, LeverState, RealizedSequence};
pub use tol::Tolerances;
