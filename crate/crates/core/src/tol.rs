//! Numeric tolerances shared by every stage of the pipeline.
//!
//! Parameter-space tolerances are relative to the perimeter so that results
//! do not depend on the absolute scale of the input.

/// Tolerance set used by the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for parameter comparisons (multiplied by the perimeter).
    pub param_rel: f64,
    /// Absolute tolerance for slope residuals.
    pub slope: f64,
    /// Lower clamp for hyperbola distances, relative to the perimeter.
    pub dist_clamp_rel: f64,
    /// Relative distance (to the bounding-box diagonal) below which the focus
    /// is considered to lie on the boundary.
    pub boundary_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        DEFAULT
    }
}

impl Tolerances {
    pub fn param(&self, perimeter: f64) -> f64 {
        self.param_rel * perimeter
    }
}

/// Default tolerances.
pub const DEFAULT: Tolerances = Tolerances {
    param_rel: 1e-9,
    slope: 1e-12,
    dist_clamp_rel: 1e-9,
    boundary_rel: 1e-12,
};
