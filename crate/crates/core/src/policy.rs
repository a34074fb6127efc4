//! Numeric tolerances shared by every module.

use serde::Serialize;

/// One record for every tolerance that changes a dimension count or a
/// degeneracy verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericPolicy {
    /// Principal angles below this (radians) count as zero.
    pub zero_angle: f64,
    /// Relative column-norm cutoff during orthonormalization.
    pub rank_cut: f64,
    /// Distance below which a point is considered to lie on a wall.
    pub on_wall: f64,
    /// Smallest admissible advance time between two collision events.
    pub min_advance: f64,
    /// Slack allowed above 1 for singular values before clamping.
    pub cosine_slack: f64,
}

impl NumericPolicy {
    pub const DEFAULT: NumericPolicy = NumericPolicy {
        zero_angle: 1e-8,
        rank_cut: 1e-10,
        on_wall: 1e-9,
        min_advance: 1e-9,
        cosine_slack: 1e-12,
    };
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::DEFAULT
    }
}
