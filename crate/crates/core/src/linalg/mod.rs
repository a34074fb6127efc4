//! Dense linear algebra over a configuration space carrying either the
//! Euclidean inner product or the mass metric.
//!
//! Mass-metric work is done by rescaling coordinates by `sqrt(m_i)`, running
//! Euclidean algebra, and mapping back, so there is a single SVD path.

mod angles;
mod duality;
mod metric;
mod oracle;
mod subspace;

pub use angles::{principal_angles, AngleVector};
pub use duality::{check_angle_duality, DualityReport, IdentityCheck};
pub use metric::{metric_inner, MassVector, Metric};
pub use oracle::{principal_angles_oracle, ORACLE_MAX_DIM};
pub use subspace::{orthogonal_complement, orthonormalize, subspace_intersection, Subspace};
