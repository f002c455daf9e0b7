//! Clarke subdifferentials: exact calculus for piecewise-linear functions of
//! one variable, and the squared-distance formula over sampled sets.

mod families;
mod pl;
mod projection;

pub use families::{make_pl_family, PlFamily};
pub use pl::{lebourg_witness, pl_subdifferential, PLFunction1D};
pub use projection::{clarke_sq_dist, default_projection_tol, medial_axis_flag, projection_set, ProjectionSet};
