//! Falsifiable numerical experiments for the convergence theorems, and the
//! counterexample corpus around them.
//!
//! Every experiment returns a [`ConvergenceReport`] whose verdict follows
//! [`decide`]. Experiments run in `f64`.

mod convex;
mod fiber;
mod level;
mod lipschitz;
mod report;
mod sqdist;
mod zarankiewicz;

pub use convex::{check_convex, convexity_certificate, is_convex_family, verify_convex_boundary};
pub use fiber::{
    fiber_branch_defects, fiber_counterexample_defect, fiber_defect_series, fiber_delta, fiber_report, BranchDefects,
};
pub use level::{verify_level_sets, verify_level_sets_c1, LevelFamily, VectorFamily};
pub use lipschitz::{
    pl_family_limit, rectangle_graph, spike_slice_report, verify_lipschitz_theorem, PlLimit, UNIVALUED_FRACTION,
};
pub use report::{decide, decide_pairs, ConvergenceReport, Verdict};
pub use sqdist::{
    dist_paper_family, sq_dist_graph, verify_dist_counterexample, verify_dist_counterexample_against,
    verify_sq_dist_3d, verify_sq_dist_convergence, DistLimit,
};
pub use zarankiewicz::{verify_extraction, zarankiewicz_extract, zarankiewicz_report, CellSetSequence};

/// Sampling options shared by the experiments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarnessOptions {
    /// Fidelity of the sampled sets and graphs.
    pub eps: f64,
    /// Window shrink for defects; `None` uses `2(h + eps)`.
    pub margin: Option<f64>,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions {
            eps: 1e-3,
            margin: None,
        }
    }
}
