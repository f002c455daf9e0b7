//! Graphical convergence of subdifferentials of distance functions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{hausdorff, ConvexPolytope, Point};
use crate::multifun::{graphical_defects, pointwise_defect, subdiff_graph_of_pl_in, MultifunctionGraph};
use crate::sets::{default_margin, limit_set, make_family, FamilyId, GridWindow, SampledSet};
use crate::subdiff::{clarke_sq_dist, default_projection_tol, projection_set, PLFunction1D};

use super::report::{check_indices, decide, decide_pairs, ConvergenceReport, Verdict};
use super::HarnessOptions;

/// Sampled graph of `x -> ∂ dist^2_S(x)` over the nodes of `window`.
///
/// Values are sampled at spacing `window.h()`, which is also the graph
/// fidelity.
pub fn sq_dist_graph(set: &SampledSet<f64>, window: &GridWindow<f64>) -> Result<MultifunctionGraph<f64>> {
    let h = window.h();
    let b = 2.0 * window.diameter() + h;
    let band = GridWindow::cube(window.dim(), -b, b, h)?;
    let tol = default_projection_tol(set);
    MultifunctionGraph::from_polytope_map(window, &band, h, h, |x| clarke_sq_dist(set, x, tol))
}

/// Graphical defects of `∂ dist^2_{X_n}` against `∂ dist^2_X` for a corpus
/// family and its reference limit; the grid is `window` with its step.
pub fn verify_sq_dist_convergence(
    family: FamilyId,
    n_list: &[u64],
    window: &GridWindow<f64>,
    tol: f64,
    opts: &HarnessOptions,
) -> Result<ConvergenceReport> {
    check_indices(n_list)?;
    let h = window.h();
    let margin = opts.margin.unwrap_or(default_margin(h, h));
    let lim = limit_set(family, window, opts.eps)?;
    let g_lim = sq_dist_graph(&lim, window)?;
    let mut report = ConvergenceReport::new(format!("sq-dist/{family}"), n_list.to_vec(), tol);
    for &n in n_list {
        let x_n = make_family(family, n, window, opts.eps)?;
        let g_n = sq_dist_graph(&x_n, window)?;
        if g_n.truncated() {
            report.note(format!("n = {n}: graph truncated to the value band"));
        }
        report.defect_series.push(graphical_defects(&g_n, &g_lim, margin)?);
    }
    let slack = 2.0 * (opts.eps + h);
    report.verdict = decide_pairs(n_list, &report.defect_series, tol, slack);
    report.note(format!("margin {margin}, grid h {h}, eps {}", opts.eps));
    report.metric("margin", margin);
    report.metric("grid_h", h);
    report.metric("eps", opts.eps);
    Ok(report)
}

/// Experiment slot for sets in `R^3`, where the theorem is open.
///
/// Graphs would live in `R^6`, so the slot measures the pointwise
/// surrogate `sup_x H(2(x - P_n(x)), 2(x - P(x)))` over the grid nodes, with
/// `P` the approximate projections (extreme points only). No verdict is
/// expected; the one computed is informational.
pub fn verify_sq_dist_3d(
    members: &[(u64, SampledSet<f64>)],
    limit: &SampledSet<f64>,
    grid: &GridWindow<f64>,
    tol: f64,
) -> Result<ConvergenceReport> {
    if grid.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: grid.dim(),
        });
    }
    let indices: Vec<u64> = members.iter().map(|(n, _)| *n).collect();
    check_indices(&indices)?;
    let nodes = grid.nodes();
    let values = |s: &SampledSet<f64>, x: &Point<f64>| -> Result<Vec<Point<f64>>> {
        let p = projection_set(s, x, default_projection_tol(s))?;
        Ok(p.candidates.iter().map(|c| x.sub(c).scale(&2.0)).collect())
    };
    let mut report = ConvergenceReport::new("sq-dist-3d", indices.clone(), tol);
    for (_, s) in members {
        let dev = nodes
            .par_iter()
            .map(|x| hausdorff(&values(s, x)?, &values(limit, x)?))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        report.deviation_series.push(dev);
    }
    report.verdict = decide(&indices, &[report.deviation_series.clone()], tol, 2.0 * grid.h());
    report.note("open case: no expected verdict");
    Ok(report)
}

/// The distance to `(-inf, -1/n] ∪ [1/n, inf)` on `[lo, hi]`, which is
/// `max(0, 1/n - |x|)`.
pub fn dist_paper_family(n: u64, lo: f64, hi: f64) -> Result<PLFunction1D<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("family index n must be >= 1".into()));
    }
    if !(lo < 0.0 && 0.0 < hi) {
        return Err(Error::InvalidWindow("the window must contain 0 in its interior".into()));
    }
    let r = 1.0 / n as f64;
    let mut xs = vec![lo];
    xs.extend([-r, 0.0, r].into_iter().filter(|x| lo < *x && *x < hi));
    xs.push(hi);
    PLFunction1D::from_fn(xs, |x| (r - x.abs()).max(0.0))
}

/// Candidate limits for the graphs of `∂ dist_{X_n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistLimit {
    /// `∂ dist_R ≡ {0}`.
    Zero,
    /// `[-1, 1]` at 0 and `{0}` elsewhere.
    JumpAtZero,
}

const DIST_BAND: (f64, f64) = (-2.0, 2.0);

fn dist_limit_graph(limit: DistLimit, lo: f64, hi: f64, eps: f64) -> Result<MultifunctionGraph<f64>> {
    let zero = PLFunction1D::new(vec![lo, hi], vec![0.0, 0.0])?;
    let flat = subdiff_graph_of_pl_in(&zero, eps, DIST_BAND)?;
    match limit {
        DistLimit::Zero => Ok(flat),
        DistLimit::JumpAtZero => {
            let mut pairs = flat.pairs();
            let k = (2.0 / eps).ceil() as usize;
            for i in 0..=k {
                pairs.push((Point::p1(0.0), Point::p1(-1.0 + 2.0 * i as f64 / k as f64)));
            }
            MultifunctionGraph::from_pairs(&pairs, eps, flat.window().clone())
        }
    }
}

/// Graphical defects of `∂ dist_{X_n}` (closed form, [`dist_paper_family`])
/// against `∂ dist_R ≡ {0}`.
pub fn verify_dist_counterexample(
    n_list: &[u64],
    window: &GridWindow<f64>,
    tol: f64,
    opts: &HarnessOptions,
) -> Result<ConvergenceReport> {
    verify_dist_counterexample_against(DistLimit::Zero, n_list, window, tol, opts)
}

pub fn verify_dist_counterexample_against(
    limit: DistLimit,
    n_list: &[u64],
    window: &GridWindow<f64>,
    tol: f64,
    opts: &HarnessOptions,
) -> Result<ConvergenceReport> {
    check_indices(n_list)?;
    if window.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: window.dim(),
        });
    }
    let (lo, hi) = (window.lo().coord(0), window.hi().coord(0));
    let eps = opts.eps;
    let margin = opts.margin.unwrap_or(default_margin(eps, eps));
    let g_lim = dist_limit_graph(limit, lo, hi, eps)?;
    let id = match limit {
        DistLimit::Zero => "dist-counterexample",
        DistLimit::JumpAtZero => "dist-counterexample/jump-limit",
    };
    let mut report = ConvergenceReport::new(id, n_list.to_vec(), tol);
    let zero = ConvexPolytope::interval(0.0, 0.0);
    let mut witness = f64::INFINITY;
    for &n in n_list {
        let f = dist_paper_family(n, lo, hi)?;
        let g_n = subdiff_graph_of_pl_in(&f, eps, DIST_BAND)?;
        report.defect_series.push(graphical_defects(&g_n, &g_lim, margin)?);
        // the slice over 0 is [-1, 1]; its point (0, 1) is far from {0}
        let at0 = pointwise_defect(&g_n, &Point::p1(0.0), &zero, eps / 2.0)?;
        witness = witness.min(at0.upper_defect);
    }
    report.verdict = decide_pairs(n_list, &report.defect_series, tol, 2.0 * eps);
    report.metric("slice0_distance_to_zero_min", witness);
    report.metric("margin", margin);
    report.note(format!(
        "slice x = 0: the point (0, 1) lies in every graph, distance to {{0}} at least {witness}"
    ));
    if report.verdict == Verdict::Diverges {
        report.note("persistent defect over the last half of the series");
    }
    Ok(report)
}
