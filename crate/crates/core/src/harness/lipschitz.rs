//! Graphical limits of Clarke subdifferentials of Lipschitz PL functions.

use crate::error::Result;
use crate::geom::{ConvexPolytope, Point};
use crate::multifun::{graphical_defects, pointwise_defect, subdiff_graph_of_pl_in, MultifunctionGraph};
use crate::sets::default_margin;
use crate::subdiff::{make_pl_family, pl_subdifferential, PLFunction1D, PlFamily};

use super::report::{check_indices, decide, decide_pairs, mid_position, ConvergenceReport, Verdict};
use super::HarnessOptions;

/// Largest fraction of the domain on which the limit may be multivalued
/// and still count as almost everywhere univalued.
pub const UNIVALUED_FRACTION: f64 = 0.1;

/// Largest log-log growth rate of the Lipschitz constants, between the
/// index nearest `n_max / 2` and the last, compatible with a common bound.
pub const MAX_LIPSCHITZ_GROWTH: f64 = 0.5;

/// `ln(L_last / L_mid) / ln(n_last / n_mid)`, zero when the constants stay 0.
fn lipschitz_growth(n_list: &[u64], lips: &[f64]) -> f64 {
    let mid = mid_position(n_list);
    let last = n_list.len() - 1;
    if mid == last {
        return 0.0;
    }
    match (lips[mid], lips[last]) {
        (a, b) if a == 0.0 && b == 0.0 => 0.0,
        (a, _) if a == 0.0 => f64::INFINITY,
        (a, b) => (b / a).ln() / (n_list[last] as f64 / n_list[mid] as f64).ln(),
    }
}

/// Reference limit of a PL family: the uniform limit `f` (if any) and the
/// graphical limit `D` of the subdifferentials, as a graph builder.
pub struct PlLimit {
    pub function: Option<PLFunction1D<f64>>,
    graph: Box<dyn Fn(f64, (f64, f64)) -> Result<MultifunctionGraph<f64>> + Sync>,
}

impl PlLimit {
    /// Samples of `D` at fidelity `eps` in the target band.
    pub fn graph(&self, eps: f64, band: (f64, f64)) -> Result<MultifunctionGraph<f64>> {
        (self.graph)(eps, band)
    }
}

fn abs() -> PLFunction1D<f64> {
    PLFunction1D::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0]).unwrap()
}

fn zero() -> PLFunction1D<f64> {
    PLFunction1D::new(vec![-1.0, 1.0], vec![0.0, 0.0]).unwrap()
}

/// The flat graph plus the vertical `{0} x [a, b]`, clipped to the band.
fn with_vertical(eps: f64, band: (f64, f64), a: f64, b: f64) -> Result<MultifunctionGraph<f64>> {
    let flat = subdiff_graph_of_pl_in(&zero(), eps, band)?;
    let mut pairs = flat.pairs();
    let (a, b) = (a.max(band.0), b.min(band.1));
    let k = ((b - a) / eps).ceil() as usize;
    for i in 0..=k {
        pairs.push((Point::p1(0.0), Point::p1(a + (b - a) * i as f64 / k as f64)));
    }
    MultifunctionGraph::from_pairs(&pairs, eps, flat.window().clone())
}

/// The filled rectangle `[-1, 1] x [lo, hi]` on a lattice of step `eps`.
pub fn rectangle_graph(eps: f64, band: (f64, f64), lo: f64, hi: f64) -> Result<MultifunctionGraph<f64>> {
    let flat = subdiff_graph_of_pl_in(&zero(), eps, band)?;
    let (lo, hi) = (lo.max(band.0), hi.min(band.1));
    let kx = (2.0 / eps).ceil() as usize;
    let ky = ((hi - lo) / eps).ceil() as usize;
    let mut pairs = Vec::with_capacity((kx + 1) * (ky + 1));
    for i in 0..=kx {
        let x = -1.0 + 2.0 * i as f64 / kx as f64;
        for j in 0..=ky {
            pairs.push((Point::p1(x), Point::p1(lo + (hi - lo) * j as f64 / ky as f64)));
        }
    }
    MultifunctionGraph::from_pairs(&pairs, eps, flat.window().clone())
}

/// Analytic reference limits of the corpus PL families.
pub fn pl_family_limit(family: PlFamily) -> PlLimit {
    match family {
        PlFamily::ScaledAbs | PlFamily::Constant => PlLimit {
            function: Some(abs()),
            graph: Box::new(|eps, band| subdiff_graph_of_pl_in(&abs(), eps, band)),
        },
        PlFamily::ShrinkingSlope => PlLimit {
            function: Some(zero()),
            graph: Box::new(|eps, band| subdiff_graph_of_pl_in(&zero(), eps, band)),
        },
        PlFamily::ToothAtZero => PlLimit {
            function: Some(zero()),
            graph: Box::new(|eps, band| with_vertical(eps, band, -1.0, 1.0)),
        },
        PlFamily::Sawtooth => PlLimit {
            function: Some(zero()),
            graph: Box::new(|eps, band| rectangle_graph(eps, band, -1.0, 1.0)),
        },
        // uniform limits fail at 0: g_n -> 1 off 0, g_n(0) = 0
        PlFamily::Spike => PlLimit {
            function: None,
            graph: Box::new(|eps, band| with_vertical(eps, band, f64::NEG_INFINITY, f64::INFINITY)),
        },
    }
}

/// Fraction of the grid `xs` where the slice of `g` (sources within `eps/2`)
/// spreads by more than `tol`.
fn multivalued_fraction(g: &MultifunctionGraph<f64>, xs: &[f64], eps: f64, tol: f64) -> Result<f64> {
    let mut bad = 0usize;
    for x in xs {
        let s = g.slice(&Point::p1(*x), eps / 2.0)?;
        let lo = s.iter().map(|p| p.coord(0)).fold(f64::INFINITY, f64::min);
        let hi = s.iter().map(|p| p.coord(0)).fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > tol {
            bad += 1;
        }
    }
    Ok(bad as f64 / xs.len() as f64)
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let k = ((hi - lo) / step).round() as usize;
    (0..=k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect()
}

/// Tests the Lipschitz theorem on a corpus family.
///
/// Hypothesis: a common Lipschitz constant (growth exponent below
/// [`MAX_LIPSCHITZ_GROWTH`]), graphical
/// convergence of `Γ_{∂ f_n}` to the reference limit `D`, and `D` almost
/// everywhere univalued (multivalued on at most [`UNIVALUED_FRACTION`] of the
/// grid). Conclusion: `f_n -> f` in sup norm and `D(x) = ∂f(x)` at grid
/// points off the breakpoints of `f` where `D` is univalued. A failed
/// hypothesis gives INCONCLUSIVE with a note; a failed conclusion under a
/// met hypothesis gives DIVERGES.
pub fn verify_lipschitz_theorem(
    family: PlFamily,
    n_list: &[u64],
    tol: f64,
    opts: &HarnessOptions,
) -> Result<ConvergenceReport> {
    check_indices(n_list)?;
    let eps = opts.eps;
    let margin = opts.margin.unwrap_or(default_margin(eps, eps));
    let members: Vec<PLFunction1D<f64>> = n_list
        .iter()
        .map(|&n| make_pl_family(family, n))
        .collect::<Result<_>>()?;
    let lips: Vec<f64> = members.iter().map(PLFunction1D::lipschitz).collect();
    let l_max = lips.iter().cloned().fold(0.0, f64::max);
    let band = (-(l_max + 1.0), l_max + 1.0);
    let limit = pl_family_limit(family);
    let g_lim = limit.graph(eps, band)?;

    let mut report = ConvergenceReport::new(format!("lipschitz/{family}"), n_list.to_vec(), tol);
    for f in &members {
        let g_n = subdiff_graph_of_pl_in(f, eps, band)?;
        report.defect_series.push(graphical_defects(&g_n, &g_lim, margin)?);
    }
    let growth = lipschitz_growth(n_list, &lips);
    report.metric("lipschitz_max", l_max);
    report.metric("lipschitz_growth_exponent", growth);
    report.metric("margin", margin);

    let xs = grid(-1.0 + margin, 1.0 - margin, eps);
    let spread = multivalued_fraction(&g_lim, &xs, eps, tol)?;
    report.metric("multivalued_fraction", spread);

    if let Some(f) = &limit.function {
        report.deviation_series = members.iter().map(|g| g.sup_distance(f)).collect::<Result<_>>()?;
        let anchor = members.last().unwrap().eval(&0.0)? - f.eval(&0.0)?;
        report.metric("anchor_gap", anchor.abs());
    }

    let graphical = decide_pairs(n_list, &report.defect_series, tol, 2.0 * eps);
    let mut unmet = Vec::new();
    if growth >= MAX_LIPSCHITZ_GROWTH {
        unmet.push("no common Lipschitz constant");
    }
    if graphical != Verdict::Converges {
        unmet.push("graphs do not converge to the reference limit");
    }
    if spread > UNIVALUED_FRACTION {
        unmet.push("limit not a.e. univalued");
    }
    if limit.function.is_none() {
        unmet.push("no uniform limit");
    }
    if !unmet.is_empty() {
        for s in unmet {
            report.note(format!("hypothesis failed: {s}"));
        }
        report.verdict = Verdict::Inconclusive;
        return Ok(report);
    }

    let f = limit.function.as_ref().unwrap();
    let uniform = decide(n_list, &[report.deviation_series.clone()], tol, 0.0);
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    let breaks = f.breakpoints();
    for x in &xs {
        if breaks.iter().any(|b| (b - x).abs() <= 2.0 * eps + tol) {
            continue;
        }
        let slice = g_lim.slice(&Point::p1(*x), eps / 2.0)?;
        let lo = slice.iter().map(|p| p.coord(0)).fold(f64::INFINITY, f64::min);
        let hi = slice.iter().map(|p| p.coord(0)).fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > tol {
            continue;
        }
        checked += 1;
        let want: ConvexPolytope<f64> = pl_subdifferential(f, x)?;
        if pointwise_defect(&g_lim, &Point::p1(*x), &want, eps / 2.0)?.max() > tol {
            mismatches += 1;
        }
    }
    report.metric("derivative_points_checked", checked as f64);
    report.metric("derivative_mismatches", mismatches as f64);
    report.verdict = if uniform == Verdict::Converges && mismatches == 0 {
        Verdict::Converges
    } else {
        report.note("conclusion failed under the hypothesis");
        Verdict::Diverges
    };
    Ok(report)
}

/// Slices of the spike family over 0 against `[-radius, radius]`.
///
/// The slice is `[-n, n]`, so the limit value at 0 is not compact: the
/// distance from the slice to the band grows like `n - radius`.
pub fn spike_slice_report(n_list: &[u64], radius: f64, tol: f64, opts: &HarnessOptions) -> Result<ConvergenceReport> {
    check_indices(n_list)?;
    let eps = opts.eps;
    let band = ConvexPolytope::interval(-radius, radius);
    let mut report = ConvergenceReport::new(format!("spike-slice/R={radius}"), n_list.to_vec(), tol);
    for &n in n_list {
        let f = make_pl_family::<f64>(PlFamily::Spike, n)?;
        let b = f.lipschitz() + 1.0;
        let g = subdiff_graph_of_pl_in(&f, eps, (-b, b))?;
        report
            .defect_series
            .push(pointwise_defect(&g, &Point::p1(0.0), &band, eps / 2.0)?);
    }
    report.verdict = decide_pairs(n_list, &report.defect_series, tol, 0.0);
    let last = report.defect_series.last().unwrap().upper_defect;
    report.metric("final_slice_excess", last);
    report.note("non-compact limit value at 0: the slice is [-n, n]");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> HarnessOptions {
        HarnessOptions {
            eps: 5e-3,
            margin: None,
        }
    }

    #[test]
    fn scaled_abs_converges() {
        let n = [2, 4, 8, 16, 32, 64];
        let r = verify_lipschitz_theorem(PlFamily::ScaledAbs, &n, 0.05, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Converges, "{:?}", r.notes);
        for (d, n) in r.deviation_series.iter().zip(n) {
            assert!((d - 1.0 / n as f64).abs() < 1e-12);
        }
        let c = verify_lipschitz_theorem(PlFamily::Constant, &[1, 2, 3], 0.05, &opts()).unwrap();
        assert_eq!(c.verdict, Verdict::Converges);
        assert!(c.deviation_series.iter().all(|d| *d == 0.0));
    }

    #[test]
    fn sawtooth_hypothesis_fails() {
        let r = verify_lipschitz_theorem(PlFamily::Sawtooth, &[4, 8, 16, 32, 64], 0.05, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.notes.iter().any(|s| s.contains("limit not a.e. univalued")));
        // teeth 1/n apart: every point of the rectangle within 1/(2n) of a vertical
        let last = r.defect_series.last().unwrap();
        assert!(last.max() <= 1.0 / 128.0 + 0.01, "{last:?}");
    }

    #[test]
    fn tooth_and_slope_converge() {
        let t = verify_lipschitz_theorem(PlFamily::ToothAtZero, &[4, 8, 16, 32, 64], 0.05, &opts()).unwrap();
        assert_eq!(t.verdict, Verdict::Converges, "{:?}", t.notes);
        let s = verify_lipschitz_theorem(PlFamily::ShrinkingSlope, &[2, 4, 8, 16, 32], 0.05, &opts()).unwrap();
        assert_eq!(s.verdict, Verdict::Converges, "{:?}", s.notes);
    }

    #[test]
    fn spike_has_no_common_constant() {
        let r = verify_lipschitz_theorem(PlFamily::Spike, &[2, 4, 8, 16], 0.05, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.notes.iter().any(|s| s.contains("no common Lipschitz constant")));
        let s = spike_slice_report(&[5, 10, 20, 40], 5.0, 0.05, &opts()).unwrap();
        assert!((s.metrics["final_slice_excess"] - 35.0).abs() < 1e-9);
        assert_eq!(s.verdict, Verdict::Diverges);
    }
}
