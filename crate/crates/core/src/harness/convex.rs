//! Convex sets whose boundaries converge.

use crate::error::{Error, Result};
use crate::geom::{convex_hull, hausdorff, Point};
use crate::sets::{
    default_margin, kuratowski_defects, limit_set, make_family, FamilyId, GridWindow, PlanarShape, SampledSet, SetPart,
};

use super::report::{check_indices, decide_pairs, ConvergenceReport};
use super::HarnessOptions;

/// Whether the closed polygon `vertices` is strictly convex: every turn has
/// the same sign.
pub fn convexity_certificate(vertices: &[Point<f64>]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    let mut sign = 0.0f64;
    for i in 0..n {
        let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
        let cross = (b.coord(0) - a.coord(0)) * (c.coord(1) - b.coord(1))
            - (b.coord(1) - a.coord(1)) * (c.coord(0) - b.coord(0));
        if cross == 0.0 || cross * sign < 0.0 {
            return false;
        }
        sign = cross;
    }
    true
}

/// [`convexity_certificate`] as an error for member `n`.
pub fn check_convex(n: u64, vertices: &[Point<f64>]) -> Result<()> {
    if convexity_certificate(vertices) {
        Ok(())
    } else {
        Err(Error::NotConvex { n })
    }
}

/// Whether the corpus shape has convex compact members.
pub fn is_convex_family(shape: PlanarShape) -> bool {
    matches!(shape, PlanarShape::RegularPolygon | PlanarShape::UnitDisc)
}

fn member_outline(shape: PlanarShape, n: u64) -> Vec<Point<f64>> {
    let k = match shape {
        PlanarShape::RegularPolygon => n as usize,
        _ => 720,
    };
    (0..k)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / k as f64;
            Point::p2(t.cos(), t.sin())
        })
        .collect()
}

fn hull_body(points: &[Point<f64>], eps: f64, window: &GridWindow<f64>) -> Result<(SampledSet<f64>, SampledSet<f64>)> {
    let hull = convex_hull(points)?;
    let grown = window.inflate(eps);
    let keep = |v: Vec<Point<f64>>| -> Vec<Point<f64>> { v.into_iter().filter(|p| grown.contains(p)).collect() };
    let body = keep(hull.sample(eps / std::f64::consts::SQRT_2));
    let vs = hull.extreme_points();
    let mut rim = Vec::new();
    for i in 0..vs.len() {
        let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
        let k = (a.dist(&b) / eps).ceil().max(1.0) as usize;
        for j in 0..k {
            rim.push(a.add(&b.sub(&a).scale(&(j as f64 / k as f64))));
        }
    }
    let rim = keep(rim);
    Ok((
        SampledSet::new(body, eps, window.clone())?,
        SampledSet::new(rim, eps, window.clone())?,
    ))
}

/// Tests the convex-boundary theorem on a planar corpus shape.
///
/// Per `n`, the defects of `E_n` against `conv F` (`F` the reference limit
/// of the boundaries) form the series, and the boundary defects of `F_n`
/// against `F` the deviation series. The metric `boundary_mismatch` is
/// `H(∂ conv F, F)` inside the window. Convex shapes must pass the
/// convexity certificate at every `n`; for the negative corpus a failed
/// certificate is only noted.
pub fn verify_convex_boundary(
    shape: PlanarShape,
    n_list: &[u64],
    window: &GridWindow<f64>,
    tol: f64,
    opts: &HarnessOptions,
) -> Result<ConvergenceReport> {
    check_indices(n_list)?;
    if window.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: window.dim(),
        });
    }
    let eps = opts.eps;
    let h = window.h();
    let margin = opts.margin.unwrap_or(default_margin(h, eps));
    let set = FamilyId::Planar(shape, SetPart::Set);
    let boundary = FamilyId::Planar(shape, SetPart::Boundary);
    let f = limit_set(boundary, window, eps)?;
    let (conv_f, rim) = hull_body(f.points(), eps, f.window())?;

    let mut report = ConvergenceReport::new(format!("convex-boundary/{}", set), n_list.to_vec(), tol);
    for &n in n_list {
        if is_convex_family(shape) {
            check_convex(n, &member_outline(shape, n))?;
        }
        let e_n = make_family(set, n, window, eps)?;
        let f_n = make_family(boundary, n, window, eps)?;
        report.defect_series.push(kuratowski_defects(&e_n, &conv_f, margin)?);
        report
            .deviation_series
            .push(kuratowski_defects(&f_n, &f, margin)?.max());
    }
    if !is_convex_family(shape) {
        report.note("members are not convex and compact");
    }
    let inner = window.shrink(margin)?;
    let (rim_in, f_in) = (rim.restricted(&inner), f.restricted(&inner));
    let mismatch = if rim_in.is_empty() || f_in.is_empty() {
        window.diameter()
    } else {
        hausdorff(&rim_in, &f_in)?
    };
    report.metric("boundary_mismatch", mismatch);
    report.metric("margin", margin);
    if mismatch > tol {
        report.note(format!("boundary mismatch: H(∂ conv F, F) = {mismatch}"));
    }
    report.verdict = decide_pairs(n_list, &report.defect_series, tol, 2.0 * (eps + h));
    Ok(report)
}
