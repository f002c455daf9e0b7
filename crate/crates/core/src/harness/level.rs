//! Kuratowski convergence of level sets `f_n^{-1}(b)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::sets::{
    default_margin, kuratowski_defects_in, sample_fiber, solve_points_2d, DefectPair, FnLevel, GridWindow, SampledSet,
};

use super::report::{check_indices, decide_pairs, mid_position, ConvergenceReport};
use super::HarnessOptions;

/// Scalar function families `f_n -> f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelFamily {
    /// `x^2 - 1 + 1/n` on `R`.
    QuadraticShift,
    /// `x^2 + y^2 - 1 + (-1)^n/n` on `R^2`.
    CircleAlternating,
    /// `x^2 + y^2 - 1` for every `n`.
    CircleFixed,
    /// `x^2` for every `n`; 0 is a critical value.
    Square,
}

/// Vector function families `F_n -> F` with derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VectorFamily {
    /// `y - x^2 + x/n` on `R^2`.
    ParabolaShift,
    /// `y - x^2` for every `n`.
    ParabolaFixed,
    /// `x + 1/n` on `R`.
    LinearShift,
    /// `(x - y^2 + (y + 1)/n, y + x/n)` on `R^2`.
    PlanarShift,
}

const LEVEL_NAMES: [(LevelFamily, &str); 4] = [
    (LevelFamily::QuadraticShift, "quadratic-shift"),
    (LevelFamily::CircleAlternating, "circle-alternating"),
    (LevelFamily::CircleFixed, "circle-fixed"),
    (LevelFamily::Square, "square"),
];

const VECTOR_NAMES: [(VectorFamily, &str); 4] = [
    (VectorFamily::ParabolaShift, "parabola-shift"),
    (VectorFamily::ParabolaFixed, "parabola-fixed"),
    (VectorFamily::LinearShift, "linear-shift"),
    (VectorFamily::PlanarShift, "planar-shift"),
];

macro_rules! named {
    ($t:ty, $names:expr) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str($names.iter().find(|(v, _)| v == self).unwrap().1)
            }
        }

        impl FromStr for $t {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                let key = s.trim().to_ascii_lowercase().replace('_', "-");
                $names
                    .iter()
                    .find(|(_, n)| *n == key)
                    .map(|(v, _)| *v)
                    .ok_or_else(|| Error::UnknownFamily(s.to_string()))
            }
        }

        impl $t {
            pub fn all() -> Vec<$t> {
                $names.iter().map(|(v, _)| *v).collect()
            }
        }
    };
}

named!(LevelFamily, LEVEL_NAMES);
named!(VectorFamily, VECTOR_NAMES);

fn alt(n: u64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl LevelFamily {
    pub fn dim(&self) -> usize {
        match self {
            LevelFamily::QuadraticShift | LevelFamily::Square => 1,
            _ => 2,
        }
    }

    /// `f_n(x)`; `n = None` is the limit `f`.
    pub fn value(&self, n: Option<u64>, x: &Point<f64>) -> f64 {
        let t = n.map_or(0.0, |n| 1.0 / n as f64);
        match self {
            LevelFamily::QuadraticShift => x.coord(0).powi(2) - 1.0 + t,
            LevelFamily::CircleAlternating => {
                let s = n.map_or(0.0, alt);
                x.coord(0).powi(2) + x.coord(1).powi(2) - 1.0 + s * t
            }
            LevelFamily::CircleFixed => x.coord(0).powi(2) + x.coord(1).powi(2) - 1.0,
            LevelFamily::Square => x.coord(0).powi(2),
        }
    }

    /// Gradient norm bound on the box `[lo, hi]` (the same for every `n`).
    fn lipschitz(&self, lo: &Point<f64>, hi: &Point<f64>) -> f64 {
        let m = |i: usize| lo.coord(i).abs().max(hi.coord(i).abs());
        match self {
            LevelFamily::QuadraticShift | LevelFamily::Square => 2.0 * m(0),
            _ => 2.0 * m(0).hypot(m(1)),
        }
    }
}

impl VectorFamily {
    /// `(p, q)`: source and target dimensions.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            VectorFamily::LinearShift => (1, 1),
            VectorFamily::PlanarShift => (2, 2),
            _ => (2, 1),
        }
    }

    /// `F_n(x)` (only the first `q` entries are used); `n = None` is `F`.
    pub fn value(&self, n: Option<u64>, x: &Point<f64>) -> [f64; 2] {
        let t = n.map_or(0.0, |n| 1.0 / n as f64);
        let c = |i: usize| x.coord(i);
        match self {
            VectorFamily::ParabolaShift => [c(1) - c(0) * c(0) + c(0) * t, 0.0],
            VectorFamily::ParabolaFixed => [c(1) - c(0) * c(0), 0.0],
            VectorFamily::LinearShift => [c(0) + t, 0.0],
            VectorFamily::PlanarShift => [c(0) - c(1) * c(1) + (c(1) + 1.0) * t, c(1) + c(0) * t],
        }
    }

    fn lipschitz(&self, lo: &Point<f64>, hi: &Point<f64>) -> f64 {
        let m = |i: usize| lo.coord(i).abs().max(hi.coord(i).abs());
        match self {
            VectorFamily::ParabolaShift => (2.0 * m(0) + 1.0).hypot(1.0),
            VectorFamily::ParabolaFixed => (2.0 * m(0)).hypot(1.0),
            VectorFamily::LinearShift => 1.0,
            VectorFamily::PlanarShift => f64::INFINITY,
        }
    }
}

/// Central-difference Jacobian (`q x p`, row major) at step `d`.
fn jacobian(f: &(dyn Fn(&Point<f64>) -> [f64; 2] + Sync), x: &Point<f64>, p: usize, q: usize, d: f64) -> [[f64; 2]; 2] {
    let mut j = [[0.0; 2]; 2];
    for k in 0..p {
        let mut e = [0.0; 2];
        e[k] = d;
        let e = Point::new(&e[..p]).unwrap();
        let a = f(&x.add(&e));
        let b = f(&x.sub(&e));
        for i in 0..q {
            j[i][k] = (a[i] - b[i]) / (2.0 * d);
        }
    }
    j
}

/// Singular values `(largest, smallest)` of the leading `q x p` block.
fn singular_values(j: &[[f64; 2]; 2], p: usize, q: usize) -> (f64, f64) {
    match (q, p) {
        (1, 1) => (j[0][0].abs(), j[0][0].abs()),
        (1, 2) => {
            let s = j[0][0].hypot(j[0][1]);
            (s, s)
        }
        _ => {
            // eigenvalues of J^T J
            let a = j[0][0] * j[0][0] + j[1][0] * j[1][0];
            let b = j[0][0] * j[0][1] + j[1][0] * j[1][1];
            let c = j[0][1] * j[0][1] + j[1][1] * j[1][1];
            let tr = a + c;
            let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
            (((tr + disc) / 2.0).sqrt(), ((tr - disc) / 2.0).max(0.0).sqrt())
        }
    }
}

fn sub_matrix(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            out[i][k] = a[i][k] - b[i][k];
        }
    }
    out
}

/// Fiber sample or `None` when the level set misses the window.
fn fiber_set(points: Vec<Point<f64>>, eps: f64, window: &GridWindow<f64>) -> Result<Option<SampledSet<f64>>> {
    if points.is_empty() {
        return Ok(None);
    }
    Ok(Some(SampledSet::new(points, eps, window.clone())?))
}

/// Kuratowski defects with empty sets allowed: an empty side is a vacuous
/// supremum, and a nonempty side against an empty set is capped at the
/// window diameter.
fn fiber_defects(
    s_n: &Option<SampledSet<f64>>,
    s_lim: &Option<SampledSet<f64>>,
    window: &GridWindow<f64>,
    margin: f64,
) -> Result<DefectPair> {
    let shrunk = window.shrink(margin)?;
    let cap = window.diameter();
    let any_in = |s: &Option<SampledSet<f64>>| s.as_ref().is_some_and(|s| !s.restricted(&shrunk).is_empty());
    match (s_n, s_lim) {
        (Some(a), Some(b)) if any_in(s_n) || any_in(s_lim) => kuratowski_defects_in(a, b, window, margin),
        _ => Ok(DefectPair {
            lower_defect: if any_in(s_lim) { cap } else { 0.0 },
            upper_defect: if any_in(s_n) { cap } else { 0.0 },
        }),
    }
}

fn check_window(window: &GridWindow<f64>, dim: usize) -> Result<()> {
    if window.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: window.dim(),
        });
    }
    Ok(())
}

fn regular_threshold(window: &GridWindow<f64>, eps: f64) -> f64 {
    eps + window.h()
}

/// Kuratowski defects of `f_n^{-1}(b)` against `f^{-1}(b)`, fibers sampled
/// by sign bracketing at fidelity `opts.eps`.
///
/// `b` must be a regular value of `f` on the window: the smallest
/// central-difference gradient (step `h/4`) over the sampled fiber,
/// including possible tangencies, must exceed `eps + h`.
pub fn verify_level_sets(
    family: LevelFamily,
    b: f64,
    n_list: &[u64],
    window: &GridWindow<f64>,
    tol: f64,
    opts: &HarnessOptions,
) -> Result<ConvergenceReport> {
    check_indices(n_list)?;
    check_window(window, family.dim())?;
    let eps = opts.eps;
    let h = window.h();
    let margin = opts.margin.unwrap_or(default_margin(h, eps));
    let level = |n: Option<u64>| FnLevel {
        value: move |x: &Point<f64>| family.value(n, x),
        lipschitz: move |lo: &Point<f64>, hi: &Point<f64>| family.lipschitz(lo, hi),
    };

    let lim = sample_fiber(&level(None), b, window, eps)?;
    let d = h / 4.0;
    let grad = |x: &Point<f64>| {
        let f = |y: &Point<f64>| [family.value(None, y), 0.0];
        let j = jacobian(&f, x, family.dim(), 1, d);
        singular_values(&j, family.dim(), 1).1
    };
    let probe: Vec<Point<f64>> = lim.roots.iter().chain(&lim.touches).copied().collect();
    let delta = probe.par_iter().map(grad).reduce(|| f64::INFINITY, f64::min);
    let threshold = regular_threshold(window, eps);
    if delta < threshold {
        return Err(Error::NotRegularValue { delta, threshold });
    }
    let s_lim = fiber_set(lim.roots, eps, window)?;

    let mut report = ConvergenceReport::new(format!("level-sets/{family}"), n_list.to_vec(), tol);
    for &n in n_list {
        let s = sample_fiber(&level(Some(n)), b, window, eps)?;
        let s_n = fiber_set(s.roots, eps, window)?;
        report.defect_series.push(fiber_defects(&s_n, &s_lim, window, margin)?);
    }
    report.verdict = decide_pairs(n_list, &report.defect_series, tol, 2.0 * (eps + h));
    report.metric("gradient_lower_bound", if delta.is_finite() { delta } else { f64::MAX });
    report.metric("regular_threshold", threshold);
    report.metric("margin", margin);
    if s_lim.is_none() {
        report.note("limit fiber misses the window");
    }
    Ok(report)
}

/// The Jacobian deviation at the last index must not exceed the one at the
/// index nearest `n_max / 2` (up to rounding).
fn derivative_trend(n_list: &[u64], series: &[f64]) -> Result<()> {
    let (last, earlier) = (*series.last().unwrap(), series[mid_position(n_list)]);
    if last > earlier + 1e-9 {
        return Err(Error::DerivativeDivergence { last, earlier });
    }
    Ok(())
}

/// As [`verify_level_sets`] for `F_n: R^p -> R^q`, `q <= p <= 2`, with the
/// derivative hypothesis checked on the grid: the series of
/// `sup_x |DF_n(x) - DF(x)|` (operator norm, central differences at step
/// `h/4`) must not increase from the index nearest `n_max/2` to the last.
pub fn verify_level_sets_c1(
    family: VectorFamily,
    b: &Point<f64>,
    n_list: &[u64],
    window: &GridWindow<f64>,
    tol: f64,
    opts: &HarnessOptions,
) -> Result<ConvergenceReport> {
    check_indices(n_list)?;
    let (p, q) = family.dims();
    check_window(window, p)?;
    b.check_dim(q)?;
    let eps = opts.eps;
    let h = window.h();
    let d = h / 4.0;
    let margin = opts.margin.unwrap_or(default_margin(h, eps));
    let nodes = window.nodes();

    let fiber = |n: Option<u64>| -> Result<Vec<Point<f64>>> {
        if q == 1 {
            let f = FnLevel {
                value: move |x: &Point<f64>| family.value(n, x)[0],
                lipschitz: move |lo: &Point<f64>, hi: &Point<f64>| family.lipschitz(lo, hi),
            };
            Ok(sample_fiber(&f, b.coord(0), window, eps)?.roots)
        } else {
            let f = move |x: &Point<f64>| family.value(n, x);
            solve_points_2d(&f, [b.coord(0), b.coord(1)], window, eps)
        }
    };
    let jac = |n: Option<u64>, x: &Point<f64>| {
        let f = move |y: &Point<f64>| family.value(n, y);
        jacobian(&f, x, p, q, d)
    };

    let lim = fiber(None)?;
    let delta = lim
        .par_iter()
        .map(|x| singular_values(&jac(None, x), p, q).1)
        .reduce(|| f64::INFINITY, f64::min);
    let threshold = regular_threshold(window, eps);
    if delta < threshold {
        return Err(Error::NotRegularValue { delta, threshold });
    }
    let s_lim = fiber_set(lim, eps, window)?;

    let mut report = ConvergenceReport::new(format!("level-sets-c1/{family}"), n_list.to_vec(), tol);
    let mut pointwise = 0.0f64;
    for &n in n_list {
        let dev = nodes
            .par_iter()
            .map(|x| singular_values(&sub_matrix(&jac(Some(n), x), &jac(None, x)), p, q).0)
            .reduce(|| 0.0, f64::max);
        report.deviation_series.push(dev);
        pointwise = nodes
            .par_iter()
            .map(|x| {
                let (a, c) = (family.value(Some(n), x), family.value(None, x));
                (0..q).map(|i| (a[i] - c[i]).abs()).fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        let s_n = fiber_set(fiber(Some(n))?, eps, window)?;
        report.defect_series.push(fiber_defects(&s_n, &s_lim, window, margin)?);
    }
    let series = &report.deviation_series;
    derivative_trend(n_list, series)?;
    report.verdict = decide_pairs(n_list, &report.defect_series, tol, 2.0 * (eps + h));
    report.metric("gradient_lower_bound", if delta.is_finite() { delta } else { f64::MAX });
    report.metric("regular_threshold", threshold);
    report.metric("final_value_deviation", pointwise);
    report.metric("margin", margin);
    Ok(report)
}
