//! Closed subsets of `R^p` as certified finite samples, their distance
//! functions, and Kuratowski convergence defects.

mod family;
mod fiber;
mod index;
pub(crate) mod io;
mod region;

pub(crate) use family::fiber_xy;
pub use family::{limit_set, make_family, FamilyId, PlanarShape, SetPart};
pub use fiber::{sample_fiber, solve_points_2d, FiberSample, FnLevel, LevelFunction};
pub use index::PointIndex;
pub use region::{Region, Shape};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Real;

/// Axis-aligned box with a grid spacing.
#[derive(Clone, Debug, PartialEq)]
pub struct GridWindow<T> {
    lo: Point<T>,
    hi: Point<T>,
    h: T,
}

impl<T: Real> GridWindow<T> {
    pub fn new(lo: Point<T>, hi: Point<T>, h: T) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch {
                expected: lo.dim(),
                found: hi.dim(),
            });
        }
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::InvalidWindow(format!("grid step {h} must be positive")));
        }
        for i in 0..lo.dim() {
            let side = hi.coord(i) - lo.coord(i);
            if !(side > T::zero()) {
                return Err(Error::InvalidWindow(format!(
                    "lo must be below hi on axis {i} ({} vs {})",
                    lo.coord(i),
                    hi.coord(i)
                )));
            }
            if h > side {
                return Err(Error::InvalidWindow(format!(
                    "grid step {h} exceeds side length {side} on axis {i}"
                )));
            }
        }
        Ok(GridWindow { lo, hi, h })
    }

    /// The cube `[a, b]^dim`.
    pub fn cube(dim: usize, a: T, b: T, h: T) -> Result<Self> {
        Self::new(Point::new(&vec![a; dim])?, Point::new(&vec![b; dim])?, h)
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn lo(&self) -> &Point<T> {
        &self.lo
    }

    pub fn hi(&self) -> &Point<T> {
        &self.hi
    }

    pub fn h(&self) -> T {
        self.h
    }

    /// Same box, different spacing (clamped to the shortest side).
    pub fn with_step(&self, h: T) -> Result<Self> {
        Self::new(self.lo, self.hi, h.min(self.min_side()))
    }

    pub fn side(&self, i: usize) -> T {
        self.hi.coord(i) - self.lo.coord(i)
    }

    pub fn min_side(&self) -> T {
        (0..self.dim()).map(|i| self.side(i)).fold(T::infinity(), T::min)
    }

    /// Number of grid nodes along each axis.
    pub fn counts(&self) -> Vec<usize> {
        let slack = T::lit(1e-9);
        (0..self.dim())
            .map(|i| ((self.side(i) / self.h + slack).floor().to_usize().unwrap_or(0)) + 1)
            .collect()
    }

    pub fn node_count(&self) -> usize {
        self.counts().iter().product()
    }

    /// Grid nodes `lo + k h`, last axis varying fastest.
    pub fn nodes(&self) -> Vec<Point<T>> {
        let counts = self.counts();
        let total: usize = counts.iter().product();
        let dim = self.dim();
        let mut out = Vec::with_capacity(total);
        let mut k = vec![0usize; dim];
        let mut buf = vec![T::zero(); dim];
        for _ in 0..total {
            for i in 0..dim {
                buf[i] = self.lo.coord(i) + T::from_usize(k[i]).unwrap() * self.h;
            }
            out.push(Point::new(&buf).expect("finite grid node"));
            for i in (0..dim).rev() {
                k[i] += 1;
                if k[i] < counts[i] {
                    break;
                }
                k[i] = 0;
            }
        }
        out
    }

    fn slack(&self) -> T {
        T::lit(1e-12) * (T::one() + self.diameter())
    }

    /// Closed containment, with a relative rounding slack.
    pub fn contains(&self, p: &Point<T>) -> bool {
        let s = self.slack();
        p.dim() == self.dim()
            && (0..self.dim()).all(|i| p.coord(i) >= self.lo.coord(i) - s && p.coord(i) <= self.hi.coord(i) + s)
    }

    pub fn contains_window(&self, other: &GridWindow<T>) -> bool {
        self.contains(&other.lo) && self.contains(&other.hi)
    }

    /// Moves every face inward by `margin`.
    pub fn shrink(&self, margin: T) -> Result<Self> {
        let m = margin.to_f64().unwrap_or(f64::NAN);
        if !(margin >= T::zero()) {
            return Err(Error::InvalidParameter(format!("negative margin {m}")));
        }
        let dim = self.dim();
        let lo: Vec<T> = (0..dim).map(|i| self.lo.coord(i) + margin).collect();
        let hi: Vec<T> = (0..dim).map(|i| self.hi.coord(i) - margin).collect();
        if (0..dim).any(|i| !(lo[i] < hi[i])) {
            return Err(Error::EmptyAfterShrink { margin: m });
        }
        let lo = Point::new(&lo)?;
        let hi = Point::new(&hi)?;
        let min_side = (0..dim).map(|i| hi.coord(i) - lo.coord(i)).fold(T::infinity(), T::min);
        GridWindow::new(lo, hi, self.h.min(min_side))
    }

    pub fn inflate(&self, r: T) -> Self {
        let dim = self.dim();
        let lo: Vec<T> = (0..dim).map(|i| self.lo.coord(i) - r).collect();
        let hi: Vec<T> = (0..dim).map(|i| self.hi.coord(i) + r).collect();
        GridWindow {
            lo: Point::new(&lo).expect("finite"),
            hi: Point::new(&hi).expect("finite"),
            h: self.h,
        }
    }

    pub fn diameter(&self) -> T {
        self.lo.dist(&self.hi)
    }

    /// Window on the product space, spacing the smaller of the two.
    pub fn product(&self, other: &GridWindow<T>) -> Result<Self> {
        GridWindow::new(
            self.lo.concat(&other.lo)?,
            self.hi.concat(&other.hi)?,
            self.h.min(other.h),
        )
    }

    /// The sub-window on coordinates `range`.
    pub fn project(&self, range: std::ops::Range<usize>) -> Result<Self> {
        let lo = self.lo.project(range.clone())?;
        let hi = self.hi.project(range)?;
        let min_side = (0..lo.dim())
            .map(|i| hi.coord(i) - lo.coord(i))
            .fold(T::infinity(), T::min);
        GridWindow::new(lo, hi, self.h.min(min_side))
    }

    pub fn intersect(&self, other: &GridWindow<T>) -> Result<Self> {
        self.lo.check_dim(other.dim())?;
        let dim = self.dim();
        let lo: Vec<T> = (0..dim).map(|i| self.lo.coord(i).max(other.lo.coord(i))).collect();
        let hi: Vec<T> = (0..dim).map(|i| self.hi.coord(i).min(other.hi.coord(i))).collect();
        if (0..dim).any(|i| !(lo[i] < hi[i])) {
            return Err(Error::WindowMismatch);
        }
        let lo = Point::new(&lo)?;
        let hi = Point::new(&hi)?;
        let min_side = (0..dim).map(|i| hi.coord(i) - lo.coord(i)).fold(T::infinity(), T::min);
        GridWindow::new(lo, hi, self.h.min(other.h).min(min_side))
    }
}

impl<T: Real> std::fmt::Debug for SampledSet<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SampledSet")
            .field("len", &self.points.len())
            .field("eps", &self.eps)
            .field("spacing", &self.spacing)
            .field("window", &self.window)
            .finish()
    }
}

/// Finite sample of a closed set, certified to fidelity `eps` on `window`:
/// every sample lies within `eps` of the set and every point of the set in
/// the window lies within `eps` of a sample.
#[derive(Clone)]
pub struct SampledSet<T: Real> {
    points: Vec<Point<T>>,
    eps: T,
    spacing: T,
    window: GridWindow<T>,
    index: PointIndex,
}

impl<T: Real> PartialEq for SampledSet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
            && self.eps == other.eps
            && self.spacing == other.spacing
            && self.window == other.window
    }
}

impl<T: Real> SampledSet<T> {
    /// Sample spacing defaults to `eps`.
    pub fn new(points: Vec<Point<T>>, eps: T, window: GridWindow<T>) -> Result<Self> {
        Self::with_spacing(points, eps, eps, window)
    }

    pub fn with_spacing(points: Vec<Point<T>>, eps: T, spacing: T, window: GridWindow<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !(eps >= T::zero()) || !(spacing >= T::zero()) {
            return Err(Error::InvalidParameter(
                "fidelity and spacing must be nonnegative".into(),
            ));
        }
        let grown = window.inflate(eps);
        for p in &points {
            p.check_dim(window.dim())?;
            if !grown.contains(p) {
                return Err(Error::InvalidParameter(format!(
                    "sample {p} lies outside the validity window inflated by eps"
                )));
            }
        }
        let index = PointIndex::build(&points);
        Ok(SampledSet {
            points,
            eps,
            spacing,
            window,
            index,
        })
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn window(&self) -> &GridWindow<T> {
        &self.window
    }

    /// Same points under a different validity window (must still hold them).
    pub fn rewindowed(&self, window: GridWindow<T>) -> Result<Self> {
        Self::with_spacing(self.points.clone(), self.eps, self.spacing, window)
    }

    /// Index of a nearest sample and its distance.
    pub fn nearest(&self, x: &Point<T>) -> Result<(usize, T)> {
        x.check_dim(self.dim())?;
        let (i, _) = self.index.nearest(x);
        Ok((i, self.points[i].dist(x)))
    }

    /// Distance from `x` to the sample.
    pub fn eval_dist(&self, x: &Point<T>) -> Result<T> {
        Ok(self.nearest(x)?.1)
    }

    /// Indices of the samples within `radius` of `x`.
    pub fn within(&self, x: &Point<T>, radius: T) -> Result<Vec<usize>> {
        x.check_dim(self.dim())?;
        let r = radius.to_f64().unwrap_or(0.0);
        let mut hits = self.index.within(x, r * (1.0 + 1e-12) + 1e-300);
        hits.retain(|&i| self.points[i].dist(x) <= radius);
        Ok(hits)
    }

    /// Samples lying in `window`.
    pub fn restricted(&self, window: &GridWindow<T>) -> Vec<Point<T>> {
        self.points.iter().filter(|p| window.contains(p)).copied().collect()
    }
}

/// Violations of the two halves of Kuratowski convergence on a window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectPair {
    /// Sup over limit samples of the distance to the n-th set (liminf half).
    pub lower_defect: f64,
    /// Sup over n-th set samples of the distance to the limit (limsup half).
    pub upper_defect: f64,
}

impl DefectPair {
    pub fn max(&self) -> f64 {
        self.lower_defect.max(self.upper_defect)
    }
}

/// Default margin `2h + 2 eps`.
pub fn default_margin<T: Real>(h: T, eps: T) -> T {
    T::lit(2.0) * (h + eps)
}

/// `max` over the nodes of `grid` of `|dist_{S1} - dist_{S2}|`.
pub fn dist_deviation<T: Real>(s1: &SampledSet<T>, s2: &SampledSet<T>, grid: &GridWindow<T>) -> Result<T> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            expected: s1.dim(),
            found: s2.dim(),
        });
    }
    grid.lo().check_dim(s1.dim())?;
    if !s1.window().contains_window(grid) || !s2.window().contains_window(grid) {
        return Err(Error::WindowMismatch);
    }
    let nodes = grid.nodes();
    let dev = nodes
        .par_iter()
        .map(|x| {
            let a = s1.index.nearest(x).0;
            let b = s2.index.nearest(x).0;
            (s1.points[a].dist(x) - s2.points[b].dist(x)).abs()
        })
        .reduce(T::zero, T::max);
    Ok(dev)
}

/// Sup over `from` of the distance to `to`, clamped to `cap`.
fn directed_defect<T: Real>(from: &[Point<T>], to: &SampledSet<T>, cap: T) -> T {
    from.par_iter()
        .map(|p| {
            let i = to.index.nearest(p).0;
            to.points[i].dist(p)
        })
        .reduce(T::zero, T::max)
        .min(cap)
}

/// Kuratowski defects on the intersection of both validity windows, shrunk
/// by `margin`.
pub fn kuratowski_defects<T: Real>(s_n: &SampledSet<T>, s_lim: &SampledSet<T>, margin: T) -> Result<DefectPair> {
    if s_n.dim() != s_lim.dim() {
        return Err(Error::DimensionMismatch {
            expected: s_lim.dim(),
            found: s_n.dim(),
        });
    }
    let common = s_n.window().intersect(s_lim.window())?;
    kuratowski_defects_in(s_n, s_lim, &common, margin)
}

/// Kuratowski defects on `window` shrunk by `margin`.
///
/// An empty side contributes zero (a vacuous supremum); if neither set has a
/// sample in the shrunk window the window is too small for the margin.
pub fn kuratowski_defects_in<T: Real>(
    s_n: &SampledSet<T>,
    s_lim: &SampledSet<T>,
    window: &GridWindow<T>,
    margin: T,
) -> Result<DefectPair> {
    if s_n.dim() != s_lim.dim() {
        return Err(Error::DimensionMismatch {
            expected: s_lim.dim(),
            found: s_n.dim(),
        });
    }
    window.lo().check_dim(s_n.dim())?;
    let shrunk = window.shrink(margin)?;
    let lim_in = s_lim.restricted(&shrunk);
    let n_in = s_n.restricted(&shrunk);
    if lim_in.is_empty() && n_in.is_empty() {
        return Err(Error::EmptyAfterShrink {
            margin: margin.to_f64().unwrap_or(f64::NAN),
        });
    }
    let cap = window.diameter();
    let lower = directed_defect(&lim_in, s_n, cap);
    let upper = directed_defect(&n_in, s_lim, cap);
    Ok(DefectPair {
        lower_defect: lower.to_f64().unwrap_or(f64::NAN),
        upper_defect: upper.to_f64().unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(a: f64, b: f64, step: f64) -> Vec<Point<f64>> {
        let n = ((b - a) / step).round() as usize;
        (0..=n).map(|k| Point::p1(a + (b - a) * k as f64 / n as f64)).collect()
    }

    fn w1(a: f64, b: f64, h: f64) -> GridWindow<f64> {
        GridWindow::cube(1, a, b, h).unwrap()
    }

    #[test]
    fn window_validation_and_nodes() {
        assert!(GridWindow::cube(1, 1.0, -1.0, 0.1).is_err());
        assert!(GridWindow::cube(1, -1.0, 1.0, 3.0).is_err());
        assert!(GridWindow::cube(1, -1.0, 1.0, 0.0).is_err());
        let w = GridWindow::cube(2, -1.0, 1.0, 0.5).unwrap();
        assert_eq!(w.counts(), vec![5, 5]);
        let nodes = w.nodes();
        assert_eq!(nodes.len(), 25);
        assert_eq!(nodes[0], Point::p2(-1.0, -1.0));
        assert_eq!(nodes[24], Point::p2(1.0, 1.0));
        assert!(matches!(w.shrink(1.0), Err(Error::EmptyAfterShrink { .. })));
        assert_eq!(w.shrink(0.25).unwrap().lo(), &Point::p2(-0.75, -0.75));
    }

    #[test]
    fn eval_dist_on_paper_family_and_members() {
        let s = SampledSet::new(vec![Point::p1(-0.25), Point::p1(0.25)], 1e-3, w1(-1.0, 1.0, 0.1)).unwrap();
        assert_eq!(s.eval_dist(&Point::p1(0.0)).unwrap(), 0.25);
        assert_eq!(s.eval_dist(&Point::p1(0.25)).unwrap(), 0.0);
        assert!(s.eval_dist(&Point::p2(0.0, 0.0)).is_err());
    }

    #[test]
    fn deviation_of_shifted_point() {
        // |dist(x,{1/n}) - dist(x,{0})| peaks at 1/n away from (0, 1/n).
        let w = w1(-1.0, 1.0, 1e-3);
        for n in [2.0, 5.0, 10.0] {
            let a = SampledSet::new(vec![Point::p1(1.0 / n)], 1e-3, w.clone()).unwrap();
            let b = SampledSet::new(vec![Point::p1(0.0)], 1e-3, w.clone()).unwrap();
            let oracle = w
                .nodes()
                .iter()
                .map(|x| ((x.coord(0) - 1.0 / n).abs() - x.coord(0).abs()).abs())
                .fold(0.0, f64::max);
            let dev = dist_deviation(&a, &b, &w).unwrap();
            assert!((dev - oracle).abs() < 1e-12);
            assert!((dev - 1.0 / n).abs() <= 2e-3);
            assert_eq!(dist_deviation(&a, &a, &w).unwrap(), 0.0);
        }
        let small = w1(-0.5, 0.5, 1e-2);
        let a = SampledSet::new(vec![Point::p1(0.0)], 1e-3, small).unwrap();
        let b = SampledSet::new(vec![Point::p1(0.0)], 1e-3, w.clone()).unwrap();
        assert_eq!(dist_deviation(&a, &b, &w), Err(Error::WindowMismatch));
    }

    #[test]
    fn defects_of_constant_and_alternating_sequences() {
        let w = w1(-2.0, 2.0, 0.01);
        let s = SampledSet::new(line(-1.0, 1.0, 1e-3), 1e-3, w.clone()).unwrap();
        let d = kuratowski_defects(&s, &s, default_margin(0.01, 1e-3)).unwrap();
        assert!(d.lower_defect <= 2e-3 && d.upper_defect <= 2e-3);

        let lim = SampledSet::new(vec![Point::p1(1.0)], 0.0, w.clone()).unwrap();
        let lower: Vec<f64> = (1..=6)
            .map(|n| {
                let x = if n % 2 == 0 { 1.0 } else { -1.0 };
                let sn = SampledSet::new(vec![Point::p1(x)], 0.0, w.clone()).unwrap();
                kuratowski_defects(&sn, &lim, 0.1).unwrap().lower_defect
            })
            .collect();
        assert_eq!(lower, vec![2.0, 0.0, 2.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn shrink_can_empty_everything() {
        let w = w1(-1.0, 1.0, 0.1);
        let s = SampledSet::new(vec![Point::p1(0.95)], 0.0, w.clone()).unwrap();
        assert!(matches!(
            kuratowski_defects(&s, &s, 0.1),
            Err(Error::EmptyAfterShrink { .. })
        ));
        assert!(matches!(
            kuratowski_defects(&s, &s, 1.5),
            Err(Error::EmptyAfterShrink { .. })
        ));
    }

    #[test]
    fn samples_must_respect_window() {
        let w = w1(-1.0, 1.0, 0.1);
        assert!(SampledSet::new(vec![Point::p1(1.5)], 0.1, w.clone()).is_err());
        assert!(SampledSet::new(vec![Point::p1(1.05)], 0.1, w.clone()).is_ok());
        assert_eq!(SampledSet::<f64>::new(vec![], 0.1, w), Err(Error::EmptyInput));
    }
}
