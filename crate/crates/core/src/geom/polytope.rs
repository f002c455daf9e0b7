use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::{Real, Scalar};

/// A nonempty compact convex polytope in dimension 1 or 2, kept in canonical form.
///
/// In 1-D the vertex list is always `[lo, hi]` with `lo <= hi`. In 2-D it holds the
/// extreme points in counterclockwise order, starting from the lexicographically
/// smallest one, with no three collinear (one vertex for a point, two for a segment).
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolytope<T> {
    dim: usize,
    vertices: Vec<Point<T>>,
}

impl<T: Scalar> ConvexPolytope<T> {
    /// Closed interval with the endpoints in either order.
    pub fn interval(a: T, b: T) -> Self {
        let (lo, hi) = if b < a { (b, a) } else { (a, b) };
        ConvexPolytope {
            dim: 1,
            vertices: vec![Point::p1(lo), Point::p1(hi)],
        }
    }

    pub fn singleton(p: Point<T>) -> Result<Self> {
        convex_hull(std::slice::from_ref(&p))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical vertex list (1-D: the endpoint pair, possibly equal).
    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    /// Extreme points without repetition.
    pub fn extreme_points(&self) -> Vec<Point<T>> {
        if self.dim == 1 && self.vertices[0] == self.vertices[1] {
            vec![self.vertices[0].clone()]
        } else {
            self.vertices.clone()
        }
    }

    /// For 1-D polytopes, the endpoints `(lo, hi)`.
    pub fn bounds(&self) -> Option<(T, T)> {
        (self.dim == 1).then(|| (self.vertices[0].coord(0), self.vertices[1].coord(0)))
    }

    pub fn is_singleton(&self) -> bool {
        self.extreme_points().len() == 1
    }

    /// Exact membership test (boundary included).
    pub fn contains(&self, p: &Point<T>) -> bool {
        if p.dim() != self.dim {
            return false;
        }
        if self.dim == 1 {
            let x = p.coord(0);
            return self.vertices[0].coord(0) <= x && x <= self.vertices[1].coord(0);
        }
        let v = &self.vertices;
        match v.len() {
            1 => v[0] == *p,
            2 => {
                T::orient2d(&v[0], &v[1], p) == Ordering::Equal && {
                    let within = |k: usize| {
                        let (a, b) = (v[0].coord(k), v[1].coord(k));
                        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                        let x = p.coord(k);
                        lo <= x && x <= hi
                    };
                    within(0) && within(1)
                }
            }
            n => (0..n).all(|i| T::orient2d(&v[i], &v[(i + 1) % n], p) != Ordering::Less),
        }
    }

    /// `true` when every point of `other` lies in `self`.
    pub fn contains_polytope(&self, other: &ConvexPolytope<T>) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    /// Image under `x -> t * x + offset`, re-canonicalized.
    pub fn affine(&self, t: &T, offset: &Point<T>) -> Result<Self> {
        offset.check_dim(self.dim)?;
        let pts: Vec<Point<T>> = self.vertices.iter().map(|v| v.scale(t).add(offset)).collect();
        convex_hull(&pts)
    }

    /// Minkowski sum of two intervals.
    pub fn interval_sum(&self, other: &ConvexPolytope<T>) -> Result<Self> {
        match (self.bounds(), other.bounds()) {
            (Some((a0, a1)), Some((b0, b1))) => Ok(Self::interval(a0 + b0, a1 + b1)),
            _ => Err(Error::UnsupportedDimension(self.dim.max(other.dim))),
        }
    }
}

impl<T: Real> ConvexPolytope<T> {
    /// Euclidean distance from `p` to the polytope (zero inside).
    pub fn distance_to(&self, p: &Point<T>) -> T {
        if self.dim == 1 {
            let x = p.coord(0);
            let (lo, hi) = (self.vertices[0].coord(0), self.vertices[1].coord(0));
            return (lo - x).max(x - hi).max(T::zero());
        }
        if self.vertices.len() >= 3 && self.contains(p) {
            return T::zero();
        }
        let n = self.vertices.len();
        if n == 1 {
            return self.vertices[0].dist(p);
        }
        let edges = if n == 2 { 1 } else { n };
        (0..edges)
            .map(|i| segment_distance(p, &self.vertices[i], &self.vertices[(i + 1) % n]))
            .fold(T::infinity(), T::min)
    }

    /// Largest distance between two points of the polytope.
    pub fn diameter(&self) -> T {
        let v = &self.vertices;
        let mut best = T::zero();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(v[i].dist(&v[j]));
            }
        }
        best
    }

    /// Points of the polytope at spacing at most `step`: the vertices, the
    /// boundary, and (in 2-D) an interior lattice.
    pub fn sample(&self, step: T) -> Vec<Point<T>> {
        let step = if step > T::zero() { step } else { T::lit(1e-3) };
        let v = &self.vertices;
        let mut out = Vec::new();
        let push_segment = |out: &mut Vec<Point<T>>, a: &Point<T>, b: &Point<T>| {
            let len = a.dist(b);
            let k = (len / step).ceil().to_usize().unwrap_or(1).max(1);
            for i in 0..k {
                let t = T::from_usize(i).unwrap() / T::from_usize(k).unwrap();
                out.push(a.add(&b.sub(a).scale(&t)));
            }
        };
        if self.dim == 1 || v.len() <= 2 {
            let last = v[v.len() - 1];
            push_segment(&mut out, &v[0], &last);
            out.push(last);
            return out;
        }
        for i in 0..v.len() {
            push_segment(&mut out, &v[i], &v[(i + 1) % v.len()]);
        }
        let (mut lo, mut hi) = (v[0], v[0]);
        for p in v {
            lo = Point::p2(lo.coord(0).min(p.coord(0)), lo.coord(1).min(p.coord(1)));
            hi = Point::p2(hi.coord(0).max(p.coord(0)), hi.coord(1).max(p.coord(1)));
        }
        let nx = ((hi.coord(0) - lo.coord(0)) / step).floor().to_usize().unwrap_or(0);
        let ny = ((hi.coord(1) - lo.coord(1)) / step).floor().to_usize().unwrap_or(0);
        for i in 1..=nx {
            for j in 1..=ny {
                let q = Point::p2(
                    lo.coord(0) + T::from_usize(i).unwrap() * step,
                    lo.coord(1) + T::from_usize(j).unwrap() * step,
                );
                if self.contains(&q) {
                    out.push(q);
                }
            }
        }
        out
    }
}

pub(crate) fn segment_distance<T: Real>(p: &Point<T>, a: &Point<T>, b: &Point<T>) -> T {
    let ab = b.sub(a);
    let ap = p.sub(a);
    let dot = |u: &Point<T>, v: &Point<T>| (0..u.dim()).fold(T::zero(), |s, i| s + u.coord(i) * v.coord(i));
    let len_sq = dot(&ab, &ab);
    if len_sq == T::zero() {
        return p.dist(a);
    }
    let t = (dot(&ap, &ab) / len_sq).max(T::zero()).min(T::one());
    p.dist(&a.add(&ab.scale(&t)))
}

/// Canonical convex hull of a finite point set in dimension 1 or 2.
pub fn convex_hull<T: Scalar>(points: &[Point<T>]) -> Result<ConvexPolytope<T>> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let dim = first.dim();
    for p in points {
        p.check_dim(dim)?;
    }
    match dim {
        1 => {
            let mut lo = first.coord(0);
            let mut hi = lo.clone();
            for p in points {
                let x = p.coord(0);
                if x < lo {
                    lo = x;
                } else if x > hi {
                    hi = x;
                }
            }
            Ok(ConvexPolytope::interval(lo, hi))
        }
        2 => {
            let mut pts = points.to_vec();
            pts.sort_by(|a, b| a.lex_cmp(b));
            pts.dedup();
            if pts.len() <= 2 {
                return Ok(ConvexPolytope { dim, vertices: pts });
            }
            // Andrew's monotone chain; collinear points are popped.
            let mut hull: Vec<Point<T>> = Vec::with_capacity(2 * pts.len());
            for pass in 0..2 {
                let start = hull.len();
                let iter: Box<dyn Iterator<Item = &Point<T>>> = if pass == 0 {
                    Box::new(pts.iter())
                } else {
                    Box::new(pts.iter().rev())
                };
                for p in iter {
                    while hull.len() >= start + 2
                        && T::orient2d(&hull[hull.len() - 2], &hull[hull.len() - 1], p) != Ordering::Greater
                    {
                        hull.pop();
                    }
                    hull.push(p.clone());
                }
                hull.pop();
            }
            if hull.len() == 2 && hull[0] == hull[1] {
                hull.pop();
            }
            Ok(ConvexPolytope { dim, vertices: hull })
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_hull() {
        let h = convex_hull(&[Point::p2(0.0, 0.0)]).unwrap();
        assert_eq!(h.vertices(), &[Point::p2(0.0, 0.0)]);
        assert!(h.is_singleton());
    }

    #[test]
    fn interior_point_absorbed() {
        let pts = [
            Point::p2(0.0, 0.0),
            Point::p2(1.0, 0.0),
            Point::p2(0.0, 1.0),
            Point::p2(0.25, 0.25),
        ];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(
            h.vertices(),
            &[Point::p2(0.0, 0.0), Point::p2(1.0, 0.0), Point::p2(0.0, 1.0)]
        );
    }

    #[test]
    fn interval_hull() {
        let pts = [Point::p1(-1.0), Point::p1(0.5), Point::p1(1.0)];
        assert_eq!(convex_hull(&pts).unwrap(), ConvexPolytope::interval(-1.0, 1.0));
    }

    #[test]
    fn collinear_points_collapse_to_segment() {
        let pts: Vec<_> = (0..5).map(|i| Point::p2(i as f64, 2.0 * i as f64)).collect();
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.vertices(), &[Point::p2(0.0, 0.0), Point::p2(4.0, 8.0)]);
        assert!(h.contains(&Point::p2(2.0, 4.0)));
        assert!(!h.contains(&Point::p2(5.0, 10.0)));
    }

    #[test]
    fn square_with_edge_midpoints() {
        let mut pts = vec![];
        for i in 0..3 {
            for j in 0..3 {
                pts.push(Point::p2(i as f64, j as f64));
            }
        }
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.vertices().len(), 4);
    }

    #[test]
    fn errors() {
        assert_eq!(convex_hull::<f64>(&[]), Err(Error::EmptyInput));
        assert!(matches!(
            convex_hull(&[Point::p1(0.0), Point::p2(0.0, 1.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            convex_hull(&[Point::p3(0.0, 0.0, 0.0)]),
            Err(Error::UnsupportedDimension(3))
        );
    }

    #[test]
    fn distance_to_triangle() {
        let t = convex_hull(&[Point::p2(0.0f64, 0.0), Point::p2(2.0, 0.0), Point::p2(0.0, 2.0)]).unwrap();
        assert_eq!(t.distance_to(&Point::p2(0.5, 0.5)), 0.0);
        assert!((t.distance_to(&Point::p2(-1.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!((t.distance_to(&Point::p2(2.0, 2.0)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn samples_stay_inside() {
        let t = convex_hull(&[Point::p2(0.0, 0.0), Point::p2(1.0, 0.0), Point::p2(0.0, 1.0)]).unwrap();
        let s = t.sample(0.1);
        assert!(s.iter().all(|p| t.distance_to(p) < 1e-12));
        assert!(s.len() > 40);
    }
}
