//! Planar regions built from primitive shapes, sampled through signed
//! distance-like functions (negative inside, zero on the boundary).
//!
//! Only the sign and the zero set of [`Region::sdf`] matter; values away from
//! the boundary are not exact distances for polygons and set operations.

type P2 = [f64; 2];

const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Disc {
        center: P2,
        radius: f64,
    },
    /// `{x : normal . x <= offset}` with a unit normal.
    HalfPlane {
        normal: P2,
        offset: f64,
    },
    /// Convex polygon, counterclockwise vertices.
    Polygon {
        vertices: Vec<P2>,
    },
    Segment {
        a: P2,
        b: P2,
    },
    Point {
        p: P2,
    },
}

fn norm(v: P2) -> f64 {
    v[0].hypot(v[1])
}

fn segment_dist(x: P2, a: P2, b: P2) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ax = [x[0] - a[0], x[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((ax[0] * ab[0] + ax[1] * ab[1]) / len2).clamp(0.0, 1.0)
    };
    norm([ax[0] - t * ab[0], ax[1] - t * ab[1]])
}

fn sample_segment(a: P2, b: P2, step: f64, out: &mut Vec<P2>) {
    let n = ((norm([b[0] - a[0], b[1] - a[1]]) / step).ceil() as usize).max(1);
    for k in 0..=n {
        let t = k as f64 / n as f64;
        out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
    }
}

/// Clips the line `{p0 + t d}` to the box; `None` if it misses.
fn clip_line(p0: P2, d: P2, lo: P2, hi: P2) -> Option<(P2, P2)> {
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..2 {
        if d[i] == 0.0 {
            if p0[i] < lo[i] || p0[i] > hi[i] {
                return None;
            }
        } else {
            let a = (lo[i] - p0[i]) / d[i];
            let b = (hi[i] - p0[i]) / d[i];
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
    }
    if t0 > t1 {
        return None;
    }
    Some((
        [p0[0] + t0 * d[0], p0[1] + t0 * d[1]],
        [p0[0] + t1 * d[0], p0[1] + t1 * d[1]],
    ))
}

impl Shape {
    pub fn disc(cx: f64, cy: f64, radius: f64) -> Self {
        Shape::Disc {
            center: [cx, cy],
            radius,
        }
    }

    /// Regular `n`-gon inscribed in the circle of radius `r` about the origin.
    pub fn regular_polygon(n: usize, r: f64) -> Self {
        let vertices = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        Shape::Polygon { vertices }
    }

    pub fn sdf(&self, x: P2) -> f64 {
        match self {
            Shape::Disc { center, radius } => norm([x[0] - center[0], x[1] - center[1]]) - radius,
            Shape::HalfPlane { normal, offset } => normal[0] * x[0] + normal[1] * x[1] - offset,
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let mut worst = f64::NEG_INFINITY;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    let e = [b[0] - a[0], b[1] - a[1]];
                    let len = norm(e);
                    // outward normal of a counterclockwise edge
                    let s = (e[1] * (x[0] - a[0]) - e[0] * (x[1] - a[1])) / len;
                    worst = worst.max(s);
                }
                worst
            }
            Shape::Segment { a, b } => segment_dist(x, *a, *b),
            Shape::Point { p } => norm([x[0] - p[0], x[1] - p[1]]),
        }
    }

    /// Samples of the shape's boundary inside the box `[lo, hi]`, spacing at
    /// most `step` along the curve.
    pub fn boundary_samples(&self, lo: P2, hi: P2, step: f64) -> Vec<P2> {
        let inside = |p: &P2| p[0] >= lo[0] && p[0] <= hi[0] && p[1] >= lo[1] && p[1] <= hi[1];
        let mut out = Vec::new();
        match self {
            Shape::Disc { center, radius } => {
                if *radius == 0.0 {
                    out.push(*center);
                } else {
                    let n = ((std::f64::consts::TAU * radius / step).ceil() as usize).max(8);
                    for k in 0..n {
                        let t = std::f64::consts::TAU * k as f64 / n as f64;
                        out.push([center[0] + radius * t.cos(), center[1] + radius * t.sin()]);
                    }
                }
            }
            Shape::HalfPlane { normal, offset } => {
                let p0 = [normal[0] * offset, normal[1] * offset];
                let d = [-normal[1], normal[0]];
                if let Some((a, b)) = clip_line(p0, d, lo, hi) {
                    sample_segment(a, b, step, &mut out);
                }
            }
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                for i in 0..n {
                    sample_segment(vertices[i], vertices[(i + 1) % n], step, &mut out);
                }
            }
            Shape::Segment { a, b } => sample_segment(*a, *b, step, &mut out),
            Shape::Point { p } => out.push(*p),
        }
        out.retain(inside);
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    /// The closed shape.
    Solid(Shape),
    /// The boundary of the shape only (the shape itself for segments and points).
    Thin(Shape),
    /// Closure of the complement of the shape.
    Outside(Shape),
    Union(Vec<Region>),
    Intersect(Vec<Region>),
    /// The first region with the interior of the second removed.
    Minus(Box<Region>, Box<Region>),
}

impl Region {
    pub fn sdf(&self, x: P2) -> f64 {
        match self {
            Region::Solid(s) => s.sdf(x),
            Region::Thin(s) => s.sdf(x).abs(),
            Region::Outside(s) => -s.sdf(x),
            Region::Union(rs) => rs.iter().map(|r| r.sdf(x)).fold(f64::INFINITY, f64::min),
            Region::Intersect(rs) => rs.iter().map(|r| r.sdf(x)).fold(f64::NEG_INFINITY, f64::max),
            Region::Minus(a, b) => a.sdf(x).max(-b.sdf(x)),
        }
    }

    /// Whether the region can have interior points (false for curves and points).
    pub fn has_interior(&self) -> bool {
        match self {
            Region::Solid(s) => !matches!(s, Shape::Segment { .. } | Shape::Point { .. }),
            Region::Outside(_) => true,
            Region::Thin(_) => false,
            Region::Union(rs) => rs.iter().any(Region::has_interior),
            Region::Intersect(rs) => rs.iter().all(Region::has_interior),
            Region::Minus(a, _) => a.has_interior(),
        }
    }

    fn leaves<'a>(&'a self, out: &mut Vec<&'a Shape>) {
        match self {
            Region::Solid(s) | Region::Thin(s) | Region::Outside(s) => out.push(s),
            Region::Union(rs) | Region::Intersect(rs) => rs.iter().for_each(|r| r.leaves(out)),
            Region::Minus(a, b) => {
                a.leaves(out);
                b.leaves(out);
            }
        }
    }

    /// Boundary samples in `[lo, hi]`: zero-level points of the leaf
    /// boundaries, spacing `step`.
    pub fn boundary_samples(&self, lo: P2, hi: P2, step: f64) -> Vec<P2> {
        let mut leaves = Vec::new();
        self.leaves(&mut leaves);
        let mut out = Vec::new();
        for s in leaves {
            for p in s.boundary_samples(lo, hi, step) {
                if self.sdf(p).abs() <= BOUNDARY_TOL {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Sample of the closed region in `[lo, hi]` with every point of the
    /// region within `eps` of a sample: boundary at spacing `eps/2` plus the
    /// interior grid at spacing `eps/sqrt 2`.
    pub fn samples(&self, lo: P2, hi: P2, eps: f64) -> Vec<P2> {
        let mut out = self.boundary_samples(lo, hi, eps / 2.0);
        if !self.has_interior() {
            return out;
        }
        let g = eps / std::f64::consts::SQRT_2;
        let nx = ((hi[0] - lo[0]) / g).floor() as usize + 1;
        let ny = ((hi[1] - lo[1]) / g).floor() as usize + 1;
        for i in 0..nx {
            let x = lo[0] + i as f64 * g;
            for j in 0..ny {
                let p = [x, lo[1] + j as f64 * g];
                if self.sdf(p) < 0.0 {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Estimated number of samples [`Region::samples`] would produce (upper bound).
    pub fn sample_budget(lo: P2, hi: P2, eps: f64) -> f64 {
        let g = eps / std::f64::consts::SQRT_2;
        ((hi[0] - lo[0]) / g + 1.0) * ((hi[1] - lo[1]) / g + 1.0)
    }
}
