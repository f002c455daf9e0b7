//! Corpus families of closed sets indexed by `n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Real;

use super::fiber::{sample_fiber, FnLevel};
use super::region::{Region, Shape};
use super::{GridWindow, SampledSet};

/// Upper limit on samples a single family member may produce.
const SAMPLE_BUDGET: f64 = 2.0e7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlanarShape {
    /// `{1/n <= |z| <= 1}`.
    Annulus,
    /// Disc of radius `n` centred at `(-1)^n n i`, tangent to the real axis.
    ShiftedDisc,
    /// `C \ int D`, constant in `n`.
    ComplementDisc,
    /// `{z in D : (-1)^n Im z >= 0} ∪ ∂D`.
    HalfDisc,
    /// The half-disc with a small arc cut out near `(-1)^(n+1) i`.
    HalfDiscArc,
    /// The arc-cut half-disc with horns.
    Horned,
    /// Regular `n`-gon inscribed in the unit circle.
    RegularPolygon,
    /// Closed unit disc, constant in `n`.
    UnitDisc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetPart {
    Set,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId {
    /// `(-inf, -1/n] ∪ [1/n, inf)` in `R`.
    PaperXN,
    /// `{1/n}` in `R`.
    ShrinkingPoint,
    /// `{(-1)^n}` in `R`.
    AlternatingPoint,
    /// `{(-1/n, 0), (1/n, 0)}` in `R^2`.
    TwoPointMerge,
    /// The unit circle, constant in `n`.
    UnitCircle,
    /// The level set `{x (x - y)^2 = 1/n}` in `R^2`.
    FiberXY,
    Planar(PlanarShape, SetPart),
}

const PLANAR: [(PlanarShape, &str); 8] = [
    (PlanarShape::Annulus, "annulus"),
    (PlanarShape::ShiftedDisc, "shifted-disc"),
    (PlanarShape::ComplementDisc, "complement-disc"),
    (PlanarShape::HalfDisc, "half-disc"),
    (PlanarShape::HalfDiscArc, "half-disc-arc"),
    (PlanarShape::Horned, "horned"),
    (PlanarShape::RegularPolygon, "regular-polygon"),
    (PlanarShape::UnitDisc, "unit-disc"),
];

const SIMPLE: [(FamilyId, &str); 6] = [
    (FamilyId::PaperXN, "paper-x-n"),
    (FamilyId::ShrinkingPoint, "shrinking-point"),
    (FamilyId::AlternatingPoint, "alternating-point"),
    (FamilyId::TwoPointMerge, "two-point-merge"),
    (FamilyId::UnitCircle, "unit-circle"),
    (FamilyId::FiberXY, "fiber-xy"),
];

impl FamilyId {
    /// Every family, in a fixed order.
    pub fn all() -> Vec<FamilyId> {
        let mut v: Vec<FamilyId> = SIMPLE.iter().map(|(f, _)| *f).collect();
        for (s, _) in PLANAR {
            v.push(FamilyId::Planar(s, SetPart::Set));
            v.push(FamilyId::Planar(s, SetPart::Boundary));
        }
        v
    }

    pub fn dim(&self) -> usize {
        match self {
            FamilyId::PaperXN | FamilyId::ShrinkingPoint | FamilyId::AlternatingPoint => 1,
            _ => 2,
        }
    }

    /// Whether the members are unbounded (sampled on a padded window).
    pub fn unbounded(&self) -> bool {
        matches!(
            self,
            FamilyId::PaperXN
                | FamilyId::FiberXY
                | FamilyId::Planar(PlanarShape::ShiftedDisc, _)
                | FamilyId::Planar(PlanarShape::ComplementDisc, SetPart::Set)
        )
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((_, name)) = SIMPLE.iter().find(|(id, _)| id == self) {
            return f.write_str(name);
        }
        if let FamilyId::Planar(shape, part) = self {
            let name = PLANAR.iter().find(|(s, _)| s == shape).map(|(_, n)| *n).unwrap();
            f.write_str(name)?;
            if *part == SetPart::Boundary {
                f.write_str("-boundary")?;
            }
        }
        Ok(())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        if let Some((id, _)) = SIMPLE.iter().find(|(_, n)| *n == key) {
            return Ok(*id);
        }
        let (base, part) = match key.strip_suffix("-boundary") {
            Some(b) => (b, SetPart::Boundary),
            None => (key.as_str(), SetPart::Set),
        };
        PLANAR
            .iter()
            .find(|(_, n)| *n == base)
            .map(|(shape, _)| FamilyId::Planar(*shape, part))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

fn sign(n: u64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The box sampled for a family: the window, padded for unbounded families
/// (by the diameter in 1-D, a quarter of it in 2-D).
fn sampling_window<T: Real>(family: FamilyId, window: &GridWindow<T>) -> GridWindow<T> {
    if !family.unbounded() {
        return window.clone();
    }
    let pad = if family.dim() == 1 {
        window.diameter()
    } else {
        window.diameter() / T::lit(4.0)
    };
    window.inflate(pad)
}

fn check_fidelity<T: Real>(window: &GridWindow<T>, eps: T) -> Result<()> {
    let e = eps.to_f64().unwrap_or(f64::NAN);
    if !(eps > T::zero()) || !eps.is_finite() || eps < window.diameter() * T::epsilon() * T::lit(64.0) {
        return Err(Error::InfeasibleFidelity { eps: e });
    }
    Ok(())
}

fn check_budget(count: f64, eps: f64) -> Result<()> {
    if count > SAMPLE_BUDGET {
        return Err(Error::InfeasibleFidelity { eps });
    }
    Ok(())
}

fn bounds2<T: Real>(w: &GridWindow<T>) -> ([f64; 2], [f64; 2]) {
    let f = |p: &Point<T>, i| p.coord(i).to_f64().unwrap();
    ([f(w.lo(), 0), f(w.lo(), 1)], [f(w.hi(), 0), f(w.hi(), 1)])
}

fn finish<T: Real>(raw: Vec<[f64; 2]>, eps: T, window: GridWindow<T>) -> Result<SampledSet<T>> {
    let grown = window.inflate(eps);
    let pts: Vec<Point<T>> = raw
        .into_iter()
        .map(|p| Point::p2(T::lit(p[0]), T::lit(p[1])))
        .filter(|p| grown.contains(p))
        .collect();
    if pts.is_empty() {
        return Err(Error::EmptyInput);
    }
    SampledSet::new(pts, eps, window)
}

/// Sample of a union of closed intervals (endpoints included exactly).
fn intervals<T: Real>(pieces: &[(T, T)], eps: T, window: GridWindow<T>) -> Result<SampledSet<T>> {
    let lo = window.lo().coord(0) - eps;
    let hi = window.hi().coord(0) + eps;
    let mut pts = Vec::new();
    for &(a, b) in pieces {
        let (a, b) = (a.max(lo), b.min(hi));
        if a > b {
            continue;
        }
        let n = ((b - a) / eps).ceil().to_usize().unwrap_or(0).max(1);
        for k in 0..n {
            pts.push(Point::p1(
                a + (b - a) * T::from_usize(k).unwrap() / T::from_usize(n).unwrap(),
            ));
        }
        pts.push(Point::p1(b));
    }
    if pts.is_empty() {
        return Err(Error::EmptyInput);
    }
    SampledSet::new(pts, eps, window)
}

fn points<T: Real>(pts: &[Point<T>], eps: T, window: GridWindow<T>) -> Result<SampledSet<T>> {
    let grown = window.inflate(eps);
    let kept: Vec<Point<T>> = pts.iter().filter(|p| grown.contains(p)).copied().collect();
    if kept.is_empty() {
        return Err(Error::EmptyInput);
    }
    SampledSet::new(kept, eps, window)
}

fn unit_disc() -> Shape {
    Shape::disc(0.0, 0.0, 1.0)
}

fn half_disc(n: u64) -> Region {
    Region::Union(vec![
        Region::Intersect(vec![
            Region::Solid(unit_disc()),
            Region::Solid(Shape::HalfPlane {
                normal: [0.0, -sign(n)],
                offset: 0.0,
            }),
        ]),
        Region::Thin(unit_disc()),
    ])
}

fn half_disc_arc(n: u64) -> Region {
    let r = 1.0 / n as f64;
    Region::Minus(
        Box::new(half_disc(n)),
        Box::new(Region::Solid(Shape::disc(0.0, -sign(n), r))),
    )
}

fn planar_region(shape: PlanarShape, n: u64) -> Result<Region> {
    let nf = n as f64;
    Ok(match shape {
        PlanarShape::Annulus => Region::Minus(
            Box::new(Region::Solid(unit_disc())),
            Box::new(Region::Solid(Shape::disc(0.0, 0.0, 1.0 / nf))),
        ),
        PlanarShape::ShiftedDisc => Region::Solid(Shape::disc(0.0, sign(n) * nf, nf)),
        PlanarShape::ComplementDisc => Region::Outside(unit_disc()),
        PlanarShape::HalfDisc => half_disc(n),
        PlanarShape::HalfDiscArc => half_disc_arc(n),
        PlanarShape::Horned => Region::Union(vec![
            half_disc_arc(n),
            Region::Minus(
                Box::new(Region::Solid(unit_disc())),
                Box::new(Region::Solid(Shape::disc(0.0, -sign(n) * 2.0 / nf, 1.0 - 1.0 / nf))),
            ),
        ]),
        PlanarShape::RegularPolygon => {
            if n < 3 {
                return Err(Error::InvalidParameter(format!("a polygon needs n >= 3, got {n}")));
            }
            Region::Solid(Shape::regular_polygon(n as usize, 1.0))
        }
        PlanarShape::UnitDisc => Region::Solid(unit_disc()),
    })
}

fn region_sample<T: Real>(region: &Region, part: SetPart, eps: T, window: GridWindow<T>) -> Result<SampledSet<T>> {
    let (lo, hi) = bounds2(&window);
    let e = eps.to_f64().unwrap();
    let raw = match part {
        SetPart::Set => {
            if region.has_interior() {
                check_budget(Region::sample_budget(lo, hi, e), e)?;
            }
            region.samples(lo, hi, e)
        }
        SetPart::Boundary => region.boundary_samples(lo, hi, e),
    };
    finish(raw, eps, window)
}

fn lines_xy<T: Real>(eps: T, window: GridWindow<T>) -> Result<SampledSet<T>> {
    let (lo, hi) = bounds2(&window);
    let step = eps.to_f64().unwrap();
    let mut raw = Shape::Segment {
        a: [0.0, lo[1]],
        b: [0.0, hi[1]],
    }
    .boundary_samples(lo, hi, step);
    let a = lo[0].max(lo[1]);
    let b = hi[0].min(hi[1]);
    raw.extend(Shape::Segment { a: [a, a], b: [b, b] }.boundary_samples(lo, hi, step));
    finish(raw, eps, window)
}

/// `x (x - y)^2` with its gradient bound on boxes.
pub(crate) fn fiber_xy_level<T: Real>(
) -> FnLevel<impl Fn(&Point<T>) -> T + Sync, impl Fn(&Point<T>, &Point<T>) -> T + Sync> {
    FnLevel {
        value: |p: &Point<T>| {
            let (x, y) = (p.coord(0), p.coord(1));
            x * (x - y) * (x - y)
        },
        lipschitz: |lo: &Point<T>, hi: &Point<T>| {
            // |grad| <= (x-y)^2 + 4|x||x-y| with the box maxima
            let mx = lo.coord(0).abs().max(hi.coord(0).abs());
            let d1 = (lo.coord(0) - hi.coord(1)).abs();
            let d2 = (hi.coord(0) - lo.coord(1)).abs();
            let md = d1.max(d2);
            md * md + T::lit(4.0) * mx * md
        },
    }
}

/// Sample of the fiber `{x (x - y)^2 = c}` on `window` (no padding).
pub(crate) fn fiber_xy<T: Real>(c: T, eps: T, window: GridWindow<T>) -> Result<SampledSet<T>> {
    let (lo, hi) = bounds2(&window);
    let e = eps.to_f64().unwrap();
    check_budget(Region::sample_budget(lo, hi, e / std::f64::consts::SQRT_2), e)?;
    let f = fiber_xy_level::<T>();
    let s = sample_fiber(&f, c, &window, eps)?;
    points(&s.roots, eps, window)
}

/// The `n`-th member of `family`, certified to fidelity `eps`.
///
/// Unbounded members are truncated to a padded window (the diameter of
/// `window` in 1-D, a quarter of it in 2-D), which becomes the validity
/// window of the sample.
pub fn make_family<T: Real>(family: FamilyId, n: u64, window: &GridWindow<T>, eps: T) -> Result<SampledSet<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("family index n must be >= 1".into()));
    }
    if window.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            found: window.dim(),
        });
    }
    let w = sampling_window(family, window);
    check_fidelity(&w, eps)?;
    let nt = T::from_u64(n).unwrap();
    let one = T::one();
    match family {
        FamilyId::PaperXN => {
            let (lo, hi) = (w.lo().coord(0) - eps, w.hi().coord(0) + eps);
            intervals(&[(lo, -one / nt), (one / nt, hi)], eps, w)
        }
        FamilyId::ShrinkingPoint => points(&[Point::p1(one / nt)], eps, w),
        FamilyId::AlternatingPoint => points(&[Point::p1(T::lit(sign(n)))], eps, w),
        FamilyId::TwoPointMerge => points(
            &[Point::p2(-one / nt, T::zero()), Point::p2(one / nt, T::zero())],
            eps,
            w,
        ),
        FamilyId::UnitCircle => region_sample(&Region::Thin(unit_disc()), SetPart::Set, eps, w),
        FamilyId::FiberXY => fiber_xy(one / nt, eps, w),
        FamilyId::Planar(shape, part) => region_sample(&planar_region(shape, n)?, part, eps, w),
    }
}

/// Reference limit of `family`: its Kuratowski limit where one exists,
/// otherwise the natural candidate (the even-index limit `{1}` for the
/// alternating point, `conv` of the boundary limit for non-convergent planar
/// sets).
pub fn limit_set<T: Real>(family: FamilyId, window: &GridWindow<T>, eps: T) -> Result<SampledSet<T>> {
    if window.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            found: window.dim(),
        });
    }
    let w = sampling_window(family, window);
    check_fidelity(&w, eps)?;
    let zero = T::zero();
    use PlanarShape::*;
    use SetPart::*;
    match family {
        FamilyId::PaperXN => {
            let (lo, hi) = (w.lo().coord(0) - eps, w.hi().coord(0) + eps);
            intervals(&[(lo, hi)], eps, w)
        }
        FamilyId::ShrinkingPoint => points(&[Point::p1(zero)], eps, w),
        FamilyId::AlternatingPoint => points(&[Point::p1(T::one())], eps, w),
        FamilyId::TwoPointMerge => points(&[Point::p2(zero, zero)], eps, w),
        FamilyId::UnitCircle => region_sample(&Region::Thin(unit_disc()), Set, eps, w),
        FamilyId::FiberXY => lines_xy(eps, w),
        FamilyId::Planar(shape, part) => {
            let region = match (shape, part) {
                (Annulus, Set) | (RegularPolygon, _) | (UnitDisc, _) => Region::Solid(unit_disc()),
                (Annulus, Boundary) => Region::Union(vec![
                    Region::Thin(unit_disc()),
                    Region::Thin(Shape::Point { p: [0.0, 0.0] }),
                ]),
                (ShiftedDisc, _) => Region::Thin(Shape::HalfPlane {
                    normal: [0.0, 1.0],
                    offset: 0.0,
                }),
                (ComplementDisc, Set) => Region::Outside(unit_disc()),
                (ComplementDisc, Boundary) => Region::Thin(unit_disc()),
                (HalfDisc | HalfDiscArc | Horned, Set) => Region::Solid(unit_disc()),
                (HalfDisc | HalfDiscArc | Horned, Boundary) => Region::Union(vec![
                    Region::Thin(unit_disc()),
                    Region::Thin(Shape::Segment {
                        a: [-1.0, 0.0],
                        b: [1.0, 0.0],
                    }),
                ]),
            };
            let part = match (shape, part) {
                (RegularPolygon | UnitDisc, Boundary) => Boundary,
                _ => Set,
            };
            region_sample(&region, part, eps, w)
        }
    }
}
