//! Sampled graphs of multifunctions `R^p => R^q` and their two convergence
//! modes: graphical (Kuratowski convergence of graphs) and pointwise.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{ConvexPolytope, Point};
use crate::scalar::Real;
use crate::sets::io::{join_row, parse_field, parse_row, window_fields, window_from_fields};
use crate::sets::{kuratowski_defects, DefectPair, GridWindow, SampledSet};
use crate::subdiff::PLFunction1D;

/// Finite sample of a graph `{(x, y) : y in F(x)}` in the product space.
#[derive(Clone, Debug, PartialEq)]
pub struct MultifunctionGraph<T: Real> {
    source_dim: usize,
    target_dim: usize,
    set: SampledSet<T>,
    truncated: bool,
}

fn check_dims(p: usize, q: usize) -> Result<()> {
    if p == 0 || q == 0 || p > 2 || q > 2 {
        return Err(Error::UnsupportedDimension(p + q));
    }
    Ok(())
}

impl<T: Real> MultifunctionGraph<T> {
    /// Graph from `(x, y)` pairs; `window` lives on the product space.
    pub fn from_pairs(pairs: &[(Point<T>, Point<T>)], eps: T, window: GridWindow<T>) -> Result<Self> {
        let (x0, y0) = pairs.first().ok_or(Error::EmptyInput)?;
        let (p, q) = (x0.dim(), y0.dim());
        check_dims(p, q)?;
        window.lo().check_dim(p + q)?;
        let pts = pairs
            .iter()
            .map(|(x, y)| {
                x.check_dim(p)?;
                y.check_dim(q)?;
                x.concat(y)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultifunctionGraph {
            source_dim: p,
            target_dim: q,
            set: SampledSet::new(pts, eps, window)?,
            truncated: false,
        })
    }

    /// Graph of `x -> value(x)` over the nodes of `source`, each convex value
    /// sampled at spacing `step` and clipped to `band`.
    ///
    /// Values leaving `band` set the truncation flag.
    pub fn from_polytope_map<F>(source: &GridWindow<T>, band: &GridWindow<T>, step: T, eps: T, value: F) -> Result<Self>
    where
        F: Fn(&Point<T>) -> Result<ConvexPolytope<T>> + Sync,
    {
        let (p, q) = (source.dim(), band.dim());
        check_dims(p, q)?;
        let grown = band.inflate(eps);
        let per_node = source
            .nodes()
            .par_iter()
            .map(|x| {
                let v = value(x)?;
                v.vertices().first().ok_or(Error::EmptyInput)?.check_dim(q)?;
                let mut cut = false;
                let mut out = Vec::new();
                for y in v.sample(step) {
                    if grown.contains(&y) {
                        out.push(x.concat(&y)?);
                    } else {
                        cut = true;
                    }
                }
                Ok((out, cut))
            })
            .collect::<Result<Vec<_>>>()?;
        let truncated = per_node.iter().any(|(_, c)| *c);
        let pts: Vec<Point<T>> = per_node.into_iter().flat_map(|(v, _)| v).collect();
        Ok(MultifunctionGraph {
            source_dim: p,
            target_dim: q,
            set: SampledSet::new(pts, eps, source.product(band)?)?,
            truncated,
        })
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn eps(&self) -> T {
        self.set.eps()
    }

    pub fn window(&self) -> &GridWindow<T> {
        self.set.window()
    }

    /// The graph as a subset of the product space.
    pub fn as_set(&self) -> &SampledSet<T> {
        &self.set
    }

    /// Whether values were clipped to the target band.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn pairs(&self) -> Vec<(Point<T>, Point<T>)> {
        let (p, q) = (self.source_dim, self.target_dim);
        self.set
            .points()
            .iter()
            .map(|z| (z.project(0..p).unwrap(), z.project(p..p + q).unwrap()))
            .collect()
    }

    /// Targets of the pairs whose source lies within `tol` of `x`.
    pub fn slice(&self, x: &Point<T>, tol: T) -> Result<Vec<Point<T>>> {
        x.check_dim(self.source_dim)?;
        let p = self.source_dim;
        let q = self.target_dim;
        Ok(self
            .set
            .points()
            .iter()
            .filter(|z| z.project(0..p).unwrap().dist(x) <= tol)
            .map(|z| z.project(p..p + q).unwrap())
            .collect())
    }

    /// Header `p,q,eps,window_lo...,window_hi...,h,spacing,truncated`, then
    /// rows `x..., y...`.
    pub fn to_csv(&self) -> String {
        let mut head = vec![self.source_dim.to_string(), self.target_dim.to_string()];
        let mut nums = vec![self.set.eps()];
        nums.extend(window_fields(self.set.window()));
        nums.push(self.set.spacing());
        head.push(join_row(&nums));
        head.push(u8::from(self.truncated).to_string());
        let mut out = head.join(",");
        out.push('\n');
        for z in self.set.points() {
            writeln!(out, "{}", join_row(z.coords())).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head: Vec<&str> = lines
            .next()
            .ok_or(Error::Parse("missing header".into()))?
            .split(',')
            .collect();
        let int = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer `{s}`")))
        };
        if head.len() < 3 {
            return Err(Error::Parse("truncated header".into()));
        }
        let (p, q) = (int(head[0])?, int(head[1])?);
        check_dims(p, q)?;
        let d = p + q;
        let want = 2 + 1 + 2 * d + 1 + 1 + 1;
        if head.len() != want {
            return Err(Error::Parse(format!(
                "expected {want} header fields, found {}",
                head.len()
            )));
        }
        let eps: T = parse_field(head[2])?;
        let wf: Vec<T> = head[3..4 + 2 * d]
            .iter()
            .map(|s| parse_field(s))
            .collect::<Result<_>>()?;
        let window = window_from_fields(d, &wf)?;
        let spacing: T = parse_field(head[4 + 2 * d])?;
        let truncated = int(head[5 + 2 * d])? != 0;
        let pts = lines
            .map(|l| {
                let row: Vec<T> = parse_row(l)?;
                if row.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: row.len(),
                    });
                }
                Point::new(&row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultifunctionGraph {
            source_dim: p,
            target_dim: q,
            set: SampledSet::with_spacing(pts, eps, spacing, window)?,
            truncated,
        })
    }
}

fn push_segment<T: Real>(a: Point<T>, b: Point<T>, step: T, out: &mut Vec<Point<T>>) {
    let k = (a.dist(&b) / step).ceil().to_usize().unwrap_or(1).max(1);
    for i in 0..=k {
        let t = T::from_usize(i).unwrap() / T::from_usize(k).unwrap();
        out.push(a.add(&b.sub(&a).scale(&t)));
    }
}

/// Graph of the Clarke subdifferential of `f`, target band `[-L - 1, L + 1]`.
pub fn subdiff_graph_of_pl<T: Real>(f: &PLFunction1D<T>, eps: T) -> Result<MultifunctionGraph<T>> {
    let b = f.lipschitz() + T::one();
    subdiff_graph_of_pl_in(f, eps, (-b, b))
}

/// Graph of the Clarke subdifferential of `f`: horizontal segments at the
/// slopes and vertical segments over the breakpoints, at spacing `eps`,
/// clipped to the target band `[band.0, band.1]`.
pub fn subdiff_graph_of_pl_in<T: Real>(f: &PLFunction1D<T>, eps: T, band: (T, T)) -> Result<MultifunctionGraph<T>> {
    if !(eps > T::zero()) {
        return Err(Error::InvalidParameter("graph fidelity must be positive".into()));
    }
    let (lo, hi) = band;
    if !(lo < hi) {
        return Err(Error::InvalidWindow("empty target band".into()));
    }
    let xs = f.breakpoints();
    let slopes = f.slopes();
    let mut pts = Vec::new();
    let mut truncated = false;
    for (i, s) in slopes.iter().enumerate() {
        if *s < lo || *s > hi {
            truncated = true;
            continue;
        }
        push_segment(Point::p2(xs[i], *s), Point::p2(xs[i + 1], *s), eps, &mut pts);
    }
    for i in 1..xs.len() - 1 {
        let (a, b) = (slopes[i - 1].min(slopes[i]), slopes[i - 1].max(slopes[i]));
        let (ca, cb) = (a.max(lo), b.min(hi));
        if ca != a || cb != b {
            truncated = true;
        }
        if ca <= cb {
            push_segment(Point::p2(xs[i], ca), Point::p2(xs[i], cb), eps, &mut pts);
        }
    }
    if pts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (x0, x1) = f.domain();
    let h = eps.min(x1 - x0).min(hi - lo);
    let window = GridWindow::new(Point::p2(x0, lo), Point::p2(x1, hi), h)?;
    Ok(MultifunctionGraph {
        source_dim: 1,
        target_dim: 1,
        set: SampledSet::new(pts, eps, window)?,
        truncated,
    })
}

/// Kuratowski defects of the graphs in the product space.
pub fn graphical_defects<T: Real>(
    g_n: &MultifunctionGraph<T>,
    g_lim: &MultifunctionGraph<T>,
    margin: T,
) -> Result<DefectPair> {
    if g_n.source_dim != g_lim.source_dim || g_n.target_dim != g_lim.target_dim {
        return Err(Error::DimensionMismatch {
            expected: g_lim.source_dim + g_lim.target_dim,
            found: g_n.source_dim + g_n.target_dim,
        });
    }
    kuratowski_defects(&g_n.set, &g_lim.set, margin)
}

/// Default slice band `2(eps + h)`.
pub fn default_slice_tol<T: Real>(g: &MultifunctionGraph<T>) -> T {
    T::lit(2.0) * (g.eps() + g.window().h())
}

/// Defects of the slice of `g_n` over `x` (sources within `tol`) against the
/// polytope `v_lim`: lower is the sup over `v_lim` of the distance to the
/// slice, upper the sup over the slice of the distance to `v_lim`.
pub fn pointwise_defect<T: Real>(
    g_n: &MultifunctionGraph<T>,
    x: &Point<T>,
    v_lim: &ConvexPolytope<T>,
    tol: T,
) -> Result<DefectPair> {
    if v_lim.dim() != g_n.target_dim {
        return Err(Error::DimensionMismatch {
            expected: g_n.target_dim,
            found: v_lim.dim(),
        });
    }
    let slice = g_n.slice(x, tol)?;
    if slice.is_empty() {
        return Err(Error::EmptySlice);
    }
    let step = g_n.eps().max(T::lit(1e-6));
    let lower = v_lim
        .sample(step)
        .iter()
        .map(|v| slice.iter().map(|y| y.dist(v)).fold(T::infinity(), T::min))
        .fold(T::zero(), T::max);
    let upper = slice.iter().map(|y| v_lim.distance_to(y)).fold(T::zero(), T::max);
    Ok(DefectPair {
        lower_defect: lower.to_f64().unwrap(),
        upper_defect: upper.to_f64().unwrap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::hausdorff;
    use crate::subdiff::{make_pl_family, PlFamily};

    fn abs() -> PLFunction1D<f64> {
        PLFunction1D::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn abs_graph_pieces() {
        let g = subdiff_graph_of_pl(&abs(), 0.01).unwrap();
        let s = g.as_set();
        for k in 0..=20 {
            let t = -1.0 + k as f64 * 0.1;
            assert!(s.eval_dist(&Point::p2(0.0, t)).unwrap() <= 0.005 + 1e-12);
            if t < 0.0 {
                assert!(s.eval_dist(&Point::p2(t, -1.0)).unwrap() <= 0.005 + 1e-12);
            }
            if t > 0.0 {
                assert!(s.eval_dist(&Point::p2(t, 1.0)).unwrap() <= 0.005 + 1e-12);
            }
        }
        assert!(s.eval_dist(&Point::p2(0.5, 0.0)).unwrap() >= 0.5);
        assert!(!g.truncated());
    }

    #[test]
    fn constant_function_graph_is_flat() {
        let f = PLFunction1D::new(vec![-1.0, 1.0], vec![2.0, 2.0]).unwrap();
        let g = subdiff_graph_of_pl(&f, 0.05).unwrap();
        assert!(g.pairs().iter().all(|(_, y)| y.coord(0) == 0.0));
    }

    #[test]
    fn sawtooth_graph_near_teeth_oracle() {
        let n = 8u64;
        let f = make_pl_family::<f64>(PlFamily::Sawtooth, n).unwrap();
        let eps = 0.01;
        let g = subdiff_graph_of_pl(&f, eps).unwrap();
        // explicit slope enumeration: slopes alternate +1, -1 from the left
        let mut oracle = Vec::new();
        for j in 0..2 * n as usize {
            let x0 = -1.0 + j as f64 / n as f64;
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            for k in 0..=100 {
                oracle.push(Point::p2(x0 + k as f64 / (100.0 * n as f64), s));
            }
        }
        for j in 1..2 * n as usize {
            for k in 0..=200 {
                oracle.push(Point::p2(-1.0 + j as f64 / n as f64, -1.0 + k as f64 / 100.0));
            }
        }
        assert!(hausdorff(g.as_set().points(), &oracle).unwrap() <= 2.0 * eps);
    }

    #[test]
    fn self_defects_are_small() {
        let g = subdiff_graph_of_pl(&abs(), 0.01).unwrap();
        let d = graphical_defects(&g, &g, 0.04).unwrap();
        assert_eq!(d.max(), 0.0);
    }

    #[test]
    fn pointwise_slices() {
        let g = subdiff_graph_of_pl(&abs(), 0.01).unwrap();
        let d = pointwise_defect(&g, &Point::p1(0.0), &ConvexPolytope::interval(-1.0, 1.0), 1e-9).unwrap();
        assert!(d.max() <= 0.01);
        let d = pointwise_defect(&g, &Point::p1(0.5), &ConvexPolytope::interval(1.0, 1.0), 0.001).unwrap();
        assert_eq!(d.max(), 0.0);
        let sparse = MultifunctionGraph::from_pairs(
            &[(Point::p1(0.0), Point::p1(0.0))],
            0.1,
            GridWindow::cube(2, -1.0, 1.0, 0.1).unwrap(),
        )
        .unwrap();
        assert_eq!(
            pointwise_defect(&sparse, &Point::p1(0.5), &ConvexPolytope::interval(0.0, 0.0), 0.1),
            Err(Error::EmptySlice)
        );
    }

    #[test]
    fn spike_slice_is_truncated() {
        let f = make_pl_family::<f64>(PlFamily::Spike, 20).unwrap();
        let g = subdiff_graph_of_pl_in(&f, 0.05, (-12.0, 12.0)).unwrap();
        assert!(g.truncated());
        let d = pointwise_defect(&g, &Point::p1(0.0), &ConvexPolytope::interval(-5.0, 5.0), 1e-9).unwrap();
        assert!(d.lower_defect <= 0.025 + 1e-9);
        assert!((d.upper_defect - 7.0).abs() < 1e-9, "{d:?}");
    }

    #[test]
    fn polytope_map_graph() {
        let src = GridWindow::cube(1, -1.0, 1.0, 0.1).unwrap();
        let band = GridWindow::cube(1, -1.0, 1.0, 0.1).unwrap();
        let g = MultifunctionGraph::from_polytope_map(&src, &band, 0.05, 0.05, |x: &Point<f64>| {
            Ok(ConvexPolytope::interval(x.coord(0), 2.0 * x.coord(0)))
        })
        .unwrap();
        assert!(g.truncated());
        let sl = g.slice(&Point::p1(0.2), 1e-9).unwrap();
        assert!(!sl.is_empty());
        assert!(sl.iter().all(|y| y.coord(0) >= 0.2 - 1e-9 && y.coord(0) <= 0.4 + 1e-9));
    }

    #[test]
    fn csv_round_trip() {
        let f = make_pl_family::<f64>(PlFamily::Spike, 3).unwrap();
        let g = subdiff_graph_of_pl_in(&f, 0.1, (-2.0, 2.0)).unwrap();
        let back = MultifunctionGraph::<f64>::from_csv(&g.to_csv()).unwrap();
        assert_eq!(back, g);
        assert!(back.truncated());
        assert!(MultifunctionGraph::<f64>::from_csv("1,1,0.1\n").is_err());
    }
}
