//! Level-set sampling by sign-change bracketing on grid edges.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Real;

use super::GridWindow;

/// A continuous function on a box, with a gradient bound for subdivision.
pub trait LevelFunction<T: Real>: Sync {
    fn value(&self, x: &Point<T>) -> T;

    /// An upper bound of the Lipschitz constant on the box `[lo, hi]`;
    /// `T::infinity()` disables subdivision pruning.
    fn lipschitz_bound(&self, lo: &Point<T>, hi: &Point<T>) -> T;
}

/// A level function from two closures.
pub struct FnLevel<V, L> {
    pub value: V,
    pub lipschitz: L,
}

impl<T, V, L> LevelFunction<T> for FnLevel<V, L>
where
    T: Real,
    V: Fn(&Point<T>) -> T + Sync,
    L: Fn(&Point<T>, &Point<T>) -> T + Sync,
{
    fn value(&self, x: &Point<T>) -> T {
        (self.value)(x)
    }

    fn lipschitz_bound(&self, lo: &Point<T>, hi: &Point<T>) -> T {
        (self.lipschitz)(lo, hi)
    }
}

/// Output of [`sample_fiber`].
#[derive(Clone, Debug, PartialEq)]
pub struct FiberSample<T> {
    /// Certified points: bracketed sign changes refined to `eps/2`, and grid
    /// nodes where the function hits the level exactly.
    pub roots: Vec<Point<T>>,
    /// Finest-scale edges where a pair of roots could hide (the Lipschitz
    /// bound allows a zero) but no sign change was seen. Uncertified; they
    /// mark possible tangencies.
    pub touches: Vec<Point<T>>,
}

struct Edge<T> {
    a: Point<T>,
    b: Point<T>,
    ga: T,
    gb: T,
}

fn lerp<T: Real>(a: &Point<T>, b: &Point<T>, t: T) -> Point<T> {
    a.add(&b.sub(a).scale(&t))
}

fn edge_box<T: Real>(a: &Point<T>, b: &Point<T>) -> (Point<T>, Point<T>) {
    let lo: Vec<T> = (0..a.dim()).map(|i| a.coord(i).min(b.coord(i))).collect();
    let hi: Vec<T> = (0..a.dim()).map(|i| a.coord(i).max(b.coord(i))).collect();
    (Point::new(&lo).unwrap(), Point::new(&hi).unwrap())
}

fn refine_edge<T: Real, F: LevelFunction<T>>(
    f: &F,
    level: T,
    e: Edge<T>,
    tol: T,
    min_len: T,
    roots: &mut Vec<Point<T>>,
    touches: &mut Vec<Point<T>>,
) {
    let zero = T::zero();
    if e.ga == zero || e.gb == zero {
        // exact node roots are recorded by the node pass
        return;
    }
    if (e.ga < zero) != (e.gb < zero) {
        let (mut a, mut b, mut ga) = (e.a, e.b, e.ga);
        while a.dist(&b) > tol {
            let m = lerp(&a, &b, T::lit(0.5));
            let gm = f.value(&m) - level;
            if gm == zero {
                roots.push(m);
                return;
            }
            if (gm < zero) == (ga < zero) {
                a = m;
                ga = gm;
            } else {
                b = m;
            }
        }
        roots.push(lerp(&a, &b, T::lit(0.5)));
        return;
    }
    let len = e.a.dist(&e.b);
    let (lo, hi) = edge_box(&e.a, &e.b);
    let lip = f.lipschitz_bound(&lo, &hi);
    if e.ga.abs() + e.gb.abs() > lip * len {
        return;
    }
    if len <= min_len {
        touches.push(if e.ga.abs() <= e.gb.abs() { e.a } else { e.b });
        return;
    }
    let m = lerp(&e.a, &e.b, T::lit(0.5));
    let gm = f.value(&m) - level;
    if gm == zero {
        roots.push(m);
        return;
    }
    refine_edge(
        f,
        level,
        Edge {
            a: e.a,
            b: m,
            ga: e.ga,
            gb: gm,
        },
        tol,
        min_len,
        roots,
        touches,
    );
    refine_edge(
        f,
        level,
        Edge {
            a: m,
            b: e.b,
            ga: gm,
            gb: e.gb,
        },
        tol,
        min_len,
        roots,
        touches,
    );
}

/// Samples `{x in window : f(x) = level}` for `window` of dimension 1 or 2.
///
/// The bracketing grid has spacing `eps/2`; sign changes are bisected to
/// length `eps/2`; edges where the Lipschitz bound admits a hidden root pair
/// are halved down to `eps/64`.
pub fn sample_fiber<T: Real, F: LevelFunction<T>>(
    f: &F,
    level: T,
    window: &GridWindow<T>,
    eps: T,
) -> Result<FiberSample<T>> {
    if window.dim() > 2 {
        return Err(Error::UnsupportedDimension(window.dim()));
    }
    if !(eps > T::zero()) {
        return Err(Error::InvalidParameter("fiber fidelity must be positive".into()));
    }
    let step = (eps / T::lit(2.0)).min(window.min_side());
    let grid = window.with_step(step)?;
    let counts = grid.counts();
    let nodes = grid.nodes();
    let vals: Vec<T> = nodes.par_iter().map(|x| f.value(x) - level).collect();
    let tol = eps / T::lit(2.0);
    let min_len = eps / T::lit(64.0);

    let mut roots: Vec<Point<T>> = nodes
        .iter()
        .zip(&vals)
        .filter(|(_, v)| **v == T::zero())
        .map(|(p, _)| *p)
        .collect();

    // (from, to) node index pairs along each axis
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if grid.dim() == 1 {
        pairs.extend((1..counts[0]).map(|i| (i - 1, i)));
    } else {
        let (nx, ny) = (counts[0], counts[1]);
        for i in 0..nx {
            for j in 0..ny {
                let k = i * ny + j;
                if j + 1 < ny {
                    pairs.push((k, k + 1));
                }
                if i + 1 < nx {
                    pairs.push((k, k + ny));
                }
            }
        }
    }

    let found: Vec<(Vec<Point<T>>, Vec<Point<T>>)> = pairs
        .par_chunks(4096)
        .map(|chunk| {
            let mut r = Vec::new();
            let mut t = Vec::new();
            for &(i, j) in chunk {
                let e = Edge {
                    a: nodes[i],
                    b: nodes[j],
                    ga: vals[i],
                    gb: vals[j],
                };
                refine_edge(f, level, e, tol, min_len, &mut r, &mut t);
            }
            (r, t)
        })
        .collect();
    let mut touches = Vec::new();
    for (r, t) in found {
        roots.extend(r);
        touches.extend(t);
    }
    Ok(FiberSample { roots, touches })
}

/// Isolated solutions of `F(x) = b` for `F: R^2 -> R^2`, by Newton's method
/// started at every cell centre of `window` (finite-difference Jacobian).
///
/// Solutions closer than `eps/4` are merged.
pub fn solve_points_2d<T: Real>(
    f: &(dyn Fn(&Point<T>) -> [T; 2] + Sync),
    b: [T; 2],
    window: &GridWindow<T>,
    eps: T,
) -> Result<Vec<Point<T>>> {
    if window.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: window.dim(),
        });
    }
    let h = window.h();
    let centers: Vec<Point<T>> = window
        .nodes()
        .into_iter()
        .map(|p| p.add(&Point::p2(h / T::lit(2.0), h / T::lit(2.0))))
        .filter(|p| window.contains(p))
        .collect();
    let fd = h * T::lit(1e-3);
    let resid_tol = T::lit(1e-10);
    let mut sols: Vec<Point<T>> = centers
        .par_iter()
        .filter_map(|start| {
            let mut x = *start;
            for _ in 0..30 {
                let v = f(&x);
                let r = [v[0] - b[0], v[1] - b[1]];
                if r[0].abs() + r[1].abs() <= resid_tol {
                    let drift = x.sub(start);
                    let off = drift.coord(0).abs().max(drift.coord(1).abs());
                    return (off <= h && window.contains(&x)).then_some(x);
                }
                let col = |i: usize| {
                    let mut e = [T::zero(); 2];
                    e[i] = fd;
                    let e = Point::p2(e[0], e[1]);
                    let p = f(&x.add(&e));
                    let m = f(&x.sub(&e));
                    [(p[0] - m[0]) / (fd + fd), (p[1] - m[1]) / (fd + fd)]
                };
                let (c0, c1) = (col(0), col(1));
                let det = c0[0] * c1[1] - c1[0] * c0[1];
                if det == T::zero() || !det.is_finite() {
                    return None;
                }
                let dx = (r[0] * c1[1] - c1[0] * r[1]) / det;
                let dy = (c0[0] * r[1] - r[0] * c0[1]) / det;
                x = x.sub(&Point::p2(dx, dy));
                if !x.coord(0).is_finite() || !x.coord(1).is_finite() {
                    return None;
                }
            }
            None
        })
        .collect();
    sols.sort_by(|a, b| a.lex_cmp(b));
    let mut merged: Vec<Point<T>> = Vec::new();
    for s in sols {
        if merged.iter().all(|m| m.dist(&s) > eps / T::lit(4.0)) {
            merged.push(s);
        }
    }
    Ok(merged)
}
