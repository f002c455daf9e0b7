//! Planar Delaunay diagrams with exact predicates.
//!
//! Construction is incremental (Bowyer-Watson with ghost triangles); the
//! empty-circle certificates are checked by a separate brute-force pass.
//! Ties between co-circular sites can be broken by a symbolic lifting
//! perturbation in which a lower site index weighs more.

mod triangulate;

pub use triangulate::{
    locate_empty_circle, random_sites, triangulate, triangulate_with, CertificateReport, DelaunayDiagram, Edge,
    EmptyCircle, Perturbation,
};

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Real;

/// A failure of general position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Collinear([usize; 3]),
    Cocircular([usize; 4]),
}

fn check_planar<T: Real>(pts: &[&Point<T>]) -> Result<()> {
    for p in pts {
        p.check_dim(2)?;
    }
    Ok(())
}

/// Centre and radius of the circle through three affinely independent points.
///
/// The points are sorted first, so the result does not depend on their order.
pub fn circumcenter<T: Real>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> Result<(Point<T>, T)> {
    check_planar(&[a, b, c])?;
    if T::orient2d(a, b, c) == Ordering::Equal {
        return Err(Error::Degenerate);
    }
    let mut v = [*a, *b, *c];
    v.sort_by(|p, q| p.lex_cmp(q));
    let [a, b, c] = v;
    let (bx, by) = (b.coord(0) - a.coord(0), b.coord(1) - a.coord(1));
    let (cx, cy) = (c.coord(0) - a.coord(0), c.coord(1) - a.coord(1));
    let d = T::lit(2.0) * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point::p2(a.coord(0) + ux, a.coord(1) + uy);
    Ok((center, ux.hypot(uy)))
}

/// Exact in-circle test for `d` against the circle through `a, b, c` in any
/// orientation: `Greater` strictly inside, `Equal` on the circle.
pub(crate) fn in_circle_any<T: Real>(a: &Point<T>, b: &Point<T>, c: &Point<T>, d: &Point<T>) -> Ordering {
    match T::orient2d(a, b, c) {
        Ordering::Greater => T::incircle(a, b, c, d),
        Ordering::Less => T::incircle(a, c, b, d),
        Ordering::Equal => Ordering::Less,
    }
}

/// Whether sites `i` and `j` lie on a circle whose open disc holds no site.
///
/// Decided exactly on the pencil of circles through the two sites: every other
/// site bounds the pencil on its side of the line, and the pencil keeps an
/// admissible circle iff the tightest bound on the left does not cross the
/// tightest bound on the right.
pub fn is_locally_delaunay<T: Real>(i: usize, j: usize, sites: &[Point<T>]) -> Result<bool> {
    Ok(edge_status(i, j, sites)?.0)
}

/// [`is_locally_delaunay`] plus a degeneracy flag: `true` when a single
/// circle of the pencil is admissible and it passes through further sites.
pub fn edge_status<T: Real>(i: usize, j: usize, sites: &[Point<T>]) -> Result<(bool, bool)> {
    let n = sites.len();
    if i >= n {
        return Err(Error::IndexOutOfRange(i));
    }
    if j >= n {
        return Err(Error::IndexOutOfRange(j));
    }
    if i == j {
        return Err(Error::InvalidParameter("an edge needs two distinct sites".into()));
    }
    let (p, q) = (&sites[i], &sites[j]);
    check_planar(&[p, q])?;
    if p == q {
        return Err(Error::DuplicateSites(i.min(j), i.max(j)));
    }
    let (mut left, mut right): (Option<usize>, Option<usize>) = (None, None);
    for (k, s) in sites.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        s.check_dim(2)?;
        if s == p || s == q {
            return Err(Error::DuplicateSites(
                k.min(if s == p { i } else { j }),
                k.max(if s == p { i } else { j }),
            ));
        }
        match T::orient2d(p, q, s) {
            Ordering::Equal => {
                // on the line: inside every circle of the pencil iff between p and q
                let between = (0..2).all(|c| {
                    let (a, b) = (p.coord(c), q.coord(c));
                    let x = s.coord(c);
                    a.min(b) <= x && x <= a.max(b)
                });
                if between {
                    return Ok((false, false));
                }
            }
            Ordering::Greater => {
                if left.is_none_or(|m| T::incircle(p, q, &sites[m], s) == Ordering::Greater) {
                    left = Some(k);
                }
            }
            Ordering::Less => {
                if right.is_none_or(|m| T::incircle(q, p, &sites[m], s) == Ordering::Greater) {
                    right = Some(k);
                }
            }
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => match T::incircle(p, q, &sites[l], &sites[r]) {
            Ordering::Greater => Ok((false, false)),
            Ordering::Equal => Ok((true, true)),
            Ordering::Less => Ok((true, false)),
        },
        _ => Ok((true, false)),
    }
}

/// All collinear triples and co-circular quadruples (exact predicates),
/// in lexicographic index order. Brute force: `O(n^4)`.
pub fn general_position_check<T: Real>(sites: &[Point<T>]) -> Vec<Violation> {
    let n = sites.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if T::orient2d(&sites[a], &sites[b], &sites[c]) == Ordering::Equal {
                    out.push(Violation::Collinear([a, b, c]));
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if T::orient2d(&sites[a], &sites[b], &sites[c]) == Ordering::Equal {
                    continue;
                }
                for d in c + 1..n {
                    if in_circle_any(&sites[a], &sites[b], &sites[c], &sites[d]) == Ordering::Equal {
                        out.push(Violation::Cocircular([a, b, c, d]));
                    }
                }
            }
        }
    }
    out
}

/// First collinear triple in lexicographic order, if any (`O(n^3)`).
pub(crate) fn first_collinear<T: Real>(sites: &[Point<T>]) -> Option<[usize; 3]> {
    let n = sites.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if T::orient2d(&sites[a], &sites[b], &sites[c]) == Ordering::Equal {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}
