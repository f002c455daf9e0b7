//! Low-dimensional geometric primitives shared by the other modules.

mod point;
mod polytope;

pub use point::{Point, MAX_DIM};
pub use polytope::{convex_hull, ConvexPolytope};

use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_same_dim<T: Real>(a: &[Point<T>], b: &[Point<T>]) -> Result<usize> {
    let dim = a.first().ok_or(Error::EmptyInput)?.dim();
    b.first().ok_or(Error::EmptyInput)?;
    for p in a.iter().chain(b) {
        p.check_dim(dim)?;
    }
    Ok(dim)
}

/// Directed Hausdorff distance `sup_{a in A} dist(a, B)` by enumeration.
pub fn directed_hausdorff<T: Real>(a: &[Point<T>], b: &[Point<T>]) -> Result<T> {
    check_same_dim(a, b)?;
    let mut worst = T::zero();
    for p in a {
        let mut best = T::infinity();
        for q in b {
            let d = p.dist_sq(q);
            if d < best {
                best = d;
                if best <= worst {
                    break;
                }
            }
        }
        worst = worst.max(best);
    }
    Ok(worst.sqrt())
}

/// Hausdorff distance between two nonempty finite point sets.
pub fn hausdorff<T: Real>(a: &[Point<T>], b: &[Point<T>]) -> Result<T> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Hausdorff distance between two convex polytopes.
///
/// The distance to a convex body is a convex function, so each directed part
/// is attained at a vertex of the other polytope.
pub fn polytope_hausdorff<T: Real>(p: &ConvexPolytope<T>, q: &ConvexPolytope<T>) -> Result<T> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let directed = |from: &ConvexPolytope<T>, to: &ConvexPolytope<T>| {
        from.vertices()
            .iter()
            .map(|v| to.distance_to(v))
            .fold(T::zero(), T::max)
    };
    Ok(directed(p, q).max(directed(q, p)))
}
