//! Spatial index for nearest-sample and radius queries (an R*-tree per
//! dimension).

use rstar::primitives::GeomWithData;
use rstar::RTree;

use crate::geom::Point;
use crate::scalar::Real;

type Entry<const K: usize> = GeomWithData<[f64; K], usize>;

#[derive(Clone, Debug)]
enum Tree {
    /// Points of `R` embedded as `(x, 0)`: the tree needs two axes.
    D1(RTree<Entry<2>>),
    D2(RTree<Entry<2>>),
    D3(RTree<Entry<3>>),
    D4(RTree<Entry<4>>),
}

/// Nearest-point and radius queries over a fixed point set.
#[derive(Clone, Debug)]
pub struct PointIndex {
    len: usize,
    tree: Tree,
}

fn coords<T: Real, const K: usize>(p: &Point<T>) -> [f64; K] {
    let mut c = [0.0; K];
    for (i, v) in p.coords().iter().enumerate().take(K) {
        c[i] = v.to_f64().unwrap_or(0.0);
    }
    c
}

fn load<T: Real, const K: usize>(points: &[Point<T>]) -> RTree<Entry<K>> {
    RTree::bulk_load(
        points
            .iter()
            .enumerate()
            .map(|(i, p)| GeomWithData::new(coords(p), i))
            .collect(),
    )
}

/// Nearest entry with the lowest index among equidistant ones.
fn nearest_in<const K: usize>(tree: &RTree<Entry<K>>, q: [f64; K]) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for (e, d) in tree.nearest_neighbor_iter_with_distance_2(&q) {
        if d > best.1 {
            break;
        }
        if d < best.1 || e.data < best.0 {
            best = (e.data, d);
        }
    }
    best
}

fn within_in<const K: usize>(tree: &RTree<Entry<K>>, q: [f64; K], r2: f64) -> Vec<usize> {
    let mut out: Vec<usize> = tree.locate_within_distance(q, r2).map(|e| e.data).collect();
    out.sort_unstable();
    out
}

impl PointIndex {
    /// Builds the index; `points` must be nonempty and share one dimension
    /// (at most 4).
    pub fn build<T: Real>(points: &[Point<T>]) -> Self {
        assert!(!points.is_empty(), "index over an empty point set");
        let tree = match points[0].dim() {
            1 => Tree::D1(load(points)),
            2 => Tree::D2(load(points)),
            3 => Tree::D3(load(points)),
            _ => Tree::D4(load(points)),
        };
        PointIndex {
            len: points.len(),
            tree,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Index and squared distance of a nearest point to `x` (ties: lowest index).
    pub fn nearest<T: Real>(&self, x: &Point<T>) -> (usize, f64) {
        match &self.tree {
            Tree::D1(t) => nearest_in(t, coords(x)),
            Tree::D2(t) => nearest_in(t, coords(x)),
            Tree::D3(t) => nearest_in(t, coords(x)),
            Tree::D4(t) => nearest_in(t, coords(x)),
        }
    }

    /// Indices of all points with `|p - x| <= radius`, sorted.
    pub fn within<T: Real>(&self, x: &Point<T>, radius: f64) -> Vec<usize> {
        let r2 = radius * radius;
        match &self.tree {
            Tree::D1(t) => within_in(t, coords(x), r2),
            Tree::D2(t) => within_in(t, coords(x), r2),
            Tree::D3(t) => within_in(t, coords(x), r2),
            Tree::D4(t) => within_in(t, coords(x), r2),
        }
    }
}
