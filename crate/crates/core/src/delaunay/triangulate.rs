use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{convex_hull, Point};
use crate::scalar::Real;

use super::{circumcenter, edge_status, first_collinear, Violation};

const GHOST: usize = usize::MAX;

/// Degeneracy policy for [`triangulate_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Perturbation {
    /// Reject inputs that are not in general position.
    Reject,
    /// Resolve co-circular ties by a symbolic lifting perturbation in site
    /// index order; collinear sites are accepted.
    Symbolic,
}

/// An edge of the diagram with its local Delaunay status.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub locally_delaunay: bool,
    /// The only admissible empty circle passes through further sites.
    pub cocircular: bool,
}

/// A Delaunay triangulation of the convex hull of the sites.
#[derive(Clone, Debug, PartialEq)]
pub struct DelaunayDiagram<T> {
    pub sites: Vec<Point<T>>,
    /// Counterclockwise index triples.
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<Edge>,
    /// Circumcentre and circumradius per triangle.
    pub circumdata: Vec<(Point<T>, T)>,
}

/// A triangle of sites whose circumdisc holds no site, together with its circle.
#[derive(Clone, Debug, PartialEq)]
pub struct EmptyCircle<T> {
    pub triple: [usize; 3],
    pub center: Point<T>,
    pub radius: T,
}

/// Outcome of the brute-force certificate pass.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CertificateReport {
    /// Triangles whose open circumdisc contains a site, with that site.
    pub empty_circle_failures: Vec<(usize, usize)>,
    /// Edges that are not locally Delaunay.
    pub edge_failures: Vec<[usize; 2]>,
    /// `|sum of triangle areas - hull area| / hull area`.
    pub area_mismatch: f64,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.empty_circle_failures.is_empty() && self.edge_failures.is_empty() && self.area_mismatch <= 1e-9
    }
}

/// In-circle test under the symbolic perturbation: lifted heights are raised
/// by infinitesimals ordered by site index (lower index, larger raise).
fn incircle_perturbed<T: Real>(sites: &[Point<T>], t: [usize; 3], d: usize) -> Ordering {
    let [a, b, c] = t;
    let exact = T::incircle(&sites[a], &sites[b], &sites[c], &sites[d]);
    if exact != Ordering::Equal {
        return exact;
    }
    let mut order = [a, b, c, d];
    order.sort_unstable();
    for k in order {
        if k == d {
            // raising d lifts it above the plane of a, b, c
            return Ordering::Less;
        }
        // raising a vertex tilts the plane up on its side of the opposite edge
        let (u, v) = if k == a {
            (b, c)
        } else if k == b {
            (c, a)
        } else {
            (a, b)
        };
        let side_k = T::orient2d(&sites[u], &sites[v], &sites[k]);
        let side_d = T::orient2d(&sites[u], &sites[v], &sites[d]);
        if side_d == Ordering::Equal {
            continue;
        }
        return if side_d == side_k {
            Ordering::Greater
        } else {
            Ordering::Less
        };
    }
    Ordering::Less
}

fn between<T: Real>(p: &Point<T>, a: &Point<T>, b: &Point<T>) -> bool {
    (0..2).all(|c| {
        let (x, y) = (a.coord(c), b.coord(c));
        let v = p.coord(c);
        x.min(y) < v && v < x.max(y) || (x == y && v == x)
    }) && p != a
        && p != b
}

/// Ghost triangles are `[x, y, GHOST]` for the hull edge `x -> y` seen from outside.
fn in_conflict<T: Real>(sites: &[Point<T>], t: [usize; 3], p: usize) -> bool {
    if t[2] == GHOST {
        let (x, y) = (&sites[t[0]], &sites[t[1]]);
        return match T::orient2d(x, y, &sites[p]) {
            Ordering::Greater => true,
            Ordering::Equal => between(&sites[p], x, y),
            Ordering::Less => false,
        };
    }
    incircle_perturbed(sites, t, p) == Ordering::Greater
}

fn rotate_ghost(t: [usize; 3]) -> [usize; 3] {
    match t.iter().position(|&v| v == GHOST) {
        Some(0) => [t[1], t[2], t[0]],
        Some(1) => [t[2], t[0], t[1]],
        _ => t,
    }
}

fn check_duplicates<T: Real>(sites: &[Point<T>]) -> Result<()> {
    let mut idx: Vec<usize> = (0..sites.len()).collect();
    idx.sort_by(|&a, &b| sites[a].lex_cmp(&sites[b]).then(a.cmp(&b)));
    for w in idx.windows(2) {
        if sites[w[0]] == sites[w[1]] {
            return Err(Error::DuplicateSites(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    Ok(())
}

/// Delaunay triangulation, rejecting inputs outside general position.
pub fn triangulate<T: Real>(sites: &[Point<T>]) -> Result<DelaunayDiagram<T>> {
    triangulate_with(sites, Perturbation::Reject)
}

pub fn triangulate_with<T: Real>(sites: &[Point<T>], policy: Perturbation) -> Result<DelaunayDiagram<T>> {
    if sites.len() < 3 {
        return Err(Error::InvalidParameter("triangulation needs at least 3 sites".into()));
    }
    for s in sites {
        s.check_dim(2)?;
    }
    check_duplicates(sites)?;
    if policy == Perturbation::Reject {
        if let Some(t) = first_collinear(sites) {
            return Err(Error::GeneralPositionViolation(Violation::Collinear(t)));
        }
    }
    let n = sites.len();
    let third = (2..n)
        .find(|&k| T::orient2d(&sites[0], &sites[1], &sites[k]) != Ordering::Equal)
        .ok_or(Error::Degenerate)?;
    let (a, b, c) = if T::orient2d(&sites[0], &sites[1], &sites[third]) == Ordering::Greater {
        (0, 1, third)
    } else {
        (1, 0, third)
    };
    let mut tris: Vec<[usize; 3]> = vec![[a, b, c], [b, a, GHOST], [c, b, GHOST], [a, c, GHOST]];

    for p in (2..n).filter(|&k| k != third) {
        insert(sites, &mut tris, p)?;
    }

    let triangles: Vec<[usize; 3]> = tris.into_iter().filter(|t| !t.contains(&GHOST)).collect();
    let circumdata = triangles
        .iter()
        .map(|t| circumcenter(&sites[t[0]], &sites[t[1]], &sites[t[2]]))
        .collect::<Result<Vec<_>>>()?;

    let mut pairs: Vec<[usize; 2]> = triangles
        .iter()
        .flat_map(|t| [[t[0], t[1]], [t[1], t[2]], [t[2], t[0]]])
        .map(|[u, v]| [u.min(v), u.max(v)])
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let edges = pairs
        .par_iter()
        .map(|&[i, j]| {
            let (ld, co) = edge_status(i, j, sites)?;
            Ok(Edge {
                i,
                j,
                locally_delaunay: ld,
                cocircular: co,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    if policy == Perturbation::Reject {
        // an empty circle through four sites shows up across an interior edge
        let mut opposite: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &triangles {
            for k in 0..3 {
                opposite.insert((t[k], t[(k + 1) % 3]), t[(k + 2) % 3]);
            }
        }
        for t in &triangles {
            for k in 0..3 {
                let (u, v) = (t[k], t[(k + 1) % 3]);
                if let Some(&w) = opposite.get(&(v, u)) {
                    if T::incircle(&sites[t[0]], &sites[t[1]], &sites[t[2]], &sites[w]) == Ordering::Equal {
                        let mut q = [t[0], t[1], t[2], w];
                        q.sort_unstable();
                        return Err(Error::GeneralPositionViolation(Violation::Cocircular(q)));
                    }
                }
            }
        }
    }

    Ok(DelaunayDiagram {
        sites: sites.to_vec(),
        triangles,
        edges,
        circumdata,
    })
}

fn insert<T: Real>(sites: &[Point<T>], tris: &mut Vec<[usize; 3]>, p: usize) -> Result<()> {
    let (cavity, keep): (Vec<[usize; 3]>, Vec<[usize; 3]>) = tris.iter().partition(|t| in_conflict(sites, **t, p));
    if cavity.is_empty() {
        return Err(Error::Degenerate);
    }
    let mut directed: HashMap<(usize, usize), ()> = HashMap::new();
    for t in &cavity {
        for k in 0..3 {
            directed.insert((t[k], t[(k + 1) % 3]), ());
        }
    }
    let mut fresh = Vec::new();
    for t in &cavity {
        for k in 0..3 {
            let (u, v) = (t[k], t[(k + 1) % 3]);
            if directed.contains_key(&(v, u)) {
                continue;
            }
            let nt = rotate_ghost([u, v, p]);
            if nt[2] != GHOST && T::orient2d(&sites[nt[0]], &sites[nt[1]], &sites[nt[2]]) != Ordering::Greater {
                return Err(Error::Degenerate);
            }
            fresh.push(nt);
        }
    }
    *tris = keep;
    tris.extend(fresh);
    Ok(())
}

impl<T: Real> DelaunayDiagram<T> {
    /// Brute-force checks: every open circumdisc empty (exact in-circle
    /// against all sites), every edge locally Delaunay, triangle areas summing
    /// to the hull area.
    pub fn verify_certificates(&self) -> CertificateReport {
        let s = &self.sites;
        let empty_circle_failures: Vec<(usize, usize)> = self
            .triangles
            .par_iter()
            .enumerate()
            .flat_map_iter(|(ti, t)| {
                (0..s.len())
                    .filter(move |&k| {
                        !t.contains(&k) && T::incircle(&s[t[0]], &s[t[1]], &s[t[2]], &s[k]) == Ordering::Greater
                    })
                    .map(move |k| (ti, k))
            })
            .collect();
        let edge_failures = self
            .edges
            .par_iter()
            .filter(|e| !matches!(edge_status(e.i, e.j, s), Ok((true, _))))
            .map(|e| [e.i, e.j])
            .collect();
        let area = |t: &[usize; 3]| {
            let (a, b, c) = (s[t[0]].to_f64(), s[t[1]].to_f64(), s[t[2]].to_f64());
            0.5 * ((b.coord(0) - a.coord(0)) * (c.coord(1) - a.coord(1))
                - (b.coord(1) - a.coord(1)) * (c.coord(0) - a.coord(0)))
        };
        let total: f64 = self.triangles.iter().map(area).sum();
        let hull = convex_hull(s).expect("sites are planar and nonempty");
        let v: Vec<Point<f64>> = hull.vertices().iter().map(|p| p.to_f64()).collect();
        let hull_area: f64 = (0..v.len())
            .map(|i| {
                let (a, b) = (&v[i], &v[(i + 1) % v.len()]);
                0.5 * (a.coord(0) * b.coord(1) - b.coord(0) * a.coord(1))
            })
            .sum();
        CertificateReport {
            empty_circle_failures,
            edge_failures,
            area_mismatch: if hull_area > 0.0 {
                (total - hull_area).abs() / hull_area
            } else {
                f64::INFINITY
            },
        }
    }

    /// A triangle of the diagram holding `y` (boundary included) and its
    /// empty circumcircle.
    pub fn locate_empty_circle(&self, y: &Point<T>) -> Result<EmptyCircle<T>> {
        y.check_dim(2)?;
        let s = &self.sites;
        let k = self
            .triangles
            .iter()
            .position(|t| (0..3).all(|e| T::orient2d(&s[t[e]], &s[t[(e + 1) % 3]], y) != Ordering::Less))
            .ok_or(Error::OutsideHull)?;
        let (center, radius) = self.circumdata[k];
        Ok(EmptyCircle {
            triple: self.triangles[k],
            center,
            radius,
        })
    }

    /// Rows `i,j,xi,yi,xj,yj,locally_delaunay,cocircular`.
    pub fn edges_csv(&self) -> String {
        let mut out = String::from("i,j,xi,yi,xj,yj,locally_delaunay,cocircular\n");
        for e in &self.edges {
            let (a, b) = (&self.sites[e.i], &self.sites[e.j]);
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                e.i,
                e.j,
                a.coord(0).to_exact_string(),
                a.coord(1).to_exact_string(),
                b.coord(0).to_exact_string(),
                b.coord(1).to_exact_string(),
                u8::from(e.locally_delaunay),
                u8::from(e.cocircular)
            )
            .unwrap();
        }
        out
    }

    /// Rows `a,b,c,center_x,center_y,radius`.
    pub fn triangles_csv(&self) -> String {
        let mut out = String::from("a,b,c,center_x,center_y,radius\n");
        for (t, (c, r)) in self.triangles.iter().zip(&self.circumdata) {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                t[0],
                t[1],
                t[2],
                c.coord(0).to_exact_string(),
                c.coord(1).to_exact_string(),
                r.to_exact_string()
            )
            .unwrap();
        }
        out
    }
}

/// Triangulates (with perturbation) and locates `y`.
pub fn locate_empty_circle<T: Real>(y: &Point<T>, sites: &[Point<T>]) -> Result<EmptyCircle<T>> {
    triangulate_with(sites, Perturbation::Symbolic)?.locate_empty_circle(y)
}

/// `n` uniform sites in the unit square.
pub fn random_sites(n: usize, seed: u64) -> Vec<Point<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point::p2(rng.gen::<f64>(), rng.gen::<f64>())).collect()
}
