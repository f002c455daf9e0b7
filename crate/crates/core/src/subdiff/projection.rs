use crate::error::Result;
use crate::geom::{convex_hull, ConvexPolytope, Point};
use crate::scalar::Real;
use crate::sets::SampledSet;

/// Approximate metric projection of a point onto a sampled set.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionSet<T> {
    pub base: Point<T>,
    /// Samples within `radius + tol` of `base`.
    pub candidates: Vec<Point<T>>,
    /// Distance from `base` to the sample.
    pub radius: T,
    pub tol: T,
}

impl<T: Real> ProjectionSet<T> {
    /// Largest distance between two candidates.
    pub fn diameter(&self) -> T {
        if self.base.dim() <= 2 {
            if let Ok(hull) = convex_hull(&self.candidates) {
                return hull.diameter();
            }
        }
        let c = &self.candidates;
        let mut best = T::zero();
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                best = best.max(c[i].dist(&c[j]));
            }
        }
        best
    }
}

/// Default projection tolerance `2(eps + spacing)`.
pub fn default_projection_tol<T: Real>(s: &SampledSet<T>) -> T {
    T::lit(2.0) * (s.eps() + s.spacing())
}

pub fn projection_set<T: Real>(s: &SampledSet<T>, x: &Point<T>, tol: T) -> Result<ProjectionSet<T>> {
    let radius = s.eval_dist(x)?;
    let candidates = s.within(x, radius + tol)?.into_iter().map(|i| s.points()[i]).collect();
    Ok(ProjectionSet {
        base: *x,
        candidates,
        radius,
        tol,
    })
}

/// `2 (x - conv P(x))` for the approximate projection `P(x)`: the Clarke
/// subdifferential of the squared distance.
pub fn clarke_sq_dist<T: Real>(s: &SampledSet<T>, x: &Point<T>, tol: T) -> Result<ConvexPolytope<T>> {
    let p = projection_set(s, x, tol)?;
    let two = T::lit(2.0);
    let pts: Vec<Point<T>> = p.candidates.iter().map(|c| x.sub(c).scale(&two)).collect();
    convex_hull(&pts)
}

/// Whether `x` has two nearest samples at least `separation` apart.
pub fn medial_axis_flag<T: Real>(s: &SampledSet<T>, x: &Point<T>, tol: T, separation: T) -> Result<bool> {
    Ok(projection_set(s, x, tol)?.diameter() >= separation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::polytope_hausdorff;
    use crate::sets::{make_family, FamilyId, GridWindow};

    fn two_points() -> SampledSet<f64> {
        let w = GridWindow::cube(2, -2.0, 2.0, 0.1).unwrap();
        SampledSet::new(vec![Point::p2(-1.0, 0.0), Point::p2(1.0, 0.0)], 0.0, w).unwrap()
    }

    #[test]
    fn symmetric_pair() {
        let s = two_points();
        let p = projection_set(&s, &Point::p2(0.0, 0.5), 1e-9).unwrap();
        assert_eq!(p.candidates.len(), 2);
        assert!((p.radius - 1.25f64.sqrt()).abs() < 1e-15);
        for t in [-1.5, 0.0, 0.3, 1.9] {
            assert!(medial_axis_flag(&s, &Point::p2(0.0, t), 1e-9, 1.0).unwrap());
        }
        assert!(!medial_axis_flag(&s, &Point::p2(0.2, 0.0), 1e-9, 1.0).unwrap());
    }

    #[test]
    fn single_point_is_never_medial() {
        let w = GridWindow::cube(2, -1.0, 1.0, 0.1).unwrap();
        let s = SampledSet::new(vec![Point::p2(0.3, 0.1)], 0.0, w).unwrap();
        assert!(!medial_axis_flag(&s, &Point::p2(-0.9, 0.7), 0.5, 1e-6).unwrap());
    }

    #[test]
    fn circle_center_projects_everywhere() {
        let w = GridWindow::cube(2, -2.0, 2.0, 0.05).unwrap();
        let eps: f64 = 1e-3;
        let s = make_family(FamilyId::UnitCircle, 1, &w, eps).expect("circle");
        let p = projection_set(&s, &Point::p2(0.0, 0.0), 2.0 * eps).unwrap();
        assert_eq!(p.candidates.len(), s.len());
        let d = clarke_sq_dist(&s, &Point::p2(0.0, 0.0), 2.0 * eps).unwrap();
        // 2 (0 - conv circle) is the disc of radius 2
        assert!(d.distance_to(&Point::p2(0.0, 0.0)) == 0.0);
        assert!((d.diameter() - 4.0).abs() < 1e-3);
    }

    #[test]
    fn paper_family_table() {
        let w = GridWindow::cube(1, -1.0, 1.0, 0.01).unwrap();
        let eps: f64 = 1e-3;
        let tol: f64 = 2e-3;
        let s = make_family(FamilyId::PaperXN, 2, &w, eps).unwrap();
        let p = projection_set(&s, &Point::p1(0.1), tol).unwrap();
        assert!((p.radius - 0.4).abs() < 1e-12);
        assert!(p.candidates.iter().all(|c| (c.coord(0) - 0.5).abs() <= tol + 1e-12));
        let at0 = clarke_sq_dist(&s, &Point::p1(0.0), tol).unwrap();
        let want = ConvexPolytope::interval(-1.0, 1.0);
        assert!(polytope_hausdorff(&at0, &want).unwrap() <= 2.0 * (eps + tol));
        assert!(medial_axis_flag(&s, &Point::p1(0.0), tol, 0.5).unwrap());
        let g = clarke_sq_dist(&s, &Point::p1(0.1), tol).unwrap();
        let want = ConvexPolytope::interval(0.2 - 1.0, 0.2 - 1.0);
        assert!(polytope_hausdorff(&g, &want).unwrap() <= 2.0 * (eps + tol));
        let on = clarke_sq_dist(&s, &Point::p1(0.7), tol).unwrap();
        assert!(on.distance_to(&Point::p1(0.0)) == 0.0 && on.diameter() <= 4.0 * tol);
    }
}
