//! Fibers of `x (x - y)^2` near the zero level.

use rayon::prelude::*;

use super::{decide_pairs, ConvergenceReport};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::sets::{default_margin, fiber_xy, limit_set, DefectPair, FamilyId, GridWindow, SampledSet};

/// Lower defects of the fiber at level `c` against the two branches of the
/// zero set, `{x = 0}` and `{x = y}`, inside the window shrunk by the
/// default margin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchDefects {
    pub c: f64,
    pub vertical: f64,
    pub diagonal: f64,
}

impl BranchDefects {
    pub fn max(&self) -> f64 {
        self.vertical.max(self.diagonal)
    }
}

fn sup_dist(from: &[Point<f64>], to: &SampledSet<f64>) -> Result<f64> {
    Ok(from
        .par_iter()
        .map(|p| to.eval_dist(p))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max))
}

/// Per-branch lower defects at level `c`; fibers are sampled at fidelity
/// `grid_h` on `window`.
pub fn fiber_branch_defects(c: f64, window: &GridWindow<f64>, grid_h: f64) -> Result<BranchDefects> {
    if c == 0.0 {
        return Err(Error::ZeroLevel);
    }
    if window.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: window.dim(),
        });
    }
    let inner = window.shrink(default_margin(grid_h, grid_h))?;
    let zero = limit_set(FamilyId::FiberXY, window, grid_h)?.restricted(&inner);
    let fiber = fiber_xy(c, grid_h, window.clone())?;
    let vertical: Vec<Point<f64>> = zero.iter().filter(|p| p.coord(0) == 0.0).copied().collect();
    let diagonal: Vec<Point<f64>> = zero.iter().filter(|p| p.coord(0) == p.coord(1)).copied().collect();
    Ok(BranchDefects {
        c,
        vertical: sup_dist(&vertical, &fiber)?,
        diagonal: sup_dist(&diagonal, &fiber)?,
    })
}

/// Sup over the zero set in the shrunk window of the distance to the fiber
/// at level `c`.
pub fn fiber_counterexample_defect(c: f64, window: &GridWindow<f64>, grid_h: f64) -> Result<f64> {
    Ok(fiber_branch_defects(c, window, grid_h)?.max())
}

/// Branch defects at `c = ±10^{-k}` for `k = 1..=k_max`, positive levels
/// first.
pub fn fiber_defect_series(k_max: u32, window: &GridWindow<f64>, grid_h: f64) -> Result<Vec<BranchDefects>> {
    let mut levels: Vec<f64> = (1..=k_max).map(|k| 10f64.powi(-(k as i32))).collect();
    levels.extend((1..=k_max).map(|k| -(10f64.powi(-(k as i32)))));
    levels
        .iter()
        .map(|&c| fiber_branch_defects(c, window, grid_h))
        .collect()
}

/// `min` over the series of the per-level best branch defect, for one sign.
pub fn fiber_delta(series: &[BranchDefects], positive: bool) -> f64 {
    series
        .iter()
        .filter(|d| (d.c > 0.0) == positive)
        .map(BranchDefects::max)
        .fold(f64::INFINITY, f64::min)
}

/// [`fiber_defect_series`] as a report: index `k`, lower defect the best
/// branch at `c = 10^{-k}`, upper defect the best branch at `c = -10^{-k}`.
/// A defect that does not vanish as `k` grows gives DIVERGES.
pub fn fiber_report(k_max: u32, window: &GridWindow<f64>, grid_h: f64, tol: f64) -> Result<ConvergenceReport> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be >= 1".into()));
    }
    let series = fiber_defect_series(k_max, window, grid_h)?;
    let k = k_max as usize;
    let mut report = ConvergenceReport::new("fiber/fiber-xy", (1..=k_max as u64).collect(), tol);
    report.defect_series = (0..k)
        .map(|i| DefectPair {
            lower_defect: series[i].max(),
            upper_defect: series[k + i].max(),
        })
        .collect();
    report.verdict = decide_pairs(&report.indices, &report.defect_series, tol, 0.0);
    report.metric("delta_positive", fiber_delta(&series, true));
    report.metric("delta_negative", fiber_delta(&series, false));
    report.note("columns: lower = level 10^-k, upper = level -10^-k; each the larger branch defect");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win() -> GridWindow<f64> {
        GridWindow::cube(2, -2.0, 2.0, 0.05).unwrap()
    }

    #[test]
    fn zero_level_rejected() {
        assert_eq!(fiber_counterexample_defect(0.0, &win(), 0.05), Err(Error::ZeroLevel));
    }

    #[test]
    fn zero_set_is_two_lines() {
        let z = limit_set(FamilyId::FiberXY, &win(), 0.05).unwrap();
        assert!(z.points().iter().all(|p| p.coord(0) == 0.0 || p.coord(0) == p.coord(1)));
        let near = |x: f64, y: f64| z.points().iter().any(|p| p.dist(&Point::p2(x, y)) <= 0.05);
        assert!(near(0.0, 1.5) && near(-1.5, -1.5) && near(1.9, 1.9) && near(0.0, -1.9));
        assert!(!near(1.0, 0.0));
    }

    #[test]
    fn diagonal_branch_stays_away() {
        // the fiber at c > 0 lies in x > 0, far from the diagonal's x < 0 half
        let s = fiber_defect_series(3, &win(), 0.05).unwrap();
        assert_eq!(s.len(), 6);
        for d in &s {
            assert!(d.diagonal >= 1.5, "{d:?}");
            assert!(d.vertical < d.diagonal);
        }
        assert!(fiber_delta(&s, true) >= 1.5 && fiber_delta(&s, false) >= 1.5);
        let r = fiber_report(3, &win(), 0.05, 0.1).unwrap();
        assert_eq!(r.verdict, crate::harness::Verdict::Diverges);
        assert_eq!(r.defect_series[0].lower_defect, s[0].max());
        assert_eq!(r.defect_series[2].upper_defect, s[5].max());
    }
}
