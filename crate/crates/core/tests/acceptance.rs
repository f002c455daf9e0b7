//! Acceptance suite: one PASS/FAIL line per criterion on standard output,
//! with every tolerance and runtime budget pinned below.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use setconv::delaunay::{random_sites, triangulate};
use setconv::geom::{polytope_hausdorff, ConvexPolytope, Point};
use setconv::harness::{
    fiber_defect_series, spike_slice_report, verify_convex_boundary, verify_dist_counterexample, verify_level_sets,
    verify_lipschitz_theorem, verify_sq_dist_convergence, zarankiewicz_extract, CellSetSequence, HarnessOptions,
    LevelFamily, Verdict,
};
use setconv::scalar::Scalar;
use setconv::sets::{make_family, FamilyId, GridWindow, PlanarShape};
use setconv::subdiff::{clarke_sq_dist, default_projection_tol, PLFunction1D, PlFamily};
use setconv::Error;

// criterion 1
const C1_EPS: f64 = 1e-3;
const C1_BUDGET: Duration = Duration::from_secs(1);
// criterion 2
const C2_TOL: f64 = 0.05;
const C2_PERSISTENT: f64 = 0.9;
const C2_BUDGET: Duration = Duration::from_secs(30);
// criterion 3
const C3_SAWTOOTH_BOUND: f64 = 0.05;
const C3_EPS: f64 = 5e-3;
const C3_BUDGET: Duration = Duration::from_secs(10);
// criterion 4
const C4_FUNCTIONS: usize = 1000;
const C4_MAX_BREAKPOINTS: usize = 50;
// criterion 5
const C5_SETS: u64 = 100;
const C5_SITES: usize = 200;
const C5_QUERIES: usize = 100;
const C5_BUDGET: Duration = Duration::from_secs(60);
// criterion 6
const C6_TOL: f64 = 0.05;
const C6_BUDGET: Duration = Duration::from_secs(10);
// criterion 7
const C7_EPS: f64 = 0.01;
const C7_H: f64 = 0.05;
const C7_TOL: f64 = 0.05;
// criterion 8
const C8_SEQUENCES: u64 = 200;
const C8_MAX_CELLS: usize = 64;
const C8_MAX_LEN: usize = 512;
// criterion 9
const C9_H: f64 = 0.05;
const C9_DELTA_FLOOR: f64 = 4.0 * C9_H;
const C9_BUDGET: Duration = Duration::from_secs(20);

struct Outcome {
    pass: bool,
    detail: String,
}

fn line(k: usize, title: &str, o: &Outcome, t: Duration) {
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "criterion {k} {verdict} {title}: {} [{:.2} s]",
        o.detail,
        t.as_secs_f64()
    )
    .unwrap();
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Closed-form Clarke subdifferential of `dist^2` to `(-inf, -1/n] ∪ [1/n, inf)`.
fn sq_dist_table(n: u64, x: f64) -> ConvexPolytope<f64> {
    let r = 1.0 / n as f64;
    if x == 0.0 {
        ConvexPolytope::interval(-2.0 * r, 2.0 * r)
    } else if x.abs() >= r {
        ConvexPolytope::interval(0.0, 0.0)
    } else {
        let v = 2.0 * x - 2.0 * x.signum() * r;
        ConvexPolytope::interval(v, v)
    }
}

fn criterion_1() -> Outcome {
    let w = GridWindow::cube(1, -1.0, 1.0, 0.01).unwrap();
    let mut worst = 0.0f64;
    let mut bound = 0.0;
    let mut slow = Duration::ZERO;
    for n in [2u64, 5, 10] {
        let t = Instant::now();
        let s = make_family(FamilyId::PaperXN, n, &w, C1_EPS).unwrap();
        let tol = default_projection_tol(&s);
        bound = 2.0 * (C1_EPS + tol);
        // on 0 < |x| <= tol/2 + eps both ends of the gap pass the projection
        // test, and the sampled value is the hull of both
        let band = tol / 2.0 + C1_EPS;
        let xs = (-1000..=1000)
            .map(|k| k as f64 / 1000.0)
            .filter(|x| *x == 0.0 || x.abs() > band);
        for x in xs {
            let got = clarke_sq_dist(&s, &Point::p1(x), tol).unwrap();
            worst = worst.max(polytope_hausdorff(&got, &sq_dist_table(n, x)).unwrap());
        }
        slow = slow.max(t.elapsed());
    }
    outcome(
        worst <= bound && slow < C1_BUDGET,
        format!(
            "max polytope distance {worst:.3e} <= {bound:.3e}, slowest n {:.3} s < 1 s",
            slow.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let w = GridWindow::cube(1, -1.0, 1.0, 0.01).unwrap();
    let opts = HarnessOptions::default();
    let sq = verify_sq_dist_convergence(FamilyId::PaperXN, &[5, 10, 20, 40, 80], &w, C2_TOL, &opts).unwrap();
    let n: Vec<u64> = (2..=100).collect();
    let d = verify_dist_counterexample(&n, &w, C2_TOL, &opts).unwrap();
    let elapsed = t.elapsed();
    let last = sq.final_defect().unwrap();
    let series = d.max_series();
    let tail_min = series[series.len() / 2..].iter().copied().fold(f64::INFINITY, f64::min);
    outcome(
        sq.verdict == Verdict::Converges
            && last <= C2_TOL
            && d.verdict == Verdict::Diverges
            && tail_min >= C2_PERSISTENT
            && elapsed < C2_BUDGET,
        format!(
            "dist^2 {} with defect {last:.4} <= {C2_TOL} at n = 80; dist {} with tail defect >= {tail_min:.4} (need {C2_PERSISTENT})",
            sq.verdict, d.verdict
        ),
    )
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let opts = HarnessOptions {
        eps: C3_EPS,
        margin: None,
    };
    let saw = verify_lipschitz_theorem(PlFamily::Sawtooth, &[8, 16, 32, 64], 0.05, &opts).unwrap();
    let saw_last = saw.final_defect().unwrap();
    let mut growth = Vec::new();
    let mut grows = true;
    for radius in [1.0, 5.0, 10.0] {
        let r = spike_slice_report(&[10, 20, 40, 80], radius, 0.05, &opts).unwrap();
        let s: Vec<f64> = r.defect_series.iter().map(|d| d.upper_defect).collect();
        grows &= s.windows(2).all(|w| w[1] > w[0]) && *s.last().unwrap() > radius;
        growth.push(format!("R = {radius}: {:.2}", s.last().unwrap()));
    }
    let elapsed = t.elapsed();
    outcome(
        saw_last < C3_SAWTOOTH_BOUND && grows && elapsed < C3_BUDGET,
        format!(
            "sawtooth defect {saw_last:.4} < {C3_SAWTOOTH_BOUND} at n = 64; spike slice excess at n = 80 {}",
            growth.join(", ")
        ),
    )
}

fn rational(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = 0;
    for _ in 0..C4_FUNCTIONS {
        let k = rng.gen_range(2..=C4_MAX_BREAKPOINTS);
        let den = rng.gen_range(1..=1000i64);
        let mut xs: BTreeSet<i64> = BTreeSet::new();
        while xs.len() < k {
            xs.insert(rng.gen_range(-10 * den - 50..=10 * den + 50));
        }
        let xs: Vec<BigRational> = xs.into_iter().map(|x| rational(x, den)).collect();
        let ys: Vec<BigRational> = (0..k)
            .map(|_| rational(rng.gen_range(-1000..=1000), rng.gen_range(1..=97)))
            .collect();
        let f = PLFunction1D::new(xs.clone(), ys).unwrap();
        let (lo, hi) = f.domain();
        let span = hi - lo.clone();
        let mut pick = || lo.clone() + span.clone() * rational(rng.gen_range(0..=10_000), 10_000);
        let mut a = pick();
        let mut b = pick();
        while b == a {
            b = pick();
        }
        if b < a {
            std::mem::swap(&mut a, &mut b);
        }
        let mean = (f.eval(&b).unwrap() - f.eval(&a).unwrap()) / (b.clone() - a.clone());
        let ok = match f.lebourg_witness(&a, &b) {
            Ok(c) => a < c && c < b && f.subdifferential(&c).unwrap().contains(&Point::p1(mean)),
            Err(_) => false,
        };
        failures += usize::from(!ok);
    }
    outcome(
        failures == 0,
        format!("{failures} failures over {C4_FUNCTIONS} random exact functions"),
    )
}

/// Site strictly inside the circle through `t` (any orientation).
fn has_site_inside(sites: &[Point<f64>], t: [usize; 3]) -> bool {
    let (a, mut b, mut c) = (&sites[t[0]], &sites[t[1]], &sites[t[2]]);
    if f64::orient2d(a, b, c) == Ordering::Less {
        std::mem::swap(&mut b, &mut c);
    }
    sites
        .iter()
        .enumerate()
        .any(|(k, d)| !t.contains(&k) && f64::incircle(a, b, c, d) == Ordering::Greater)
}

fn in_triangle(sites: &[Point<f64>], t: &[usize; 3], y: &Point<f64>) -> bool {
    let p = [&sites[t[0]], &sites[t[1]], &sites[t[2]]];
    let s: Vec<Ordering> = (0..3).map(|i| f64::orient2d(p[i], p[(i + 1) % 3], y)).collect();
    !s.contains(&Ordering::Less) || !s.contains(&Ordering::Greater)
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut bad_triangles = 0;
    let mut bad_queries = 0;
    let mut queries = 0;
    for seed in 0..C5_SETS {
        let sites = random_sites(C5_SITES, 1000 + seed);
        let d = triangulate(&sites).unwrap();
        bad_triangles += d.triangles.iter().filter(|t| has_site_inside(&sites, **t)).count();
        if !d.verify_certificates().passed() {
            bad_triangles += 1;
        }
        let tris: BTreeSet<[usize; 3]> = d
            .triangles
            .iter()
            .map(|t| {
                let mut s = *t;
                s.sort();
                s
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0;
        while done < C5_QUERIES {
            let y = Point::p2(rng.gen::<f64>(), rng.gen::<f64>());
            if !d.triangles.iter().any(|t| in_triangle(&sites, t, &y)) {
                continue;
            }
            done += 1;
            queries += 1;
            let ok = match d.locate_empty_circle(&y) {
                Ok(c) => {
                    let mut s = c.triple;
                    s.sort();
                    let on_circle = c
                        .triple
                        .iter()
                        .all(|&i| (sites[i].dist(&c.center) - c.radius).abs() <= 1e-9 * (1.0 + c.radius));
                    tris.contains(&s)
                        && !has_site_inside(&sites, c.triple)
                        && on_circle
                        && in_triangle(&sites, &c.triple, &y)
                }
                Err(_) => false,
            };
            bad_queries += usize::from(!ok);
        }
    }
    let elapsed = t.elapsed();
    outcome(
        bad_triangles == 0 && bad_queries == 0 && elapsed < C5_BUDGET,
        format!(
            "{bad_triangles} non-empty circumdiscs over {C5_SETS} sets of {C5_SITES} sites; {bad_queries} bad certificates in {queries} queries"
        ),
    )
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    let runs: [(LevelFamily, f64, f64, &[u64]); 3] = [
        (LevelFamily::QuadraticShift, 0.01, 1e-3, &[2, 4, 8, 16, 32, 64]),
        (LevelFamily::CircleAlternating, 0.05, 0.01, &[4, 8, 16, 32]),
        (LevelFamily::CircleFixed, 0.05, 0.01, &[4, 8, 16, 32]),
    ];
    for (fam, h, eps, n) in runs {
        let w = GridWindow::cube(fam.dim(), -2.0, 2.0, h).unwrap();
        let opts = HarnessOptions { eps, margin: None };
        let r = verify_level_sets(fam, 0.0, n, &w, C6_TOL, &opts).unwrap();
        let bound = 2.0 * (eps + h) + 1.0 / *n.last().unwrap() as f64;
        let last = r.final_defect().unwrap();
        pass &= last <= bound && r.verdict == Verdict::Converges;
        parts.push(format!("{fam} {} {last:.4} <= {bound:.4}", r.verdict));
    }
    let w = GridWindow::cube(1, -2.0, 2.0, 0.01).unwrap();
    let sq = verify_level_sets(
        LevelFamily::Square,
        0.0,
        &[1, 2],
        &w,
        C6_TOL,
        &HarnessOptions::default(),
    );
    let guard = matches!(sq, Err(Error::NotRegularValue { .. }));
    parts.push(format!("square at 0 rejected: {guard}"));
    let elapsed = t.elapsed();
    outcome(pass && guard && elapsed < C6_BUDGET, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let w = GridWindow::cube(2, -1.5, 1.5, C7_H).unwrap();
    let opts = HarnessOptions {
        eps: C7_EPS,
        margin: None,
    };
    let n = [8u64, 32, 128];
    let r = verify_convex_boundary(PlanarShape::RegularPolygon, &n, &w, C7_TOL, &opts).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, n) in r.defect_series.iter().zip(n) {
        let bound = 1.0 - (std::f64::consts::PI / n as f64).cos() + 2.0 * (C7_EPS + C7_H);
        pass &= d.max() <= bound;
        parts.push(format!("n = {n}: {:.4} <= {bound:.4}", d.max()));
    }
    for shape in [
        PlanarShape::Annulus,
        PlanarShape::ShiftedDisc,
        PlanarShape::ComplementDisc,
        PlanarShape::Horned,
    ] {
        let r = verify_convex_boundary(shape, &[8, 16, 32], &w, C7_TOL, &opts).unwrap();
        let mismatch = r.metrics["boundary_mismatch"] > C7_TOL;
        let flagged = r.verdict == Verdict::Diverges || mismatch;
        pass &= flagged;
        let how = if r.verdict == Verdict::Diverges {
            "DIVERGES"
        } else if mismatch {
            "boundary-mismatch"
        } else {
            "unflagged"
        };
        parts.push(format!("{shape:?} {how}"));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    for k in 0..C8_SEQUENCES {
        let cells = rng.gen_range(1..=C8_MAX_CELLS);
        let len = rng.gen_range(1..=C8_MAX_LEN);
        let p = rng.gen_range(0.05..0.95);
        let seq = CellSetSequence::random(cells, len, p, 100 + k);
        let (idx, lim) = zarankiewicz_extract(&seq).unwrap();
        let increasing = idx.windows(2).all(|w| w[0] < w[1]) && !idx.is_empty();
        let constant = (0..cells).all(|c| {
            let first = seq.members()[idx[0]].contains(&c);
            idx.iter().all(|&i| seq.members()[i].contains(&c) == first)
        });
        let lim_ok = seq.liminf(&idx) == seq.limsup(&idx) && seq.liminf(&idx) == lim;
        failures += usize::from(!(increasing && constant && lim_ok));
    }
    outcome(
        failures == 0,
        format!("{failures} failures over {C8_SEQUENCES} random sequences"),
    )
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let w = GridWindow::cube(2, -2.0, 2.0, C9_H).unwrap();
    let series = fiber_defect_series(6, &w, C9_H).unwrap();
    let cap = w.diameter();
    let mut parts = Vec::new();
    let mut pass = true;
    for positive in [true, false] {
        let side: Vec<_> = series.iter().filter(|d| (d.c > 0.0) == positive).collect();
        let vertical = side.iter().map(|d| d.vertical).fold(f64::INFINITY, f64::min);
        let diagonal = side.iter().map(|d| d.diagonal).fold(f64::INFINITY, f64::min);
        let delta = vertical.max(diagonal);
        let bounded = side.iter().all(|d| d.max() <= cap);
        pass &= delta >= C9_DELTA_FLOOR && bounded;
        let sign = if positive { "+" } else { "-" };
        parts.push(format!(
            "c = {sign}10^-k: delta = {delta:.4} (vertical {vertical:.4}, diagonal {diagonal:.4})"
        ));
    }
    let elapsed = t.elapsed();
    outcome(
        pass && elapsed < C9_BUDGET,
        format!("{}; floor {C9_DELTA_FLOOR}", parts.join("; ")),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("subdifferential tables", criterion_1),
        ("central asymmetry", criterion_2),
        ("sawtooth and spike", criterion_3),
        ("mean-value witness", criterion_4),
        ("Delaunay certificates", criterion_5),
        ("level sets", criterion_6),
        ("convex boundaries", criterion_7),
        ("convergent subsequences", criterion_8),
        ("fiber counterexample", criterion_9),
    ];
    let mut failed = Vec::new();
    for (k, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        line(k + 1, title, &o, t.elapsed());
        if !o.pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
