use proptest::prelude::*;
use setconv::geom::Point;
use setconv::multifun::{graphical_defects, subdiff_graph_of_pl_in};
use setconv::sets::{kuratowski_defects, GridWindow};
use setconv::subdiff::PLFunction1D;
use setconv::MultifunctionGraph;

fn pl() -> impl Strategy<Value = PLFunction1D<f64>> {
    (
        prop::collection::btree_set(-15i64..16, 0..8),
        prop::collection::vec(-8i64..8, 18),
    )
        .prop_map(|(inner, vals)| {
            let mut xs = vec![-1.0];
            xs.extend(inner.into_iter().map(|k| k as f64 / 16.0));
            xs.push(1.0);
            let ys = (0..xs.len()).map(|i| vals[i] as f64 / 16.0).collect();
            PLFunction1D::new(xs, ys).unwrap()
        })
}

fn pairs(max: usize) -> impl Strategy<Value = Vec<(Point<f64>, Point<f64>)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..max)
        .prop_map(|v| v.into_iter().map(|(x, y)| (Point::p1(x), Point::p1(y))).collect())
}

fn graph(p: Vec<(Point<f64>, Point<f64>)>) -> MultifunctionGraph {
    MultifunctionGraph::from_pairs(&p, 1e-3, GridWindow::cube(2, -1.0, 1.0, 0.05).unwrap()).unwrap()
}

const BAND: (f64, f64) = (-10.0, 10.0);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn graphical_equals_kuratowski(a in pairs(40), b in pairs(40)) {
        let (ga, gb) = (graph(a), graph(b));
        let g = graphical_defects(&ga, &gb, 0.1);
        let k = kuratowski_defects(ga.as_set(), gb.as_set(), 0.1);
        prop_assert_eq!(g, k);
    }

    #[test]
    fn a_graph_is_close_to_itself(f in pl()) {
        let eps = 5e-3;
        let g = subdiff_graph_of_pl_in(&f, eps, BAND).unwrap();
        let d = graphical_defects(&g, &g, 2.0 * eps).unwrap();
        prop_assert!(d.lower_defect <= 2.0 * eps && d.upper_defect <= 2.0 * eps);
    }

    #[test]
    fn slices_near_breakpoints_sit_in_the_breakpoint_slice(f in pl(), k in 0usize..8) {
        let eps = 5e-3;
        let g = subdiff_graph_of_pl_in(&f, eps, BAND).unwrap();
        let inner = &f.breakpoints()[1..f.breakpoints().len() - 1];
        prop_assume!(!inner.is_empty());
        let x = inner[k % inner.len()];
        let at = f.subdifferential(&x).unwrap();
        for d in [1e-2, 1e-3] {
            for y in [x - d, x + d] {
                for v in g.slice(&Point::p1(y), eps / 2.0).unwrap() {
                    prop_assert!(at.distance_to(&v) <= 1e-12, "slice at {} holds {:?} outside {:?}", y, v, at);
                }
            }
        }
    }

    #[test]
    fn graph_csv_round_trip(f in pl()) {
        let g = subdiff_graph_of_pl_in(&f, 1.0 / 7.0, (-0.5, 0.5)).unwrap();
        let back = MultifunctionGraph::from_csv(&g.to_csv()).unwrap();
        prop_assert_eq!(back.to_csv(), g.to_csv());
        prop_assert_eq!(back.truncated(), g.truncated());
        prop_assert_eq!(back.pairs(), g.pairs());
    }
}
