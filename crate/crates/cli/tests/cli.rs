use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use setconv::harness::{ConvergenceReport, Verdict};
use setconv::sets::{make_family, FamilyId, GridWindow};
use setconv::subdiff::PLFunction1D;
use setconv::SampledSet;

fn setconv(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_setconv"));
    cmd.args(args).env_remove("SETCONV_OUT_DIR");
    if let Some(d) = out_dir {
        cmd.env("SETCONV_OUT_DIR", d);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sq_dist_suite_converges() {
    let o = setconv(
        &[
            "verify",
            "--suite",
            "sq-dist",
            "--family",
            "paper-x-n",
            "--n",
            "5,10,20,40,80",
            "--tol",
            "0.05",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = ConvergenceReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.verdict, Verdict::Converges);
    assert_eq!(r.indices, vec![5, 10, 20, 40, 80]);
}

#[test]
fn annulus_corpus_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = setconv(
        &[
            "corpus", "--family", "annulus", "--n", "10", "--window", "-1.5,1.5", "--eps", "1e-3",
        ],
        Some(dir.path()),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("annulus-10.csv")).unwrap();
    let s = SampledSet::from_csv(&text).unwrap();
    assert_eq!(s.to_csv(), text);
    let w = GridWindow::cube(2, -1.5, 1.5, 0.05).unwrap();
    let direct = make_family(
        FamilyId::Planar(setconv::sets::PlanarShape::Annulus, setconv::sets::SetPart::Set),
        10,
        &w,
        1e-3,
    )
    .unwrap();
    assert_eq!(direct.points(), s.points());
}

#[test]
fn delaunay_certificate_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = setconv(&["delaunay", "--sites", "random:200:seed=7"], Some(dir.path()));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("certificate: PASS"));
    let cert: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["passed"], true);
    assert_eq!(cert["sites"], 200);
    let edges = fs::read_to_string(dir.path().join("edges.csv")).unwrap();
    assert!(edges.starts_with("i,j,xi,yi,xj,yj,locally_delaunay,cocircular\n"));
    assert_eq!(edges.lines().count() as u64, cert["edges"].as_u64().unwrap() + 1);
    let tris = fs::read_to_string(dir.path().join("triangles.csv")).unwrap();
    assert_eq!(tris.lines().count() as u64, cert["triangles"].as_u64().unwrap() + 1);
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        let o = setconv(&["delaunay", "--sites", "random:50", "--seed", "3"], Some(d));
        assert_eq!(o.status.code(), Some(0));
        let o = setconv(
            &[
                "converge",
                "--family",
                "two-point-merge",
                "--n",
                "2,4,8",
                "--window",
                "-1,1,0.05",
            ],
            Some(d),
        );
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in [
        "edges.csv",
        "triangles.csv",
        "certificate.json",
        "converge-two-point-merge.csv",
    ] {
        let x = fs::read(a.path().join(name)).unwrap();
        assert_eq!(x, fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn pl_corpus_and_multiple_members() {
    let dir = tempfile::tempdir().unwrap();
    let o = setconv(
        &[
            "corpus",
            "--family",
            "sawtooth",
            "--n",
            "4,8",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for n in [4, 8] {
        let text = fs::read_to_string(dir.path().join(format!("sawtooth-{n}.csv"))).unwrap();
        let f = PLFunction1D::<f64>::from_csv(&text).unwrap();
        assert_eq!(f.to_csv(), text);
        assert_eq!(f.lipschitz(), 1.0);
    }
}

#[test]
fn report_csv_and_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let base = [
        "verify",
        "--suite",
        "lipschitz",
        "--family",
        "scaled-abs",
        "--n",
        "16,32,64",
    ];
    let o = setconv(&[&base[..], &["--out", json.to_str().unwrap()]].concat(), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = setconv(
        &[&base[..], &["--out", csv.to_str().unwrap(), "--format", "csv"]].concat(),
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let r = ConvergenceReport::from_json(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(r.to_json() + "\n", fs::read_to_string(&json).unwrap());
    assert_eq!(r.to_csv(), fs::read_to_string(&csv).unwrap());
    assert_eq!(r.verdict, Verdict::Converges);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# counterexample\nsuite = dist\nn = 2..20\neps = 0.002\ntol = 0.05\n",
    )
    .unwrap();
    let o = setconv(&["verify", "--config", cfg.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = ConvergenceReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.indices, (2..=20).collect::<Vec<_>>());
    assert_eq!(r.verdict, Verdict::Diverges);
    // the flag wins over the file
    let o = setconv(&["verify", "--config", cfg.to_str().unwrap(), "--n", "2..10"], None);
    let r = ConvergenceReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.indices, (2..=10).collect::<Vec<_>>());
}

#[test]
fn diverging_where_convergence_expected_exits_one() {
    let o = setconv(
        &["verify", "--suite", "dist", "--n", "2..20", "--expect", "converges"],
        None,
    );
    assert_eq!(o.status.code(), Some(1));
    let o = setconv(&["verify", "--suite", "dist-jump", "--n", "2..40"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        ConvergenceReport::from_json(&stdout(&o)).unwrap().verdict,
        Verdict::Converges
    );
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 7] = [
        &["verify", "--suite", "sq-dist", "--family", "no-such-family"],
        &["corpus", "--family", "annulus", "--window", "1.5,-1.5"],
        &["corpus", "--family", "annulus", "--window", "-1.5"],
        &["verify", "--suite", "nope"],
        &["converge", "--family", "unit-circle", "--n", "10,5"],
        &["delaunay", "--sites", "random:x"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = setconv(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = setconv(
        &["verify", "--suite", "level-sets", "--family", "square", "--level", "0"],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("regular"));
}

#[test]
fn suites_report_their_expected_verdicts() {
    let runs: [(&[&str], Verdict); 4] = [
        (
            &["verify", "--suite", "zarankiewicz", "--trials", "10"],
            Verdict::Converges,
        ),
        (
            &["verify", "--suite", "fiber", "--k-max", "3", "--window", "-1,1,0.05"],
            Verdict::Diverges,
        ),
        (
            &["verify", "--suite", "level-sets", "--n", "2,4,8,16,32,64"],
            Verdict::Converges,
        ),
        (
            &["verify", "--suite", "spike-slice", "--radius", "5"],
            Verdict::Diverges,
        ),
    ];
    for (args, v) in runs {
        let o = setconv(args, None);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert_eq!(
            ConvergenceReport::from_json(&stdout(&o)).unwrap().verdict,
            v,
            "{args:?}"
        );
    }
}
