//! The four subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use setconv::delaunay::{random_sites, triangulate_with, Perturbation};
use setconv::geom::Point;
use setconv::harness::{
    decide_pairs, fiber_report, is_convex_family, spike_slice_report, verify_convex_boundary,
    verify_dist_counterexample_against, verify_level_sets, verify_level_sets_c1, verify_lipschitz_theorem,
    verify_sq_dist_convergence, zarankiewicz_report, ConvergenceReport, DistLimit, HarnessOptions, LevelFamily,
    VectorFamily, Verdict,
};
use setconv::sets::{default_margin, kuratowski_defects, limit_set, make_family, FamilyId};
use setconv::subdiff::{make_pl_family, PlFamily};

use crate::settings::{usage, Format, Settings, Usage, UsageError};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SETCONV_OUT_DIR";

pub const SUITES: [&str; 10] = [
    "sq-dist",
    "dist",
    "dist-jump",
    "lipschitz",
    "spike-slice",
    "level-sets",
    "level-sets-c1",
    "convex",
    "zarankiewicz",
    "fiber",
];

/// Where a single artifact goes: `--out` (a file, or a directory to hold
/// `name`), else `$SETCONV_OUT_DIR/name`, else standard output.
fn sink(s: &Settings, name: &str) -> Option<PathBuf> {
    match s.out() {
        Some(p) if p.is_dir() => Some(p.join(name)),
        Some(p) => Some(p),
        None => std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(name)),
    }
}

/// Directory for several artifacts: `--out`, else `$SETCONV_OUT_DIR`, else
/// the working directory.
fn out_dir(s: &Settings) -> PathBuf {
    s.out()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn write_file(path: &Path, text: &str) -> Usage<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| UsageError(format!("cannot create `{}`: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| UsageError(format!("cannot write `{}`: {e}", path.display())))
}

fn emit(s: &Settings, name: &str, text: &str) -> Usage<()> {
    match sink(s, name) {
        Some(p) => {
            write_file(&p, text)?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_report(s: &Settings, r: &ConvergenceReport, stem: &str) -> Usage<()> {
    let (text, ext) = match s.format(Format::Json)? {
        Format::Json => (r.to_json() + "\n", "json"),
        Format::Csv => (r.to_csv(), "csv"),
    };
    emit(s, &format!("{stem}.{ext}"), &text)
}

fn default_h(dim: usize) -> f64 {
    if dim == 1 {
        0.01
    } else {
        0.05
    }
}

fn family<T: std::str::FromStr<Err = setconv::Error>>(s: &Settings, default: &str) -> Usage<T> {
    Ok(s.or("family", default).parse::<T>()?)
}

fn set_family(s: &Settings) -> Usage<FamilyId> {
    let name = s
        .get("family")
        .ok_or_else(|| UsageError("--family is required".into()))?;
    Ok(name.parse::<FamilyId>()?)
}

pub fn corpus(s: &Settings) -> Usage<i32> {
    if s.format(Format::Csv)? != Format::Csv {
        return usage("corpus writes CSV only");
    }
    let name = s
        .get("family")
        .ok_or_else(|| UsageError("--family is required".into()))?;
    let n_list = s.n_list("10")?;
    let mut files = Vec::new();
    if let Ok(pl) = name.parse::<PlFamily>() {
        for &n in &n_list {
            files.push((format!("{pl}-{n}.csv"), make_pl_family::<f64>(pl, n)?.to_csv()));
        }
    } else {
        let fam: FamilyId = name.parse()?;
        let window = s.window(fam.dim(), (-1.5, 1.5), default_h(fam.dim()))?;
        let eps = s.f64_or("eps", 1e-3)?;
        for &n in &n_list {
            files.push((format!("{fam}-{n}.csv"), make_family(fam, n, &window, eps)?.to_csv()));
        }
    }
    if files.len() == 1 {
        emit(s, &files[0].0, &files[0].1)?;
    } else {
        let dir = out_dir(s);
        for (name, text) in &files {
            let p = dir.join(name);
            write_file(&p, text)?;
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(0)
}

pub fn converge(s: &Settings) -> Usage<i32> {
    let fam = set_family(s)?;
    let n_list = s.n_list("5,10,20,40,80")?;
    let window = s.window(fam.dim(), (-1.5, 1.5), default_h(fam.dim()))?;
    let eps = s.f64_or("eps", 1e-3)?;
    let tol = s.f64_or("tol", 0.05)?;
    let margin = s.opt_f64("margin")?.unwrap_or(default_margin(window.h(), eps));
    let lim = limit_set(fam, &window, eps)?;
    let mut r = ConvergenceReport::new(format!("converge/{fam}"), n_list.clone(), tol);
    for &n in &n_list {
        r.defect_series
            .push(kuratowski_defects(&make_family(fam, n, &window, eps)?, &lim, margin)?);
    }
    r.verdict = decide_pairs(&n_list, &r.defect_series, tol, 2.0 * (eps + window.h()));
    r.metric("margin", margin);
    eprintln!("{}: {}", r.experiment_id, r.verdict);
    let (text, ext) = match s.format(Format::Csv)? {
        Format::Json => (r.to_json() + "\n", "json"),
        Format::Csv => (r.to_csv(), "csv"),
    };
    emit(s, &format!("converge-{fam}.{ext}"), &text)?;
    Ok(0)
}

fn parse_sites(s: &Settings) -> Usage<Vec<Point<f64>>> {
    let spec = s
        .get("sites")
        .ok_or_else(|| UsageError("--sites is required (`random:N[:seed=S]` or a CSV file of x,y rows)".into()))?;
    if let Some(rest) = spec.strip_prefix("random:") {
        let mut parts = rest.split(':');
        let n: usize = parts
            .next()
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| UsageError(format!("--sites: bad site count in `{spec}`")))?;
        let mut seed = s.u64_or("seed", 0)?;
        for p in parts {
            seed = p
                .trim()
                .strip_prefix("seed=")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| UsageError(format!("--sites: expected `seed=S`, got `{p}`")))?;
        }
        return Ok(random_sites(n, seed));
    }
    let text = fs::read_to_string(spec).map_err(|e| UsageError(format!("cannot read sites `{spec}`: {e}")))?;
    let mut sites = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let row: Vec<&str> = line.split(',').map(str::trim).collect();
        if line.trim().is_empty() {
            continue;
        }
        let xy: Option<Vec<f64>> = row.iter().map(|v| v.parse().ok()).collect();
        match xy {
            Some(v) if v.len() == 2 => sites.push(Point::p2(v[0], v[1])),
            // a header line
            None if k == 0 => {}
            _ => return usage(format!("{spec}:{}: expected `x,y`", k + 1)),
        }
    }
    Ok(sites)
}

pub fn delaunay(s: &Settings) -> Usage<i32> {
    let sites = parse_sites(s)?;
    let policy = match s.or("perturb", "reject") {
        "reject" => Perturbation::Reject,
        "symbolic" => Perturbation::Symbolic,
        p => return usage(format!("--perturb: expected `reject` or `symbolic`, got `{p}`")),
    };
    let d = triangulate_with(&sites, policy)?;
    let cert = d.verify_certificates();
    let dir = out_dir(s);
    let summary = serde_json::json!({
        "sites": d.sites.len(),
        "triangles": d.triangles.len(),
        "edges": d.edges.len(),
        "empty_circle_failures": cert.empty_circle_failures.len(),
        "edge_failures": cert.edge_failures.len(),
        "area_mismatch": cert.area_mismatch,
        "passed": cert.passed(),
    });
    for (name, text) in [
        ("edges.csv", d.edges_csv()),
        ("triangles.csv", d.triangles_csv()),
        (
            "certificate.json",
            serde_json::to_string_pretty(&summary).unwrap() + "\n",
        ),
    ] {
        write_file(&dir.join(name), &text)?;
    }
    let verdict = if cert.passed() { "PASS" } else { "FAIL" };
    println!(
        "certificate: {verdict} ({} sites, {} triangles, {} edges) -> {}",
        d.sites.len(),
        d.triangles.len(),
        d.edges.len(),
        dir.display()
    );
    Ok(if cert.passed() { 0 } else { 1 })
}

fn options(s: &Settings, eps: f64) -> Usage<HarnessOptions> {
    Ok(HarnessOptions {
        eps: s.f64_or("eps", eps)?,
        margin: s.opt_f64("margin")?,
    })
}

/// Runs one suite; returns the report and the verdict the theory predicts.
fn run_suite(suite: &str, s: &Settings) -> Usage<(ConvergenceReport, Verdict)> {
    let tol = s.f64_or("tol", 0.05)?;
    let out = match suite {
        "sq-dist" => {
            let fam: FamilyId = family(s, "paper-x-n")?;
            let w = s.window(fam.dim(), (-1.0, 1.0), default_h(fam.dim()))?;
            let r = verify_sq_dist_convergence(fam, &s.n_list("5,10,20,40,80")?, &w, tol, &options(s, 1e-3)?)?;
            (r, Verdict::Converges)
        }
        "dist" | "dist-jump" => {
            let w = s.window(1, (-1.0, 1.0), 0.01)?;
            let (limit, expected) = if suite == "dist" {
                (DistLimit::Zero, Verdict::Diverges)
            } else {
                (DistLimit::JumpAtZero, Verdict::Converges)
            };
            let r = verify_dist_counterexample_against(limit, &s.n_list("2..100")?, &w, tol, &options(s, 2e-3)?)?;
            (r, expected)
        }
        "lipschitz" => {
            let fam: PlFamily = family(s, "scaled-abs")?;
            let r = verify_lipschitz_theorem(fam, &s.n_list("8,16,32,64")?, tol, &options(s, 5e-3)?)?;
            let expected = match fam {
                PlFamily::Sawtooth | PlFamily::Spike => Verdict::Inconclusive,
                _ => Verdict::Converges,
            };
            (r, expected)
        }
        "spike-slice" => {
            let radius = s.f64_or("radius", 5.0)?;
            let r = spike_slice_report(&s.n_list("10,20,40")?, radius, tol, &options(s, 5e-3)?)?;
            (r, Verdict::Diverges)
        }
        "level-sets" => {
            let fam: LevelFamily = family(s, "quadratic-shift")?;
            let dim = fam.dim();
            let w = s.window(dim, (-2.0, 2.0), default_h(dim))?;
            let b = match s.get("level") {
                None => 0.0,
                Some(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| UsageError(format!("--level: expected a number, got `{v}`")))?,
            };
            let eps = if dim == 1 { 1e-3 } else { 0.01 };
            let r = verify_level_sets(fam, b, &s.n_list("4,8,16,32")?, &w, tol, &options(s, eps)?)?;
            (r, Verdict::Converges)
        }
        "level-sets-c1" => {
            let fam: VectorFamily = family(s, "parabola-shift")?;
            let (p, q) = fam.dims();
            let w = s.window(p, (-1.0, 1.0), if p == 1 { 0.01 } else { 0.02 })?;
            let b = s.point("level", q)?;
            let eps = if p == 1 { 1e-3 } else { 0.01 };
            let r = verify_level_sets_c1(fam, &b, &s.n_list("4,8,16,32")?, &w, tol, &options(s, eps)?)?;
            (r, Verdict::Converges)
        }
        "convex" => {
            let shape = match family::<FamilyId>(s, "regular-polygon")? {
                FamilyId::Planar(shape, _) => shape,
                f => return usage(format!("--family: `{f}` is not a planar shape family")),
            };
            let w = s.window(2, (-1.5, 1.5), 0.05)?;
            let r = verify_convex_boundary(shape, &s.n_list("8,16,32")?, &w, tol, &options(s, 0.01)?)?;
            let expected = if is_convex_family(shape) {
                Verdict::Converges
            } else {
                Verdict::Diverges
            };
            (r, expected)
        }
        "zarankiewicz" => {
            let trials = s.u64_or("trials", 200)?;
            let r = zarankiewicz_report(trials, 64, 512, s.u64_or("seed", 0)?)?;
            (r, Verdict::Converges)
        }
        "fiber" => {
            let w = s.window(2, (-2.0, 2.0), 0.05)?;
            let k = s.u64_or("k-max", 6)?;
            let r = fiber_report(k.min(u32::MAX as u64) as u32, &w, w.h(), tol)?;
            (r, Verdict::Diverges)
        }
        other => return usage(format!("unknown suite `{other}` (known: {})", SUITES.join(", "))),
    };
    Ok(out)
}

pub fn verify(s: &Settings) -> Usage<i32> {
    let suite = s
        .get("suite")
        .ok_or_else(|| UsageError(format!("--suite is required (one of {})", SUITES.join(", "))))?;
    let (report, mut expected) = run_suite(suite, s)?;
    if let Some(v) = s.get("expect") {
        expected = v.parse()?;
    }
    let stem = report.experiment_id.replace(['/', '='], "-");
    emit_report(s, &report, &stem)?;
    eprintln!("{}: {} (expected {expected})", report.experiment_id, report.verdict);
    Ok(
        if report.verdict == Verdict::Diverges && expected == Verdict::Converges {
            1
        } else {
            0
        },
    )
}
