//! `setconv`: corpus generation, convergence measurements, Delaunay exports
//! and the theorem suites.
//!
//! Exit status: 0 on success, 1 when a suite that should converge
//! diverges (or a Delaunay certificate fails), 2 on usage errors.

mod run;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use settings::{Settings, Usage};

#[derive(Parser)]
#[command(name = "setconv", version, about = "Set convergence experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write sampled family members (sets or piecewise-linear functions) as CSV.
    Corpus(Flags),
    /// Kuratowski defects of a set family against its limit.
    Converge(Flags),
    /// Triangulate sites and write edges, triangles and the certificate verdict.
    Delaunay(Flags),
    /// Run a theorem suite and write its report.
    Verify(Flags),
}

#[derive(clap::Args)]
struct Flags {
    /// Flat `key = value` file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    /// Index list `5,10,20` or inclusive range `2..100`.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// `lo,hi` or `lo,hi,h`, applied to every axis.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Grid step.
    #[arg(long)]
    h: Option<String>,
    /// Sampling fidelity.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Window shrink for the defects.
    #[arg(long)]
    margin: Option<String>,
    /// Output file or directory; defaults to $SETCONV_OUT_DIR, then stdout.
    #[arg(long)]
    out: Option<String>,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Suite for `verify`.
    #[arg(long)]
    suite: Option<String>,
    /// `random:N[:seed=S]` or a CSV file of `x,y` rows.
    #[arg(long)]
    sites: Option<String>,
    /// Level value `b` (comma-separated for vector families).
    #[arg(long, allow_hyphen_values = true)]
    level: Option<String>,
    /// Band radius for `spike-slice`.
    #[arg(long)]
    radius: Option<String>,
    /// Expected verdict, overriding the suite's own.
    #[arg(long)]
    expect: Option<String>,
    /// `reject` or `symbolic`.
    #[arg(long)]
    perturb: Option<String>,
    /// Random sequences for `zarankiewicz`.
    #[arg(long)]
    trials: Option<String>,
    /// Largest exponent for `fiber`.
    #[arg(long = "k-max")]
    k_max: Option<String>,
}

impl Flags {
    fn settings(&self) -> Usage<Settings> {
        let mut flags = Settings::default();
        let pairs = [
            ("family", &self.family),
            ("n", &self.n),
            ("window", &self.window),
            ("h", &self.h),
            ("eps", &self.eps),
            ("tol", &self.tol),
            ("margin", &self.margin),
            ("out", &self.out),
            ("format", &self.format),
            ("seed", &self.seed),
            ("suite", &self.suite),
            ("sites", &self.sites),
            ("level", &self.level),
            ("radius", &self.radius),
            ("expect", &self.expect),
            ("perturb", &self.perturb),
            ("trials", &self.trials),
            ("k-max", &self.k_max),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                flags.set(k, v)?;
            }
        }
        let base = match &self.config {
            Some(p) => Settings::from_config(p)?,
            None => Settings::default(),
        };
        Ok(base.overlay(&flags))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Corpus(f) => f.settings().and_then(|s| run::corpus(&s)),
        Command::Converge(f) => f.settings().and_then(|s| run::converge(&s)),
        Command::Delaunay(f) => f.settings().and_then(|s| run::delaunay(&s)),
        Command::Verify(f) => f.settings().and_then(|s| run::verify(&s)),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
