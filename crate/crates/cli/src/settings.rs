//! Flat key=value settings: flags override the config file, which overrides
//! the built-in defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use setconv::geom::Point;
use setconv::sets::GridWindow;

/// A usage error; the process exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<setconv::Error> for UsageError {
    fn from(e: setconv::Error) -> Self {
        UsageError(e.to_string())
    }
}

pub type Usage<T> = std::result::Result<T, UsageError>;

pub fn usage<T>(msg: impl Into<String>) -> Usage<T> {
    Err(UsageError(msg.into()))
}

pub const KEYS: [&str; 18] = [
    "family", "n", "window", "h", "eps", "tol", "margin", "out", "format", "seed", "suite", "sites", "level", "radius",
    "expect", "perturb", "trials", "k-max",
];

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parses a config file: one `key = value` per line, `#` starts a
    /// comment.
    pub fn from_config(path: &Path) -> Usage<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config `{}`: {e}", path.display())))?;
        let mut s = Settings::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return usage(format!("{}:{}: expected `key = value`", path.display(), k + 1));
            };
            s.set(key, value.trim())
                .map_err(|e| UsageError(format!("{}:{}: {e}", path.display(), k + 1)))?;
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Usage<()> {
        let key = normalize(key);
        if !KEYS.contains(&key.as_str()) {
            return usage(format!("unknown setting `{key}` (known: {})", KEYS.join(", ")));
        }
        self.values.insert(key, value.to_string());
        Ok(())
    }

    /// `self` with every entry of `over` taking precedence.
    pub fn overlay(mut self, over: &Settings) -> Self {
        for (k, v) in &over.values {
            self.values.insert(k.clone(), v.clone());
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Usage<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => parse_positive(key, v),
        }
    }

    pub fn opt_f64(&self, key: &str) -> Usage<Option<f64>> {
        self.get(key).map(|v| parse_positive(key, v)).transpose()
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Usage<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| UsageError(format!("--{key}: expected a non-negative integer, got `{v}`"))),
        }
    }

    pub fn n_list(&self, default: &str) -> Usage<Vec<u64>> {
        parse_n_list(self.or("n", default))
    }

    pub fn format(&self, default: Format) -> Usage<Format> {
        match self.get("format").map(|s| s.trim().to_ascii_lowercase()) {
            None => Ok(default),
            Some(s) if s == "csv" => Ok(Format::Csv),
            Some(s) if s == "json" => Ok(Format::Json),
            Some(s) => usage(format!("--format: expected `csv` or `json`, got `{s}`")),
        }
    }

    /// The window as a cube of dimension `dim`; `--window` is `lo,hi` or
    /// `lo,hi,h`, and `--h` overrides the step.
    pub fn window(&self, dim: usize, default: (f64, f64), default_h: f64) -> Usage<GridWindow<f64>> {
        let (mut lo, mut hi, mut h) = (default.0, default.1, default_h);
        if let Some(spec) = self.get("window") {
            let v = parse_floats("window", spec)?;
            match v.len() {
                2 => (lo, hi) = (v[0], v[1]),
                3 => (lo, hi, h) = (v[0], v[1], v[2]),
                _ => return usage(format!("--window: expected `lo,hi` or `lo,hi,h`, got `{spec}`")),
            }
        }
        if let Some(v) = self.get("h") {
            h = parse_positive("h", v)?;
        }
        if !(lo < hi) {
            return usage(format!("--window: need lo < hi, got {lo},{hi}"));
        }
        if !(h > 0.0) || !h.is_finite() {
            return usage(format!("--h: the grid step must be positive, got {h}"));
        }
        Ok(GridWindow::cube(dim, lo, hi, h)?)
    }

    pub fn point(&self, key: &str, dim: usize) -> Usage<Point<f64>> {
        let v = match self.get(key) {
            None => vec![0.0; dim],
            Some(spec) => parse_floats(key, spec)?,
        };
        if v.len() != dim {
            return usage(format!(
                "--{key}: expected {dim} comma-separated values, got {}",
                v.len()
            ));
        }
        Ok(Point::new(&v)?)
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.get("out").map(PathBuf::from)
    }
}

fn parse_floats(key: &str, spec: &str) -> Usage<Vec<f64>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| UsageError(format!("--{key}: bad number `{}` in `{spec}`", s.trim())))
        })
        .collect()
}

fn parse_positive(key: &str, v: &str) -> Usage<f64> {
    match v.trim().parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => usage(format!("--{key}: expected a positive number, got `{v}`")),
    }
}

/// `5,10,20` or an inclusive range `2..100`; the result must be nonempty,
/// strictly increasing and start at 1 or above.
pub fn parse_n_list(spec: &str) -> Usage<Vec<u64>> {
    let bad = || {
        UsageError(format!(
            "--n: expected a list like `5,10,20` or a range like `2..100`, got `{spec}`"
        ))
    };
    let list: Vec<u64> = if let Some((a, b)) = spec.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Usage<_>>()?
    };
    if list.is_empty() {
        return usage("--n: the list is empty");
    }
    if list[0] == 0 {
        return usage("--n: family indices start at 1");
    }
    if list.windows(2).any(|w| w[0] >= w[1]) {
        return usage(format!("--n: indices must be strictly increasing, got `{spec}`"));
    }
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("5, 10,20").unwrap(), vec![5, 10, 20]);
        assert_eq!(parse_n_list("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert!(parse_n_list("10,5").is_err());
        assert!(parse_n_list("0,1").is_err());
        assert!(parse_n_list("a").is_err());
        assert!(parse_n_list("5..2").is_err());
    }

    #[test]
    fn precedence_and_windows() {
        let mut file = Settings::default();
        file.set("eps", "0.01").unwrap();
        file.set("window", "-2,2").unwrap();
        let mut flags = Settings::default();
        flags.set("eps", "0.002").unwrap();
        let s = file.overlay(&flags);
        assert_eq!(s.f64_or("eps", 1e-3).unwrap(), 0.002);
        assert_eq!(s.f64_or("tol", 0.05).unwrap(), 0.05);
        let w = s.window(2, (-1.0, 1.0), 0.05).unwrap();
        assert_eq!((w.lo().coord(1), w.hi().coord(0), w.h()), (-2.0, 2.0, 0.05));
        assert!(Settings::default().set("colour", "red").is_err());
        let mut bad = Settings::default();
        bad.set("window", "1,-1").unwrap();
        assert!(bad.window(1, (-1.0, 1.0), 0.1).is_err());
        bad.set("window", "-1,x").unwrap();
        assert!(bad.window(1, (-1.0, 1.0), 0.1).is_err());
    }
}
