//! Plain-text CSV form of sampled sets.
//!
//! Line 1: `dim,eps,window_lo...,window_hi...,h,spacing`; then one point per
//! line. Floats are written with 17 significant digits, so reading back
//! reproduces every value exactly.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::{Real, Scalar};

use super::{GridWindow, SampledSet};

pub(crate) fn parse_field<T: Scalar>(s: &str) -> Result<T> {
    s.trim()
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("bad number `{}`", s.trim())))
}

pub(crate) fn parse_row<T: Scalar>(line: &str) -> Result<Vec<T>> {
    line.split(',').map(parse_field).collect()
}

pub(crate) fn join_row<T: Scalar>(values: &[T]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&v.to_exact_string());
    }
    out
}

pub(crate) fn window_fields<T: Real>(w: &GridWindow<T>) -> Vec<T> {
    let mut v = w.lo().coords().to_vec();
    v.extend_from_slice(w.hi().coords());
    v.push(w.h());
    v
}

pub(crate) fn window_from_fields<T: Real>(dim: usize, f: &[T]) -> Result<GridWindow<T>> {
    if f.len() < 2 * dim + 1 {
        return Err(Error::Parse("truncated window fields".into()));
    }
    GridWindow::new(Point::new(&f[..dim])?, Point::new(&f[dim..2 * dim])?, f[2 * dim])
}

impl<T: Real> SampledSet<T> {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut head = vec![T::from_usize(self.dim()).unwrap(), self.eps()];
        head.extend(window_fields(self.window()));
        head.push(self.spacing());
        // the dimension is an integer; write it plainly
        let mut fields = head.iter().map(|v| v.to_exact_string()).collect::<Vec<_>>();
        fields[0] = self.dim().to_string();
        out.push_str(&fields.join(","));
        out.push('\n');
        for p in self.points() {
            writeln!(out, "{}", join_row(p.coords())).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or(Error::Parse("missing header".into()))?;
        let mut fields = head.split(',');
        let dim: usize = fields
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| Error::Parse("bad dimension".into()))?;
        let rest: Vec<T> = fields.map(parse_field).collect::<Result<_>>()?;
        if rest.is_empty() {
            return Err(Error::Parse("missing eps".into()));
        }
        let eps = rest[0];
        let window = window_from_fields(dim, &rest[1..])?;
        let spacing = rest.get(2 * dim + 2).copied().unwrap_or(eps);
        let points = lines
            .map(|l| {
                let row: Vec<T> = parse_row(l)?;
                if row.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: row.len(),
                    });
                }
                Point::new(&row)
            })
            .collect::<Result<Vec<_>>>()?;
        SampledSet::with_spacing(points, eps, spacing, window)
    }
}
