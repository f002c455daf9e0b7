use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::ConvexPolytope;
use crate::scalar::Scalar;
use crate::sets::io::{join_row, parse_row};

/// Continuous piecewise-linear function on `[x_0, x_m]`, given by its values
/// at strictly increasing breakpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct PLFunction1D<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

fn two<T: Scalar>() -> T {
    T::one() + T::one()
}

impl<T: Scalar> PLFunction1D<T> {
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidPiecewiseLinear(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPiecewiseLinear("need at least two breakpoints".into()));
        }
        if breakpoints.iter().chain(&values).any(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite);
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPiecewiseLinear(
                "breakpoints must increase strictly".into(),
            ));
        }
        Ok(PLFunction1D { breakpoints, values })
    }

    /// Samples `g` at the given breakpoints.
    pub fn from_fn(breakpoints: Vec<T>, g: impl Fn(&T) -> T) -> Result<Self> {
        let values = breakpoints.iter().map(g).collect();
        Self::new(breakpoints, values)
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn domain(&self) -> (T, T) {
        (self.breakpoints[0].clone(), self.breakpoints.last().unwrap().clone())
    }

    pub fn in_domain(&self, x: &T) -> bool {
        let (lo, hi) = self.domain();
        lo <= *x && *x <= hi
    }

    fn check_domain(&self, x: &T) -> Result<()> {
        if self.in_domain(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain(x.to_string()))
        }
    }

    /// Index `i` of the segment `[x_i, x_{i+1}]` holding `x`, the left one at
    /// a breakpoint (the first at `x_0`).
    fn segment_of(&self, x: &T) -> usize {
        let k = self.breakpoints.partition_point(|b| b < x);
        k.saturating_sub(1).min(self.breakpoints.len() - 2)
    }

    /// `Some(i)` when `x` is the breakpoint `x_i`.
    fn breakpoint_index(&self, x: &T) -> Option<usize> {
        let k = self.breakpoints.partition_point(|b| b < x);
        (k < self.breakpoints.len() && self.breakpoints[k] == *x).then_some(k)
    }

    pub fn slope(&self, i: usize) -> T {
        let (x0, x1) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
        (self.values[i + 1].clone() - self.values[i].clone()) / (x1.clone() - x0.clone())
    }

    pub fn slopes(&self) -> Vec<T> {
        (0..self.breakpoints.len() - 1).map(|i| self.slope(i)).collect()
    }

    /// `max |s_i|`.
    pub fn lipschitz(&self) -> T {
        self.slopes()
            .iter()
            .fold(T::zero(), |m, s| T::max_of(&m, &s.abs_value()))
    }

    pub fn eval(&self, x: &T) -> Result<T> {
        self.check_domain(x)?;
        let i = self.segment_of(x);
        let t = x.clone() - self.breakpoints[i].clone();
        Ok(self.values[i].clone() + self.slope(i) * t)
    }

    /// Clarke subdifferential at `x`: the interval of the one-sided slopes at
    /// an interior breakpoint, the segment slope elsewhere.
    pub fn subdifferential(&self, x: &T) -> Result<ConvexPolytope<T>> {
        self.check_domain(x)?;
        let last = self.breakpoints.len() - 1;
        match self.breakpoint_index(x) {
            Some(0) => {
                let s = self.slope(0);
                Ok(ConvexPolytope::interval(s.clone(), s))
            }
            Some(i) if i == last => {
                let s = self.slope(last - 1);
                Ok(ConvexPolytope::interval(s.clone(), s))
            }
            Some(i) => Ok(ConvexPolytope::interval(self.slope(i - 1), self.slope(i))),
            None => {
                let s = self.slope(self.segment_of(x));
                Ok(ConvexPolytope::interval(s.clone(), s))
            }
        }
    }

    /// `t * f`.
    pub fn scale(&self, t: &T) -> Self {
        PLFunction1D {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v.clone() * t.clone()).collect(),
        }
    }

    fn same_domain(&self, other: &Self) -> Result<()> {
        if self.domain() != other.domain() {
            return Err(Error::InvalidPiecewiseLinear("functions have different domains".into()));
        }
        Ok(())
    }

    /// Union of both breakpoint sets.
    fn merged_breakpoints(&self, other: &Self) -> Vec<T> {
        let mut xs: Vec<T> = self.breakpoints.iter().chain(&other.breakpoints).cloned().collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        xs
    }

    /// `f + g` on the common refinement; the domains must agree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_domain(other)?;
        let xs = self.merged_breakpoints(other);
        let values = xs
            .iter()
            .map(|x| Ok(self.eval(x)? + other.eval(x)?))
            .collect::<Result<Vec<T>>>()?;
        Self::new(xs, values)
    }

    /// `sup |f - g|`, attained at a breakpoint of one of them.
    pub fn sup_distance(&self, other: &Self) -> Result<T> {
        self.same_domain(other)?;
        let mut best = T::zero();
        for x in self.merged_breakpoints(other) {
            let d = (self.eval(&x)? - other.eval(&x)?).abs_value();
            best = T::max_of(&best, &d);
        }
        Ok(best)
    }

    /// Leftmost `c in (a, b)` whose subdifferential holds the mean slope,
    /// the first admissible piece's midpoint when that piece is linear with the
    /// mean slope. Membership is exact.
    pub fn lebourg_witness(&self, a: &T, b: &T) -> Result<T> {
        self.lebourg_witness_tol(a, b, &T::zero())
    }

    /// [`Self::lebourg_witness`] with slope membership up to `tol`, for
    /// floating-point data.
    pub fn lebourg_witness_tol(&self, a: &T, b: &T, tol: &T) -> Result<T> {
        self.check_domain(a)?;
        self.check_domain(b)?;
        if !(a < b) {
            return Err(Error::InvalidParameter("mean-value witness needs a < b".into()));
        }
        let mean = (self.eval(b)? - self.eval(a)?) / (b.clone() - a.clone());
        let lo = mean.clone() - tol.clone();
        let hi = mean.clone() + tol.clone();
        let hits = |lo_s: &T, hi_s: &T| !(*hi_s < lo) && !(hi < *lo_s);

        let mut cuts = vec![a.clone()];
        cuts.extend(self.breakpoints.iter().filter(|x| a < *x && *x < b).cloned());
        cuts.push(b.clone());
        for k in 0..cuts.len() - 1 {
            let (p, q) = (&cuts[k], &cuts[k + 1]);
            let s = self.slope(self.segment_of(&((p.clone() + q.clone()) / two())));
            if hits(&s, &s) {
                return Ok((p.clone() + q.clone()) / two());
            }
            if k + 2 < cuts.len() {
                let d = self.subdifferential(q)?;
                let (s0, s1) = d.bounds().unwrap();
                if hits(&s0, &s1) {
                    return Ok(q.clone());
                }
            }
        }
        Err(Error::NoWitness {
            a: a.to_string(),
            b: b.to_string(),
        })
    }

    /// Rows `breakpoint,value` under that header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("breakpoint,value\n");
        for (x, y) in self.breakpoints.iter().zip(&self.values) {
            writeln!(out, "{}", join_row(&[x.clone(), y.clone()])).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or(Error::Parse("missing header".into()))?;
        if head.trim() != "breakpoint,value" {
            return Err(Error::Parse(format!("unexpected header `{}`", head.trim())));
        }
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for l in lines {
            let row: Vec<T> = parse_row(l)?;
            if row.len() != 2 {
                return Err(Error::Parse(format!("expected 2 fields, found {}", row.len())));
            }
            let mut it = row.into_iter();
            xs.push(it.next().unwrap());
            ys.push(it.next().unwrap());
        }
        Self::new(xs, ys)
    }
}

/// Free-function form of [`PLFunction1D::subdifferential`].
pub fn pl_subdifferential<T: Scalar>(f: &PLFunction1D<T>, x: &T) -> Result<ConvexPolytope<T>> {
    f.subdifferential(x)
}

/// Free-function form of [`PLFunction1D::lebourg_witness`].
pub fn lebourg_witness<T: Scalar>(f: &PLFunction1D<T>, a: &T, b: &T) -> Result<T> {
    f.lebourg_witness(a, b)
}
