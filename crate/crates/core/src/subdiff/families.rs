//! Corpus families of piecewise-linear functions on `[-1, 1]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::PLFunction1D;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlFamily {
    /// Teeth `|x - 2k/n|` of height `1/n`, aligned with a tooth tip at 0.
    Sawtooth,
    /// `n|x|` on `[-1/n, 1/n]`, constant 1 outside.
    Spike,
    /// `(1 - 1/n)|x|`.
    ScaledAbs,
    /// One tooth `min(|x|, 2/n - |x|)` on `[-2/n, 2/n]`, zero outside.
    ToothAtZero,
    /// `|x|` for every `n`.
    Constant,
    /// `x/n`.
    ShrinkingSlope,
}

const NAMES: [(PlFamily, &str); 6] = [
    (PlFamily::Sawtooth, "sawtooth"),
    (PlFamily::Spike, "spike"),
    (PlFamily::ScaledAbs, "scaled-abs"),
    (PlFamily::ToothAtZero, "tooth-at-zero"),
    (PlFamily::Constant, "constant"),
    (PlFamily::ShrinkingSlope, "shrinking-slope"),
];

impl PlFamily {
    pub fn all() -> Vec<PlFamily> {
        NAMES.iter().map(|(f, _)| *f).collect()
    }
}

impl fmt::Display for PlFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(NAMES.iter().find(|(id, _)| id == self).unwrap().1)
    }
}

impl FromStr for PlFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        NAMES
            .iter()
            .find(|(_, n)| *n == key)
            .map(|(f, _)| *f)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

fn int<T: Scalar>(k: i64) -> T {
    T::from_i64(k).unwrap()
}

/// The `n`-th member of `family` on `[-1, 1]`, exact in `T`.
pub fn make_pl_family<T: Scalar>(family: PlFamily, n: u64) -> Result<PLFunction1D<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("family index n must be >= 1".into()));
    }
    let ni = n as i64;
    let nt: T = int(ni);
    let one = T::one();
    let zero = T::zero();
    match family {
        PlFamily::Sawtooth => {
            let xs: Vec<T> = (-ni..=ni).map(|j| int::<T>(j) / nt.clone()).collect();
            let ys = (-ni..=ni)
                .map(|j| {
                    if j % 2 == 0 {
                        zero.clone()
                    } else {
                        one.clone() / nt.clone()
                    }
                })
                .collect();
            PLFunction1D::new(xs, ys)
        }
        PlFamily::Spike => {
            if n == 1 {
                return PLFunction1D::new(
                    vec![-one.clone(), zero.clone(), one.clone()],
                    vec![one.clone(), zero, one],
                );
            }
            let r = one.clone() / nt;
            PLFunction1D::new(
                vec![-one.clone(), -r.clone(), zero.clone(), r, one.clone()],
                vec![one.clone(), one.clone(), zero, one.clone(), one],
            )
        }
        PlFamily::ScaledAbs => {
            let c = one.clone() - one.clone() / nt;
            PLFunction1D::new(vec![-one.clone(), zero.clone(), one], vec![c.clone(), zero, c])
        }
        PlFamily::ToothAtZero => {
            if n < 3 {
                return Err(Error::InvalidParameter("the tooth family needs n >= 3".into()));
            }
            let r = one.clone() / nt;
            let r2 = r.clone() + r.clone();
            PLFunction1D::new(
                vec![-one.clone(), -r2.clone(), -r.clone(), zero.clone(), r.clone(), r2, one],
                vec![
                    zero.clone(),
                    zero.clone(),
                    r.clone(),
                    zero.clone(),
                    r,
                    zero.clone(),
                    zero,
                ],
            )
        }
        PlFamily::Constant => PLFunction1D::new(
            vec![-one.clone(), zero.clone(), one.clone()],
            vec![one.clone(), zero, one],
        ),
        PlFamily::ShrinkingSlope => {
            let s = one.clone() / nt;
            PLFunction1D::new(vec![-one.clone(), one], vec![-s.clone(), s])
        }
    }
}
