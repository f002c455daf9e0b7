//! Scalar abstractions.
//!
//! [`Scalar`] is the minimal ordered field the exact parts of the toolkit need
//! (piecewise-linear calculus, hull construction, orientation and in-circle
//! predicates). It is implemented for `f32`, `f64` and [`BigRational`].
//! [`Real`] adds the floating-point operations (square roots, distances) used
//! by sampled sets, projections and circumcircles.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive, Zero};
use robust::Coord;

use crate::geom::Point;

/// An ordered field with exact geometric predicates.
pub trait Scalar:
    Clone
    + PartialOrd
    + Debug
    + Display
    + FromStr
    + Num
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// `false` for NaN and infinities.
    fn is_finite_value(&self) -> bool;

    /// Sign of the orientation determinant of the planar triple `(a, b, c)`.
    ///
    /// `Greater` when the triple turns counterclockwise, `Equal` when collinear.
    /// Only the first two coordinates are read.
    fn orient2d(a: &Point<Self>, b: &Point<Self>, c: &Point<Self>) -> Ordering;

    /// `Greater` when `d` lies strictly inside the circle through the
    /// counterclockwise triple `a, b, c`, `Equal` when the four are co-circular.
    fn incircle(a: &Point<Self>, b: &Point<Self>, c: &Point<Self>, d: &Point<Self>) -> Ordering;

    /// Lossless text form (17 significant digits for floats, `p/q` for rationals).
    fn to_exact_string(&self) -> String;

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if b < a {
            b.clone()
        } else {
            a.clone()
        }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if b > a {
            b.clone()
        } else {
            a.clone()
        }
    }
}

/// Floating-point scalars.
pub trait Real: Scalar + Float + Copy {
    /// Converts a literal; panics only for values unrepresentable in `Self`.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable")
    }
}

fn sign_of(x: f64) -> Ordering {
    x.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }

            fn orient2d(a: &Point<Self>, b: &Point<Self>, c: &Point<Self>) -> Ordering {
                // f32 -> f64 is exact, so the adaptive predicate stays exact.
                let [a, b, c] = [a, b, c].map(|p| Coord {
                    x: p.coord(0) as f64,
                    y: p.coord(1) as f64,
                });
                sign_of(robust::orient2d(a, b, c))
            }

            fn incircle(a: &Point<Self>, b: &Point<Self>, c: &Point<Self>, d: &Point<Self>) -> Ordering {
                let [a, b, c, d] = [a, b, c, d].map(|p| Coord {
                    x: p.coord(0) as f64,
                    y: p.coord(1) as f64,
                });
                sign_of(robust::incircle(a, b, c, d))
            }

            fn to_exact_string(&self) -> String {
                format!("{:.16e}", self)
            }
        }

        impl Real for $t {}
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    fn is_finite_value(&self) -> bool {
        true
    }

    fn orient2d(a: &Point<Self>, b: &Point<Self>, c: &Point<Self>) -> Ordering {
        let abx = b.coord(0) - a.coord(0);
        let aby = b.coord(1) - a.coord(1);
        let acx = c.coord(0) - a.coord(0);
        let acy = c.coord(1) - a.coord(1);
        (abx * acy - aby * acx).cmp(&BigRational::zero())
    }

    fn incircle(a: &Point<Self>, b: &Point<Self>, c: &Point<Self>, d: &Point<Self>) -> Ordering {
        let rel = |p: &Point<Self>| (p.coord(0) - d.coord(0), p.coord(1) - d.coord(1));
        let (adx, ady) = rel(a);
        let (bdx, bdy) = rel(b);
        let (cdx, cdy) = rel(c);
        let alift = &adx * &adx + &ady * &ady;
        let blift = &bdx * &bdx + &bdy * &bdy;
        let clift = &cdx * &cdx + &cdy * &cdy;
        let det = alift * (&bdx * &cdy - &cdx * &bdy)
            + blift * (&cdx * &ady - &adx * &cdy)
            + clift * (&adx * &bdy - &bdx * &ady);
        det.cmp(&BigRational::zero())
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

/// Exact conversion of a finite float into a rational.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}
