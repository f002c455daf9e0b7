use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Largest ambient dimension a [`Point`] can carry.
///
/// Sets live in dimension at most 3; graph samples of planar multifunctions
/// live in the product space of dimension 4.
pub const MAX_DIM: usize = 4;

/// A point of `R^p`, `1 <= p <= MAX_DIM`, with finite coordinates.
///
/// Also used for linear functionals on `R^p` through the Euclidean inner product.
#[derive(Clone, Copy, PartialEq)]
pub struct Point<T> {
    coords: [T; MAX_DIM],
    dim: u8,
}

impl<T: Scalar> Point<T> {
    pub fn new(coords: &[T]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::UnsupportedDimension(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite_value()) {
            return Err(Error::NonFinite);
        }
        let mut buf: [T; MAX_DIM] = std::array::from_fn(|_| T::zero());
        for (slot, c) in buf.iter_mut().zip(coords) {
            *slot = c.clone();
        }
        Ok(Point {
            coords: buf,
            dim: coords.len() as u8,
        })
    }

    /// Panics on a non-finite coordinate.
    pub fn p1(x: T) -> Self {
        Self::new(&[x]).expect("finite coordinate")
    }

    /// Panics on a non-finite coordinate.
    pub fn p2(x: T, y: T) -> Self {
        Self::new(&[x, y]).expect("finite coordinates")
    }

    /// Panics on a non-finite coordinate.
    pub fn p3(x: T, y: T, z: T) -> Self {
        Self::new(&[x, y, z]).expect("finite coordinates")
    }

    pub fn origin(dim: usize) -> Result<Self> {
        Self::new(&vec![T::zero(); dim])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[T] {
        &self.coords[..self.dim as usize]
    }

    #[inline]
    pub fn coord(&self, i: usize) -> T {
        self.coords[i].clone()
    }

    /// Concatenation `(self, other)` in the product space.
    pub fn concat(&self, other: &Point<T>) -> Result<Self> {
        let mut v = self.coords().to_vec();
        v.extend_from_slice(other.coords());
        Self::new(&v)
    }

    /// Coordinates `range` as a point of lower dimension.
    pub fn project(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.end > self.dim() || range.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: range.end,
                found: self.dim(),
            });
        }
        Self::new(&self.coords[range])
    }

    pub fn add(&self, other: &Point<T>) -> Point<T> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Point<T>) -> Point<T> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, t: &T) -> Point<T> {
        let mut out = self.clone();
        for c in out.coords[..self.dim()].iter_mut() {
            *c = c.clone() * t.clone();
        }
        out
    }

    fn zip_with(&self, other: &Point<T>, f: impl Fn(T, T) -> T) -> Point<T> {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for i in 0..self.dim() {
            out.coords[i] = f(self.coords[i].clone(), other.coords[i].clone());
        }
        out
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }

    /// Lexicographic comparison of coordinates.
    pub fn lex_cmp(&self, other: &Point<T>) -> std::cmp::Ordering {
        for (a, b) in self.coords().iter().zip(other.coords()) {
            match a.partial_cmp(b) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(o) => return o,
            }
        }
        self.dim.cmp(&other.dim)
    }
}

impl<T: Real> Point<T> {
    #[inline]
    pub fn dist_sq(&self, other: &Point<T>) -> T {
        let mut s = T::zero();
        for i in 0..self.dim() {
            let d = self.coords[i] - other.coords[i];
            s = s + d * d;
        }
        s
    }

    #[inline]
    pub fn dist(&self, other: &Point<T>) -> T {
        self.dist_sq(other).sqrt()
    }

    pub fn norm(&self) -> T {
        self.coords().iter().fold(T::zero(), |s, &c| s + c * c).sqrt()
    }

    pub fn to_f64(&self) -> Point<f64> {
        let v: Vec<f64> = self.coords().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        Point::new(&v).expect("finite after conversion")
    }
}

impl<T: fmt::Debug> fmt::Debug for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Point")
            .field(&&self.coords[..self.dim as usize])
            .finish()
    }
}

impl<T: Scalar> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<T: Scalar + Zero> Point<T> {
    pub fn is_origin(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }
}
