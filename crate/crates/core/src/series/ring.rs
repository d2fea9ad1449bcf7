//! Minimal algebraic interface shared by scalars and coefficient sequences.
//!
//! The vector field is written once against [`Ring`] and then evaluated on
//! doubles, intervals, Taylor sequences and Chebyshev sequences.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::interval::Interval;

/// Coefficient type: `f64` for the floating-point front end, `Interval` for proofs.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn zero() -> Self;
    fn from_f64(x: f64) -> Self;
    /// Midpoint for `f64`, the interval itself for `Interval`.
    fn from_interval(x: Interval) -> Self;
    /// Enclosure of the value (a point interval for `f64`).
    fn to_interval(self) -> Interval;
    /// Upper bound of the absolute value (exact for `f64`).
    fn mag(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_interval(x: Interval) -> Self {
        x.mid()
    }
    fn to_interval(self) -> Interval {
        Interval::point(self)
    }
    fn mag(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Interval {
    fn zero() -> Self {
        Interval::ZERO
    }
    fn from_f64(x: f64) -> Self {
        Interval::point(x)
    }
    fn from_interval(x: Interval) -> Self {
        x
    }
    fn to_interval(self) -> Interval {
        self
    }
    fn mag(self) -> f64 {
        Interval::mag(self)
    }
}

/// Commutative ring with scalars from `Self::S`.
pub trait Ring: Clone + Debug {
    type S: Scalar;
    fn constant(c: Self::S) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: Self::S) -> Self;
    fn neg(&self) -> Self {
        self.scale(Self::S::from_f64(-1.0))
    }
}

macro_rules! scalar_ring {
    ($t:ty) => {
        impl Ring for $t {
            type S = $t;
            #[inline]
            fn constant(c: $t) -> Self {
                c
            }
            #[inline]
            fn add(&self, o: &Self) -> Self {
                *self + *o
            }
            #[inline]
            fn sub(&self, o: &Self) -> Self {
                *self - *o
            }
            #[inline]
            fn mul(&self, o: &Self) -> Self {
                *self * *o
            }
            #[inline]
            fn scale(&self, c: $t) -> Self {
                *self * c
            }
            #[inline]
            fn neg(&self) -> Self {
                -*self
            }
        }
    };
}

scalar_ring!(f64);
scalar_ring!(Interval);
