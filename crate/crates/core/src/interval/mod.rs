//! Inf-sup interval arithmetic with outward rounding.
//!
//! Every operation returns an interval that contains the exact real result
//! for all arguments drawn from its operands. Rounding is done after the fact
//! by stepping endpoints to the neighbouring double (see [`rounding`]), so no
//! floating-point environment state is ever touched.
//!
//! A NaN produced anywhere (for example `inf - inf`) turns the result into
//! [`Interval::ENTIRE`], which then fails every sign or size test made on it.
//! Code that needs finite results calls [`Interval::finite`] at its boundary.

mod format;
mod matrix;
pub mod midrad;
pub mod rounding;

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU32, Ordering};

pub use format::{format_hex, parse_hex, parse_number};
pub use matrix::{point_mat_vec, IMatrix, IVector};
pub use midrad::MidRadMatrix;

use crate::error::{Error, Result};
use rounding::*;

/// Error budget, in ulps, assumed for the platform `exp`.
pub const EXP_ULP_BUDGET: u32 = 2;
/// Budget used in paranoid mode.
pub const EXP_ULP_BUDGET_PARANOID: u32 = 4;

static EXP_ULPS: AtomicU32 = AtomicU32::new(EXP_ULP_BUDGET);

/// Set the number of ulps by which `exp` enclosures are widened.
///
/// Meant to be called once at startup (the CLI's `--paranoid` flag).
pub fn set_exp_ulp_budget(ulps: u32) {
    EXP_ULPS.store(ulps.max(1), Ordering::Relaxed);
}

pub fn exp_ulp_budget() -> u32 {
    EXP_ULPS.load(Ordering::Relaxed)
}

/// Closed interval `[lo, hi]` of reals.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Panics if `lo > hi` or either endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn try_new(lo: f64, hi: f64) -> Result<Interval> {
        if lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")))
        }
    }

    #[inline]
    pub const fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    /// `[m - r, m + r]`, rounded outward.
    pub fn mid_rad(m: f64, r: f64) -> Interval {
        let r = r.abs();
        mk(sub_down(m, r), add_up(m, r))
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn mid(self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        if m.is_finite() {
            m
        } else {
            0.0
        }
    }

    /// Upper bound of the radius about [`Interval::mid`].
    pub fn rad(self) -> f64 {
        let m = self.mid();
        sub_up(m, self.lo).max(sub_up(self.hi, m))
    }

    /// Upper bound of `hi - lo`.
    pub fn width(self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// `max |x|` over the interval.
    #[inline]
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// `min |x|` over the interval.
    pub fn mig(self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// `Ok(self)` if both endpoints are finite.
    pub fn finite(self) -> Result<Interval> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Range(format!("non-finite enclosure {self}")))
        }
    }

    #[inline]
    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn interior_of(self, other: Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn overlaps(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: f64) -> Interval {
        let r = r.abs();
        Interval { lo: -r, hi: r }
    }

    /// Enlarge by `r` on both sides.
    pub fn inflate(self, r: f64) -> Interval {
        let r = r.abs();
        mk(sub_down(self.lo, r), add_up(self.hi, r))
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval {
                lo: 0.0,
                hi: self.mag(),
            }
        }
    }

    pub fn sqr(self) -> Interval {
        let (a, b) = (self.lo, self.hi);
        if a >= 0.0 {
            mk(mul_down(a, a), mul_up(b, b))
        } else if b <= 0.0 {
            mk(mul_down(b, b), mul_up(a, a))
        } else {
            mk(0.0, mul_up(a, a).max(mul_up(b, b)))
        }
    }

    pub fn powi(self, n: u32) -> Interval {
        match n {
            0 => Interval::ONE,
            1 => self,
            _ if n % 2 == 0 => self.powi(n / 2).sqr(),
            _ => self.powi(n - 1) * self,
        }
    }

    pub fn sqrt(self) -> Result<Interval> {
        if !(self.lo >= 0.0) {
            return Err(Error::Domain(format!("sqrt of {self}")));
        }
        Ok(mk(sqrt_down(self.lo), sqrt_up(self.hi)))
    }

    /// Enclosure of `exp` over the interval, widened by the active ulp budget.
    pub fn exp(self) -> Result<Interval> {
        if !(self.lo <= self.hi) || self.lo.is_nan() {
            return Err(Error::Range(format!("exp of {self}")));
        }
        if self.lo == 0.0 && self.hi == 0.0 {
            return Ok(Interval::ONE);
        }
        let k = exp_ulp_budget();
        let lo = down_ulps(self.lo.exp(), k).max(0.0);
        let hi = up_ulps(self.hi.exp(), k);
        if !hi.is_finite() {
            return Err(Error::Range(format!("exp overflow at {}", self.hi)));
        }
        Ok(Interval { lo, hi })
    }

    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.div(self)
    }

    /// Quotient; fails if the divisor contains zero.
    pub fn div(self, b: Interval) -> Result<Interval> {
        if b.contains_zero() || !(b.lo <= b.hi) {
            return Err(Error::Domain(format!("division by {b}")));
        }
        let (a1, a2, b1, b2) = (self.lo, self.hi, b.lo, b.hi);
        let r = if b1 > 0.0 {
            if a1 >= 0.0 {
                (div_down(a1, b2), div_up(a2, b1))
            } else if a2 <= 0.0 {
                (div_down(a1, b1), div_up(a2, b2))
            } else {
                (div_down(a1, b1), div_up(a2, b1))
            }
        } else if a1 >= 0.0 {
            (div_down(a2, b2), div_up(a1, b1))
        } else if a2 <= 0.0 {
            (div_down(a2, b1), div_up(a1, b2))
        } else {
            (div_down(a2, b2), div_up(a1, b2))
        };
        Ok(mk(r.0, r.1))
    }

    /// Multiply by an exact double.
    pub fn scale(self, c: f64) -> Interval {
        self * Interval::point(c)
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    /// Enclosure of a decimal literal such as `"0.7"`.
    pub fn from_decimal(s: &str) -> Result<Interval> {
        format::decimal_enclosure(s)
    }
}

/// Build an interval from computed endpoints, poisoning on NaN.
#[inline]
fn mk(lo: f64, hi: f64) -> Interval {
    if lo <= hi {
        Interval { lo, hi }
    } else {
        Interval::ENTIRE
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval::ZERO
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, b: Interval) -> Interval {
        mk(add_down(self.lo, b.lo), add_up(self.hi, b.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, b: Interval) -> Interval {
        mk(sub_down(self.lo, b.hi), sub_up(self.hi, b.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, b: Interval) -> Interval {
        let (a1, a2, b1, b2) = (self.lo, self.hi, b.lo, b.hi);
        let (lo, hi) = if a1 >= 0.0 {
            if b1 >= 0.0 {
                (mul_down(a1, b1), mul_up(a2, b2))
            } else if b2 <= 0.0 {
                (mul_down(a2, b1), mul_up(a1, b2))
            } else {
                (mul_down(a2, b1), mul_up(a2, b2))
            }
        } else if a2 <= 0.0 {
            if b1 >= 0.0 {
                (mul_down(a1, b2), mul_up(a2, b1))
            } else if b2 <= 0.0 {
                (mul_down(a2, b2), mul_up(a1, b1))
            } else {
                (mul_down(a1, b2), mul_up(a1, b1))
            }
        } else if b1 >= 0.0 {
            (mul_down(a1, b2), mul_up(a2, b2))
        } else if b2 <= 0.0 {
            (mul_down(a2, b1), mul_up(a1, b1))
        } else {
            (
                mul_down(a1, b2).min(mul_down(a2, b1)),
                mul_up(a1, b1).max(mul_up(a2, b2)),
            )
        };
        mk(lo, hi)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, b: f64) -> Interval {
        self + Interval::point(b)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, b: f64) -> Interval {
        self - Interval::point(b)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, b: f64) -> Interval {
        self * Interval::point(b)
    }
}

impl Mul<Interval> for f64 {
    type Output = Interval;
    fn mul(self, b: Interval) -> Interval {
        Interval::point(self) * b
    }
}

impl AddAssign for Interval {
    fn add_assign(&mut self, b: Interval) {
        *self = *self + b;
    }
}

impl SubAssign for Interval {
    fn sub_assign(&mut self, b: Interval) {
        *self = *self - b;
    }
}

impl MulAssign for Interval {
    fn mul_assign(&mut self, b: Interval) {
        *self = *self * b;
    }
}

impl Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.16e}, {:.16e}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&format_hex(self.lo))?;
        t.serialize_element(&format_hex(self.hi))?;
        t.end()
    }
}

impl<'de> serde::Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: [serde_json::Value; 2] = serde::Deserialize::deserialize(d)?;
        let end = |v: &serde_json::Value| -> std::result::Result<f64, D::Error> {
            match v {
                serde_json::Value::String(s) => parse_number(s).map_err(serde::de::Error::custom),
                serde_json::Value::Number(n) => n
                    .as_f64()
                    .ok_or_else(|| serde::de::Error::custom("bad number")),
                _ => Err(serde::de::Error::custom("interval endpoint must be a string or number")),
            }
        };
        let (lo, hi) = (end(&v[0])?, end(&v[1])?);
        Interval::try_new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// Serde helpers writing an `f64` as a hex-float string.
pub mod hex_f64 {
    use super::{format_hex, parse_number};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_hex(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        parse_number(&s).map_err(serde::de::Error::custom)
    }

    /// Same for `Vec<f64>`.
    pub mod vec {
        use super::super::{format_hex, parse_number};
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(x: &[f64], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(x.iter().map(|v| format_hex(*v)))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_number(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
