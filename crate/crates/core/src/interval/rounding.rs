//! Directed rounding on top of round-to-nearest.
//!
//! Sums use the error-free `two_sum` transform, so an exact sum is never
//! widened and an inexact one moves by a single ulp in the needed direction.
//! Products, quotients and square roots are widened by one ulp unless the
//! result is trivially exact.

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Lower bound of `a + b`.
#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if s == f64::INFINITY && a.is_finite() && b.is_finite() {
            f64::MAX
        } else {
            s
        };
    }
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

/// Upper bound of `a + b`.
#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if s == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            f64::MIN
        } else {
            s
        };
    }
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// Significant bits of a normal double (position of the lowest set bit).
#[inline]
fn significant_bits(x: f64) -> u32 {
    let m = (x.to_bits() & ((1u64 << 52) - 1)) | (1u64 << 52);
    53 - m.trailing_zeros()
}

/// Whether `a * b` is certainly exact: the factors have at most 53 significant
/// bits together and the product is a finite normal number.
#[inline]
fn exact_product(a: f64, b: f64) -> bool {
    if a == 0.0 || b == 0.0 {
        return true;
    }
    let p = (a * b).abs();
    a.is_normal()
        && b.is_normal()
        && p >= f64::MIN_POSITIVE
        && p <= f64::MAX
        && significant_bits(a) + significant_bits(b) <= 53
}

/// Lower bound of `a * b`.
#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if exact_product(a, b) {
        return p;
    }
    if p == f64::INFINITY && a.is_finite() && b.is_finite() {
        return f64::MAX;
    }
    p.next_down()
}

/// Upper bound of `a * b`.
#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if exact_product(a, b) {
        return p;
    }
    if p == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
        return f64::MIN;
    }
    p.next_up()
}

/// Whether `q = fl(a / b)` is the exact quotient. The fused residual
/// `q b - a` is exact whenever it cannot underflow.
#[inline]
fn exact_quotient(a: f64, b: f64, q: f64) -> bool {
    if a == 0.0 || b == 1.0 || b == -1.0 {
        return true;
    }
    q.is_normal() && a.abs() >= 1e-290 && q.mul_add(b, -a) == 0.0
}

/// Lower bound of `a / b`.
#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if exact_quotient(a, b, q) {
        return q;
    }
    q.next_down()
}

/// Upper bound of `a / b`.
#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if exact_quotient(a, b, q) {
        return q;
    }
    q.next_up()
}

/// Lower bound of `sqrt(a)` for `a >= 0`.
#[inline]
pub fn sqrt_down(a: f64) -> f64 {
    let s = a.sqrt();
    if s.mul_add(s, -a) == 0.0 {
        s
    } else {
        s.next_down().max(0.0)
    }
}

/// Upper bound of `sqrt(a)` for `a >= 0`.
#[inline]
pub fn sqrt_up(a: f64) -> f64 {
    let s = a.sqrt();
    if s.mul_add(s, -a) == 0.0 {
        s
    } else {
        s.next_up()
    }
}

/// Widen `x` downward by `n` ulps.
#[inline]
pub fn down_ulps(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

/// Widen `x` upward by `n` ulps.
#[inline]
pub fn up_ulps(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

/// Running sum of nonnegative terms rounded upward.
#[derive(Clone, Copy, Debug, Default)]
pub struct UpSum(pub f64);

impl UpSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        self.0 = add_up(self.0, x);
    }
    #[inline]
    pub fn add_prod(&mut self, a: f64, b: f64) {
        self.0 = add_up(self.0, mul_up(a, b));
    }
}
