//! Independent oracles shared by the integration suites and the acceptance
//! harness. Nothing here calls into the crate's own arithmetic.

#![allow(dead_code)]

use std::sync::OnceLock;

use mep_prove::contraction::RadiiBounds;
use mep_prove::pipeline::{prove_mep, MEPReport, RunConfig};
use mep_prove::Interval;
use num_bigint::{BigInt, Sign};
use num_traits::Zero;

/// An exact real `s + e` with `|e|` at most half an ulp of `s`.
#[derive(Clone, Copy, Debug)]
pub struct Exact {
    pub s: f64,
    pub e: f64,
}

/// `lo <= s + e <= hi`, decided without rounding.
pub fn contains_exact(x: Interval, v: Exact) -> bool {
    let lo_ok = x.lo() < v.s || (x.lo() == v.s && v.e >= 0.0);
    let hi_ok = x.hi() > v.s || (x.hi() == v.s && v.e <= 0.0);
    lo_ok && hi_ok
}

pub fn exact_add(a: f64, b: f64) -> Exact {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    Exact { s, e }
}

pub fn exact_sub(a: f64, b: f64) -> Exact {
    exact_add(a, -b)
}

pub fn exact_mul(a: f64, b: f64) -> Exact {
    let s = a * b;
    Exact { s, e: a.mul_add(b, -s) }
}

/// `a / b`: only the sign of the error matters, taken from the remainder.
pub fn exact_div(a: f64, b: f64) -> Exact {
    let q = a / b;
    let r = (-q).mul_add(b, a);
    Exact { s: q, e: if r == 0.0 { 0.0 } else { r.signum() * b.signum() * f64::MIN_POSITIVE } }
}

/// Fractional bits of the fixed-point exp oracle.
const EXP_BITS: u32 = 400;

/// `(m, e)` with `x = m 2^e` exactly.
fn decompose(x: f64) -> (BigInt, i32) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    (BigInt::from(m) * sign, e)
}

/// `floor(x 2^EXP_BITS)` for a double with `x 2^EXP_BITS` integral.
fn to_fixed(x: f64) -> BigInt {
    let (m, e) = decompose(x);
    let sh = e + EXP_BITS as i32;
    assert!(sh >= 0, "{x} too small for the fixed-point oracle");
    m << sh as usize
}

/// Fixed-point `exp(x) 2^EXP_BITS` for `|x| <= 60`. Truncation errors of at
/// most one unit per step are amplified by at most `e^|x| < 2^87` in total.
fn exp_fixed(x: f64) -> BigInt {
    let one = BigInt::from(1) << EXP_BITS as usize;
    let xf = to_fixed(x);
    let mut term = one.clone();
    let mut sum = one;
    let mut k = 1u32;
    while !term.is_zero() {
        term = (&term * &xf) >> EXP_BITS as usize;
        term /= k;
        sum += &term;
        k += 1;
    }
    sum
}

/// Whether `[lo, hi]` contains `exp(x)`, decided in 400-bit fixed point.
pub fn exp_enclosed(x: f64, e: Interval) -> bool {
    if x == 0.0 {
        return e.contains(1.0);
    }
    assert!(x.abs() <= 60.0);
    let v = exp_fixed(x);
    let slack = BigInt::from(1) << 100usize;
    to_fixed(e.lo()) <= &v - &slack && to_fixed(e.hi()) >= &v + &slack
}

/// Relative width of an enclosure in units of machine epsilon.
pub fn width_in_eps(e: Interval) -> f64 {
    (e.hi() - e.lo()) / (e.mid().abs() * f64::EPSILON)
}

/// Schoolbook Cauchy product.
pub fn schoolbook_cauchy(u: &[Interval], v: &[Interval], n: usize) -> Vec<Interval> {
    let mut out = vec![Interval::ZERO; n];
    for (k, o) in out.iter_mut().enumerate() {
        for i in 0..=k {
            if i < u.len() && k - i < v.len() {
                *o += u[i] * v[k - i];
            }
        }
    }
    out
}

/// Brute-force symmetric Chebyshev convolution, summing over `l` in `[-L, L]`.
pub fn brute_cheb(u: &[Interval], v: &[Interval], n: usize) -> Vec<Interval> {
    let at = |w: &[Interval], l: i64| w.get(l.unsigned_abs() as usize).copied().unwrap_or(Interval::ZERO);
    let big = (u.len() + v.len() + n) as i64;
    (0..n as i64)
        .map(|k| (-big..=big).map(|l| at(u, l) * at(v, k - l)).sum())
        .collect()
}

/// `P(r)` and `Q(r)` of the radii polynomials in plain floating point.
pub fn radii_pq(b: &[f64; 6], r: f64) -> (f64, f64) {
    let [y, z0, z1, z2, z3, z4] = *b;
    let lin = -(1.0 - z0 - z1);
    let p = y + r * (lin + r * (z2 / 2.0 + r * (z3 / 6.0 + r * z4 / 24.0)));
    let q = lin + r * (z2 + r * (z3 / 2.0 + r * z4 / 6.0));
    (p, q)
}

/// Exact dyadic rational `m 2^e`.
#[derive(Clone, Debug)]
struct Dyadic {
    m: BigInt,
    e: i32,
}

impl Dyadic {
    fn of(x: f64) -> Self {
        let (m, e) = decompose(x);
        Dyadic { m, e }
    }

    fn add(&self, o: &Dyadic) -> Dyadic {
        let e = self.e.min(o.e);
        Dyadic { m: (&self.m << (self.e - e) as usize) + (&o.m << (o.e - e) as usize), e }
    }

    fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic { m: &self.m * &o.m, e: self.e + o.e }
    }

    fn sign(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }
}

/// Exact signs of `24 P(r)` and `6 Q(r)`, the radii polynomials with
/// denominators cleared: `-1`, `0` or `1`.
pub fn radii_signs(b: &[f64; 6], r: f64) -> (i32, i32) {
    let d = |x: f64| Dyadic::of(x);
    let [y, z0, z1, z2, z3, z4] = b.map(d);
    let lin = d(-1.0).add(&z0).add(&z1);
    let r = d(r);
    let horner = |c: &[Dyadic]| c.iter().rev().fold(d(0.0), |acc, a| acc.mul(&r).add(a));
    let k = |c: f64, x: &Dyadic| d(c).mul(x);
    let p = horner(&[k(24.0, &y), k(24.0, &lin), k(12.0, &z2), k(4.0, &z3), z4.clone()]);
    let q = horner(&[k(6.0, &lin), k(6.0, &z2), k(3.0, &z3), z4]);
    (p.sign(), q.sign())
}

/// Whether some sample of a geometric grid on `[1e-20, 10 (Y + 1)]` has both
/// radii polynomials negative.
pub fn sign_scan(b: &[f64; 6], samples: usize) -> Option<f64> {
    let (a, z) = (1e-20f64.ln(), (10.0 * (b[0] + 1.0)).ln());
    (0..samples)
        .map(|j| (a + (z - a) * j as f64 / (samples - 1) as f64).exp())
        .find(|&r| {
            let (p, q) = radii_pq(b, r);
            p < 0.0 && q < 0.0
        })
}

pub fn bounds_of(b: &[f64; 6]) -> RadiiBounds {
    RadiiBounds::new(b[0], b[2], b[3], b[4], b[5]).with_z0(Interval::point(b[1]))
}

/// The default proof, computed once per test binary.
pub fn default_report() -> &'static MEPReport {
    static REPORT: OnceLock<MEPReport> = OnceLock::new();
    REPORT.get_or_init(|| prove_mep(&RunConfig::default()).expect("default run"))
}
