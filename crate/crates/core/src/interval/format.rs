//! Hex-float and decimal conversions.

use super::Interval;
use crate::error::{Error, Result};

/// C99-style hex float, e.g. `0x1.8p+1`; exact for every finite double.
pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if biased == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if biased == 0 { (0, -1022) } else { (1, biased - 1023) };
    let digits = format!("{frac:013x}");
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        format!("{sign}0x{lead}p{exp:+}")
    } else {
        format!("{sign}0x{lead}.{digits}p{exp:+}")
    }
}

/// Multiply by `2^k` in steps that avoid spurious overflow or underflow.
fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    if k < -1022 {
        x * 2f64.powi(-1022) * 2f64.powi((k + 1022) as i32)
    } else {
        x * 2f64.powi(k as i32)
    }
}

/// Parse a hex float such as `-0x1.921fb54442d18p+1`.
pub fn parse_hex(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("invalid hex float {s:?}"));
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .ok_or_else(bad)?;
    let (mant, exp) = match t.find(['p', 'P']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int, frac) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let mut m: u128 = 0;
    let mut shift: i64 = 0;
    for (k, c) in int.chars().chain(frac.chars()).enumerate() {
        let d = c.to_digit(16).ok_or_else(bad)? as u128;
        if m >> 120 != 0 {
            return Err(Error::Parse(format!("too many digits in {s:?}")));
        }
        m = (m << 4) | d;
        if k >= int.len() {
            shift -= 4;
        }
    }
    let v = ldexp(m as f64, exp + shift);
    Ok(if neg { -v } else { v })
}

/// Parse either a hex float or a decimal literal (nearest double).
pub fn parse_number(s: &str) -> Result<f64> {
    let t = s.trim();
    if t.contains("0x") || t.contains("0X") {
        parse_hex(t)
    } else {
        t.parse::<f64>()
            .map_err(|_| Error::Parse(format!("invalid number {s:?}")))
    }
}

/// Split a decimal literal into sign, integer digits and a power of ten.
fn decimal_parts(s: &str) -> Option<(bool, u128, i64)> {
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mant, e) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().ok()?),
        None => (t, 0),
    };
    let (int, frac) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let mut n: u128 = 0;
    for c in int.chars().chain(frac.chars()) {
        let d = c.to_digit(10)? as u128;
        n = n.checked_mul(10)?.checked_add(d)?;
    }
    Some((neg, n, e - frac.len() as i64))
}

/// Whether the double `x` equals the decimal `n * 10^e` exactly.
fn equals_decimal(x: f64, n: u128, e: i64) -> Option<bool> {
    if x == 0.0 {
        return Some(n == 0);
    }
    let bits = x.abs().to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as u128;
    let (mut m, mut be) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), biased - 1075)
    };
    while m % 2 == 0 {
        m /= 2;
        be += 1;
    }
    let pow10 = |d: i64| 10u128.checked_pow(d as u32);
    let pow2 = |d: i64| if d < 127 { Some(1u128 << d) } else { None };
    // Compare m * 2^be with n * 10^e, moving negative exponents across.
    let (mut lhs, mut rhs) = (m, n);
    if be >= 0 {
        lhs = lhs.checked_mul(pow2(be)?)?;
    } else {
        rhs = rhs.checked_mul(pow2(-be)?)?;
    }
    if e >= 0 {
        rhs = rhs.checked_mul(pow10(e)?)?;
    } else {
        lhs = lhs.checked_mul(pow10(-e)?)?;
    }
    Some(lhs == rhs)
}

/// Tight enclosure of the real number written in decimal.
pub(super) fn decimal_enclosure(s: &str) -> Result<Interval> {
    let x = parse_number(s)?;
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite literal {s:?}")));
    }
    if s.contains("0x") || s.contains("0X") {
        return Ok(Interval::point(x));
    }
    let exact = decimal_parts(s)
        .and_then(|(_, n, e)| equals_decimal(x, n, e))
        .unwrap_or(false);
    if exact {
        Ok(Interval::point(x))
    } else {
        Ok(Interval::new(x.next_down(), x.next_up()))
    }
}

/// Parse the `"[lo, hi]"` display form (decimal or hex endpoints).
impl std::str::FromStr for Interval {
    type Err = Error;
    fn from_str(s: &str) -> Result<Interval> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected \"[lo, hi]\", got {s:?}")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected \"[lo, hi]\", got {s:?}")))?;
        Interval::try_new(parse_number(a)?, parse_number(b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        for x in [
            0.0,
            -0.0,
            1.0,
            -3.5,
            0.1,
            f64::MAX,
            f64::MIN_POSITIVE,
            5e-324,
            1.0e-310,
            std::f64::consts::PI,
            -750.8626628392770,
        ] {
            let s = format_hex(x);
            let y = parse_hex(&s).unwrap();
            assert_eq!(x.to_bits(), y.to_bits(), "{x} -> {s} -> {y}");
        }
        assert_eq!(format_hex(3.0), "0x1.8p+1");
        assert_eq!(parse_hex("0x1p-1").unwrap(), 0.5);
        assert_eq!(parse_hex("0x.8").unwrap(), 0.5);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_hex("1.5").is_err());
        assert!(parse_hex("0xg").is_err());
        assert!(parse_number("abc").is_err());
    }

    #[test]
    fn decimal_enclosures() {
        let a = Interval::from_decimal("0.7").unwrap();
        assert!(a.lo() < 0.7 && 0.7 <= a.hi() || a.lo() <= 0.7 && 0.7 < a.hi());
        assert!(a.width() > 0.0);
        for exact in ["6.5", "-200", "0.5", "1e3", "15", "-0.25"] {
            let b = Interval::from_decimal(exact).unwrap();
            assert_eq!(b.lo(), b.hi(), "{exact} should be exact");
        }
    }

    #[test]
    fn display_round_trip() {
        let x = Interval::new(0.1, 0.30000000000000004);
        let y: Interval = x.to_string().parse().unwrap();
        assert_eq!(x, y);
    }
}
