use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::interval::Interval;
use crate::series::Scalar;

/// Parameters of a four-term Müller-Brown-type potential
/// `V(x, y) = sum_i alpha_i exp(a_i (x-x0_i)^2 + b_i (x-x0_i)(y-y0_i) + c_i (y-y0_i)^2)`.
///
/// Values are enclosures of the decimal literals they were read from, so a
/// proof refers to the printed parameters rather than their nearest doubles.
#[derive(Clone, Debug, PartialEq)]
pub struct MBParams {
    pub alpha: [Interval; 4],
    pub a: [Interval; 4],
    pub b: [Interval; 4],
    pub c: [Interval; 4],
    pub x0: [Interval; 4],
    pub y0: [Interval; 4],
}

/// Decimal form of [`MBParams`], as it appears in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MBParamsDecimal {
    pub alpha: [String; 4],
    pub a: [String; 4],
    pub b: [String; 4],
    pub c: [String; 4],
    pub x0: [String; 4],
    pub y0: [String; 4],
}

impl Default for MBParamsDecimal {
    fn default() -> Self {
        let s = |v: [&str; 4]| v.map(String::from);
        MBParamsDecimal {
            alpha: s(["-200", "-100", "-170", "15"]),
            a: s(["-1", "-1", "-6.5", "0.7"]),
            b: s(["0", "0", "11", "0.6"]),
            c: s(["-10", "-10", "-6.5", "0.7"]),
            x0: s(["1", "0", "-0.5", "-1"]),
            y0: s(["0", "0.5", "1.5", "1"]),
        }
    }
}

impl MBParamsDecimal {
    pub fn to_params(&self) -> Result<MBParams> {
        let conv = |v: &[String; 4]| -> Result<[Interval; 4]> {
            Ok([
                Interval::from_decimal(&v[0])?,
                Interval::from_decimal(&v[1])?,
                Interval::from_decimal(&v[2])?,
                Interval::from_decimal(&v[3])?,
            ])
        };
        Ok(MBParams {
            alpha: conv(&self.alpha)?,
            a: conv(&self.a)?,
            b: conv(&self.b)?,
            c: conv(&self.c)?,
            x0: conv(&self.x0)?,
            y0: conv(&self.y0)?,
        })
    }
}

impl Default for MBParams {
    /// The standard Müller-Brown parameter set.
    fn default() -> Self {
        MBParamsDecimal::default()
            .to_params()
            .expect("default parameters parse")
    }
}

impl MBParams {
    /// `w1_i = 2 a_i x0_i + b_i y0_i`.
    pub fn w1(&self) -> [Interval; 4] {
        std::array::from_fn(|i| self.a[i].scale(2.0) * self.x0[i] + self.b[i] * self.y0[i])
    }

    /// `w2_i = b_i x0_i + 2 c_i y0_i`.
    pub fn w2(&self) -> [Interval; 4] {
        std::array::from_fn(|i| self.b[i] * self.x0[i] + self.c[i].scale(2.0) * self.y0[i])
    }

    pub fn field_coeffs<S: Scalar>(&self) -> FieldCoeffs<S> {
        let cv = |v: [Interval; 4]| v.map(S::from_interval);
        FieldCoeffs {
            w: [cv(self.w1()), cv(self.w2())],
            cx: [cv(self.a.map(|v| v.scale(2.0))), cv(self.b)],
            cy: [cv(self.b), cv(self.c.map(|v| v.scale(2.0)))],
        }
    }
}

/// Coefficients of the linear forms `L_r,i = cx_r,i x + cy_r,i y - w_r,i`
/// (`r = 0` is the x-derivative of the exponent, `r = 1` the y-derivative).
#[derive(Clone, Debug, PartialEq)]
pub struct FieldCoeffs<S> {
    pub w: [[S; 4]; 2],
    pub cx: [[S; 4]; 2],
    pub cy: [[S; 4]; 2],
}
