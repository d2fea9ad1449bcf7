//! Squares around minima that trap every trajectory of `-∇V` entering them.

use serde::{Deserialize, Serialize};

use super::{CriticalKind, CriticalPoint};
use crate::error::{Error, Result};
use crate::interval::{hex_f64, rounding, IVector, Interval};
use crate::potential::{grad_v, hess_v, MBParams};

pub const TRAPPING_SUBDIVISIONS: usize = 64;

/// A square on which `V` is strictly convex and `-∇V` points strictly inward.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrappingSquare {
    pub center: IVector,
    #[serde(with = "hex_f64")]
    pub half_side: f64,
    /// The square itself; its edges are these exact endpoints.
    pub x: Interval,
    pub y: Interval,
    /// Cells per side needed to certify convexity.
    pub convexity_cells: usize,
}

impl TrappingSquare {
    /// Whether the box `(x, y)` lies in the open square.
    pub fn contains_box(&self, x: Interval, y: Interval) -> bool {
        x.interior_of(self.x) && y.interior_of(self.y)
    }
}

/// Split `[a, b]` into `n` closed pieces covering it.
fn pieces(iv: Interval, n: usize) -> Vec<Interval> {
    let (a, b) = (iv.lo(), iv.hi());
    let step = (b - a) / n as f64;
    let mut pts: Vec<f64> = (0..n).map(|k| a + step * k as f64).collect();
    pts.push(b);
    pts.windows(2).map(|w| Interval::new(w[0], w[1].max(w[0]))).collect()
}

fn convex_on(p: &MBParams, x: Interval, y: Interval) -> Result<bool> {
    let h = hess_v(p, x, y)?;
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let tr = h[0][0] + h[1][1];
    Ok(det.lo() > 0.0 && tr.lo() > 0.0)
}

/// Certify the square of half side `half_side` around a minimum: the Hessian
/// is positive definite on it and `-∇V` points strictly inward on each edge
/// segment.
pub fn validate_trapping_square(
    p: &MBParams,
    m: &CriticalPoint,
    half_side: f64,
    subdivisions: usize,
) -> Result<TrappingSquare> {
    if m.kind != CriticalKind::Minimum {
        return Err(Error::Domain("trapping squares are built around minima".into()));
    }
    if !(half_side > 0.0 && half_side.is_finite()) || subdivisions == 0 {
        return Err(Error::Domain(format!(
            "half side {half_side} and subdivisions {subdivisions} must be positive"
        )));
    }
    let (cx, cy) = (m.center[0], m.center[1]);
    let x = Interval::new(rounding::sub_down(cx, half_side), rounding::add_up(cx, half_side));
    let y = Interval::new(rounding::sub_down(cy, half_side), rounding::add_up(cy, half_side));
    if !(m.x().interior_of(x) && m.y().interior_of(y)) {
        return Err(Error::validation("trapping square", "square does not contain the minimum"));
    }

    let mut cells = 1;
    loop {
        let ok = pieces(x, cells).iter().try_fold(true, |acc, &xs| -> Result<bool> {
            Ok(acc && pieces(y, cells).iter().try_fold(true, |a, &ys| Ok::<_, Error>(a && convex_on(p, xs, ys)?))?)
        })?;
        if ok {
            break;
        }
        if cells >= subdivisions {
            return Err(Error::validation(
                "trapping square",
                format!("convexity not certified with {cells}x{cells} cells"),
            ));
        }
        cells = (cells * 2).min(subdivisions);
    }

    let edges = [
        ("right", 0, Interval::point(x.hi()), true),
        ("left", 0, Interval::point(x.lo()), false),
        ("top", 1, Interval::point(y.hi()), true),
        ("bottom", 1, Interval::point(y.lo()), false),
    ];
    for (name, comp, fixed, outward_positive) in edges {
        let along = if comp == 0 { y } else { x };
        for (k, seg) in pieces(along, subdivisions).into_iter().enumerate() {
            let g = if comp == 0 { grad_v(p, fixed, seg)? } else { grad_v(p, seg, fixed)? };
            let d = g[comp];
            let inward = if outward_positive { d.lo() > 0.0 } else { d.hi() < 0.0 };
            if !inward {
                return Err(Error::validation(
                    "trapping square",
                    format!("{name} edge, segment {k}/{subdivisions}: dV = {d}"),
                ));
            }
        }
    }
    Ok(TrappingSquare {
        center: IVector::from_f64(&[cx, cy]),
        half_side,
        x,
        y,
        convexity_cells: cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{find_zero, validate_zero, DEFAULT_R_STAR};
    use crate::potential::MBParamsDecimal;

    fn bowl() -> MBParams {
        let s = |v: [&str; 4]| v.map(String::from);
        MBParamsDecimal {
            alpha: s(["1", "0", "0", "0"]),
            a: s(["1", "0", "0", "0"]),
            b: s(["0", "0", "0", "0"]),
            c: s(["1", "0", "0", "0"]),
            x0: s(["0", "0", "0", "0"]),
            y0: s(["0", "0", "0", "0"]),
        }
        .to_params()
        .unwrap()
    }

    #[test]
    fn bowl_square_with_one_segment() {
        let p = bowl();
        let m = validate_zero(&p, [0.0, 0.0], DEFAULT_R_STAR).unwrap();
        let sq = validate_trapping_square(&p, &m, 0.25, 1).unwrap();
        assert_eq!(sq.convexity_cells, 1);
    }

    #[test]
    fn minimum_one_square() {
        let p = MBParams::default();
        let z = find_zero(&p, [-0.6, 1.4]).unwrap();
        let m = validate_zero(&p, z, DEFAULT_R_STAR).unwrap();
        validate_trapping_square(&p, &m, 0.01, TRAPPING_SUBDIVISIONS).unwrap();
    }
}
