//! The potential `V` on the plane and its derivatives up to order three.

use super::MBParams;
use crate::error::Result;
use crate::interval::Interval;

/// Exponentials `psi_i` and the two partial derivatives of their exponents.
struct Terms {
    psi: [Interval; 4],
    qx: [Interval; 4],
    qy: [Interval; 4],
}

fn terms(p: &MBParams, x: Interval, y: Interval) -> Result<Terms> {
    let mut psi = [Interval::ZERO; 4];
    let mut qx = [Interval::ZERO; 4];
    let mut qy = [Interval::ZERO; 4];
    for i in 0..4 {
        let dx = x - p.x0[i];
        let dy = y - p.y0[i];
        let q = p.a[i] * dx.sqr() + p.b[i] * dx * dy + p.c[i] * dy.sqr();
        psi[i] = p.alpha[i] * q.exp()?;
        qx[i] = p.a[i].scale(2.0) * dx + p.b[i] * dy;
        qy[i] = p.b[i] * dx + p.c[i].scale(2.0) * dy;
    }
    Ok(Terms { psi, qx, qy })
}

/// The four exponential terms `psi_i(x, y)`.
pub fn psi(p: &MBParams, x: Interval, y: Interval) -> Result<[Interval; 4]> {
    Ok(terms(p, x, y)?.psi)
}

/// Jacobian of `psi`: row `i` is `(d psi_i/dx, d psi_i/dy)`.
pub fn dpsi(p: &MBParams, x: Interval, y: Interval) -> Result<[[Interval; 2]; 4]> {
    let t = terms(p, x, y)?;
    Ok(std::array::from_fn(|i| [t.qx[i] * t.psi[i], t.qy[i] * t.psi[i]]))
}

pub fn v(p: &MBParams, x: Interval, y: Interval) -> Result<Interval> {
    Ok(terms(p, x, y)?.psi.iter().copied().sum())
}

pub fn grad_v(p: &MBParams, x: Interval, y: Interval) -> Result<[Interval; 2]> {
    let t = terms(p, x, y)?;
    let gx = (0..4).map(|i| t.qx[i] * t.psi[i]).sum();
    let gy = (0..4).map(|i| t.qy[i] * t.psi[i]).sum();
    Ok([gx, gy])
}

pub fn hess_v(p: &MBParams, x: Interval, y: Interval) -> Result<[[Interval; 2]; 2]> {
    let t = terms(p, x, y)?;
    let mut h = [[Interval::ZERO; 2]; 2];
    for i in 0..4 {
        let (qx, qy, s) = (t.qx[i], t.qy[i], t.psi[i]);
        h[0][0] += (p.a[i].scale(2.0) + qx.sqr()) * s;
        h[0][1] += (p.b[i] + qx * qy) * s;
        h[1][1] += (p.c[i].scale(2.0) + qy.sqr()) * s;
    }
    h[1][0] = h[0][1];
    Ok(h)
}

/// Third derivatives `(V_xxx, V_xxy, V_xyy, V_yyy)`.
pub fn d3_v(p: &MBParams, x: Interval, y: Interval) -> Result<[Interval; 4]> {
    let t = terms(p, x, y)?;
    let mut d = [Interval::ZERO; 4];
    for i in 0..4 {
        let (qx, qy, s) = (t.qx[i], t.qy[i], t.psi[i]);
        let (qxx, qxy, qyy) = (p.a[i].scale(2.0), p.b[i], p.c[i].scale(2.0));
        d[0] += (qxx * qx * 3.0 + qx.powi(3)) * s;
        d[1] += (qxx * qy + qxy * qx * 2.0 + qx.sqr() * qy) * s;
        d[2] += (qyy * qx + qxy * qy * 2.0 + qx * qy.sqr()) * s;
        d[3] += (qyy * qy * 3.0 + qy.powi(3)) * s;
    }
    Ok(d)
}

/// Bound of the max-norm induced norm of `D^3 V` over a box:
/// `max_i sum_{j,k} |V_ijk|`.
pub fn d3v_norm_bound(p: &MBParams, x: Interval, y: Interval) -> Result<Interval> {
    let [xxx, xxy, xyy, yyy] = d3_v(p, x, y)?;
    let row_x = xxx.abs() + xxy.abs().scale(2.0) + xyy.abs();
    let row_y = xxy.abs() + xyy.abs().scale(2.0) + yyy.abs();
    Ok(row_x.max(row_y))
}

/// Twice the potential difference, the quasi-potential cost of the transition.
pub fn barrier(saddle_v: Interval, min_v: Interval) -> Interval {
    (saddle_v - min_v).scale(2.0)
}
