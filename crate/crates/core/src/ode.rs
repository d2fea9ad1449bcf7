//! Non-rigorous adaptive integration (Dormand-Prince 5(4)) with cubic
//! Hermite dense output. Used only to produce initial guesses and diagnostics.

use crate::error::{Error, Result};

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_STEPS: usize = 1_000_000;

/// Accepted steps of an integration, with derivatives for interpolation.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub x: Vec<Vec<f64>>,
    pub dx: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn start(&self) -> f64 {
        self.t[0]
    }

    pub fn end(&self) -> f64 {
        *self.t.last().unwrap()
    }

    pub fn last(&self) -> &[f64] {
        self.x.last().unwrap()
    }

    /// Cubic Hermite interpolation; `t` is clamped to the integrated span.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let forward = self.end() >= self.start();
        let key = |s: f64| if forward { s } else { -s };
        let tk = key(t).clamp(key(self.start()), key(self.end()));
        let i = match self.t.iter().position(|&s| key(s) >= tk) {
            Some(0) => return self.x[0].clone(),
            Some(i) => i,
            None => return self.last().to_vec(),
        };
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        let h = t1 - t0;
        let s = (if forward { tk } else { -tk } - t0) / h;
        let (h00, h10) = (2.0 * s.powi(3) - 3.0 * s * s + 1.0, s.powi(3) - 2.0 * s * s + s);
        let (h01, h11) = (-2.0 * s.powi(3) + 3.0 * s * s, s.powi(3) - s * s);
        (0..self.x[i].len())
            .map(|k| {
                h00 * self.x[i - 1][k] + h10 * h * self.dx[i - 1][k] + h01 * self.x[i][k] + h11 * h * self.dx[i][k]
            })
            .collect()
    }
}

/// Integrate the autonomous system `x' = f(x)` from `t0` to `t1` (either
/// direction) with mixed absolute/relative tolerance `tol`.
pub fn integrate<F>(f: F, x0: &[f64], t0: f64, t1: f64, tol: f64) -> Result<Trajectory>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    integrate_until(f, x0, t0, t1, tol, |_| false)
}

/// Like [`integrate`], stopping after the first accepted step whose endpoint
/// satisfies `stop`.
pub fn integrate_until<F, S>(f: F, x0: &[f64], t0: f64, t1: f64, tol: f64, stop: S) -> Result<Trajectory>
where
    F: Fn(&[f64]) -> Vec<f64>,
    S: Fn(&[f64]) -> bool,
{
    let n = x0.len();
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let mut traj = Trajectory {
        t: vec![t0],
        x: vec![x0.to_vec()],
        dx: vec![f(x0)],
    };
    if span == 0.0 {
        return Ok(traj);
    }
    let mut t = t0;
    let mut x = x0.to_vec();
    let mut k1 = traj.dx[0].clone();
    let scale0 = x.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let rate = k1.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut h = if rate > 0.0 { (0.01 * scale0 / rate).min(span) } else { span };
    for _ in 0..MAX_STEPS {
        let remaining = (t1 - t) * dir;
        if remaining <= 0.0 {
            return Ok(traj);
        }
        h = h.min(remaining);
        let mut k = vec![k1.clone()];
        for s in 1..7 {
            let xs: Vec<f64> = (0..n)
                .map(|i| x[i] + dir * h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>())
                .collect();
            k.push(f(&xs));
        }
        let x5: Vec<f64> = (0..n)
            .map(|i| x[i] + dir * h * (0..7).map(|j| B5[j] * k[j][i]).sum::<f64>())
            .collect();
        let err = (0..n)
            .map(|i| {
                let e = dir * h * (0..7).map(|j| (B5[j] - B4[j]) * k[j][i]).sum::<f64>();
                e.abs() / (tol + tol * x[i].abs().max(x5[i].abs()))
            })
            .fold(0.0, f64::max);
        if !err.is_finite() || !x5.iter().all(|v| v.is_finite()) {
            h *= 0.1;
            if h < span * 1e-16 {
                return Err(Error::Numerical("integration blew up".into()));
            }
            continue;
        }
        if err <= 1.0 {
            t += dir * h;
            x = x5;
            k1 = k[6].clone();
            traj.t.push(t);
            traj.x.push(x.clone());
            traj.dx.push(k1.clone());
            if stop(&x) {
                return Ok(traj);
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < span * 1e-15 {
            return Err(Error::Numerical("step size underflow".into()));
        }
    }
    Err(Error::Convergence(format!("more than {MAX_STEPS} steps")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_and_rotation() {
        let tr = integrate(|x| vec![-x[0]], &[1.0], 0.0, 2.0, 1e-12).unwrap();
        assert!((tr.last()[0] - (-2.0f64).exp()).abs() < 1e-10);
        assert!((tr.eval(1.0)[0] - (-1.0f64).exp()).abs() < 1e-6);
        let back = integrate(|x| vec![-x[0]], &[1.0], 0.0, -1.0, 1e-12).unwrap();
        assert!((back.last()[0] - 1f64.exp()).abs() < 1e-9);
        let rot = integrate(|x| vec![-x[1], x[0]], &[1.0, 0.0], 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((rot.last()[0] + 1.0).abs() < 1e-9 && rot.last()[1].abs() < 1e-9);
    }
}
