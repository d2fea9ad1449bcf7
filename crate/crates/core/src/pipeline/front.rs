//! Floating-point front end: trajectories for initial guesses and for
//! choosing integration times. Nothing here is part of a proof.

use crate::equilibria::TrappingSquare;
use crate::error::{Error, Result};
use crate::ode::{self, Trajectory};
use crate::potential::{field, MBParams};

/// Factor applied to the entry time found by [`find_tau`].
pub const TAU_MARGIN: f64 = 1.2;
/// Fraction of the half side kept when testing entry into a square.
pub const TAU_SQUARE_SHRINK: f64 = 0.75;
/// Longest integration time searched by [`find_tau`].
pub const TAU_SEARCH_MAX: f64 = 1.0;

fn lifted_field(p: &MBParams) -> impl Fn(&[f64]) -> Vec<f64> {
    let coeffs = p.field_coeffs::<f64>();
    move |x: &[f64]| field(&coeffs, &std::array::from_fn(|i| x[i])).to_vec()
}

/// Integrate the lifted field from `x0` over `[0, tau]`.
pub fn integrate_ivp(p: &MBParams, x0: &[f64; 6], tau: f64, tol: f64) -> Result<Trajectory> {
    if !(1e-14..=1e-6).contains(&tol) {
        return Err(Error::Domain(format!("tolerance {tol:e} outside [1e-14, 1e-6]")));
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::Domain(format!("time {tau} must be nonnegative")));
    }
    ode::integrate(lifted_field(p), x0, 0.0, tau, tol)
}

/// `TAU_MARGIN` times the first time at which `(x, y)` lies inside `square`
/// shrunk to `TAU_SQUARE_SHRINK` of its half side; 0 if `x0` already does.
pub fn find_tau(p: &MBParams, x0: &[f64; 6], square: &TrappingSquare) -> Result<f64> {
    let (cx, cy) = (square.center[0].mid(), square.center[1].mid());
    let h = square.half_side * TAU_SQUARE_SHRINK;
    let inside = |x: &[f64]| (x[0] - cx).abs() < h && (x[1] - cy).abs() < h;
    if inside(x0) {
        return Ok(0.0);
    }
    let traj = ode::integrate_until(lifted_field(p), x0, 0.0, TAU_SEARCH_MAX, ode::DEFAULT_TOL, inside)?;
    if !inside(traj.last()) {
        return Err(Error::Convergence(format!(
            "orbit does not enter the square around ({cx}, {cy}) before t = {TAU_SEARCH_MAX}"
        )));
    }
    // Refine the entry time inside the last step by bisection on the interpolant.
    let n = traj.t.len();
    let (mut a, mut b) = (traj.t[n.saturating_sub(2)], traj.end());
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if inside(&traj.eval(m)) {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(TAU_MARGIN * b)
}
