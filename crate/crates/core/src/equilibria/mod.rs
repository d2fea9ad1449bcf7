//! Critical points of `V`: location, validation, classification, the spectral
//! data of the lifted field at saddles, and trapping squares around minima.

mod eigen;
mod trapping;

pub use eigen::{
    saddle_eigen, validate_eigenpair, validate_matrix_eigenpair, validate_q, validate_q_matrix,
    EigenData, Eigenpair, QData,
};
pub use trapping::{validate_trapping_square, TrappingSquare, TRAPPING_SUBDIVISIONS};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::contraction::{certify_affine, ValidationCertificate};
use crate::error::{Error, Result};
use crate::interval::{hex_f64, IMatrix, IVector, Interval};
use crate::linalg;
use crate::potential::{d3v_norm_bound, dpsi, grad_v, hess_v, lift, MBParams};

/// Default a priori cap on the validation radius of a critical point.
pub const DEFAULT_R_STAR: f64 = 1e-5;
pub const NEWTON_MAX_ITER: usize = 50;
/// Residual tolerance relative to the size of the terms summed in `∇V`.
pub const NEWTON_RESIDUAL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalKind {
    Minimum,
    Saddle,
}

/// A validated zero of `∇V`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalPoint {
    /// Numerical zero the proof was built around.
    #[serde(with = "hex_f64::vec")]
    pub center: Vec<f64>,
    /// Box `center ± radius` containing the unique zero.
    pub location: IVector,
    pub kind: CriticalKind,
    #[serde(with = "hex_f64")]
    pub radius: f64,
    /// `(x, y, psi(x, y))` over the location box.
    pub extended_point: IVector,
    pub bounds: ZeroBounds,
    pub certificate: ValidationCertificate,
    pub eigen: Option<EigenData>,
}

impl CriticalPoint {
    pub fn x(&self) -> Interval {
        self.location[0]
    }

    pub fn y(&self) -> Interval {
        self.location[1]
    }

    pub fn extended(&self) -> [Interval; 6] {
        std::array::from_fn(|i| self.extended_point[i])
    }
}

/// `Y`, `Z1`, `Z2` for the Newton operator `x - A ∇V(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroBounds {
    pub y: Interval,
    pub z1: Interval,
    pub z2: Interval,
    /// Upper bound of `‖A‖_∞`.
    #[serde(with = "hex_f64")]
    pub a_norm: f64,
}

fn point_grad(p: &MBParams, x: [f64; 2]) -> Result<DVector<f64>> {
    let g = grad_v(p, Interval::point(x[0]), Interval::point(x[1]))?;
    Ok(DVector::from_row_slice(&[g[0].mid(), g[1].mid()]))
}

fn point_hess(p: &MBParams, x: [f64; 2]) -> Result<DMatrix<f64>> {
    let h = hess_v(p, Interval::point(x[0]), Interval::point(x[1]))?;
    Ok(DMatrix::from_fn(2, 2, |i, j| h[i][j].mid()))
}

/// `max_k sum_i |d psi_i / d x_k|`, the magnitude at which `∇V` is summed.
fn gradient_scale(p: &MBParams, x: [f64; 2]) -> Result<f64> {
    let d = dpsi(p, Interval::point(x[0]), Interval::point(x[1]))?;
    Ok((0..2)
        .map(|k| d.iter().map(|row| row[k].mag()).sum::<f64>())
        .fold(0.0, f64::max))
}

/// Newton's method on `∇V`; converged once the step is at rounding level and
/// the residual is below `NEWTON_RESIDUAL` relative to [`gradient_scale`].
pub fn find_zero(p: &MBParams, guess: [f64; 2]) -> Result<[f64; 2]> {
    let mut x = guess;
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::Domain("non-finite initial guess".into()));
    }
    for _ in 0..NEWTON_MAX_ITER {
        let g = point_grad(p, x)?;
        let h = point_hess(p, x)?;
        let step = h
            .lu()
            .solve(&g)
            .ok_or_else(|| Error::Numerical(format!("singular Hessian at {x:?}")))?;
        let next = [x[0] - step[0], x[1] - step[1]];
        let small = step.amax() <= 4.0 * f64::EPSILON * (1.0 + x[0].abs().max(x[1].abs()));
        x = next;
        if small {
            let r = point_grad(p, x)?.amax();
            if r <= NEWTON_RESIDUAL * gradient_scale(p, x)?.max(1.0) {
                return Ok(x);
            }
            return Err(Error::Convergence(format!(
                "Newton stalled at {x:?} with residual {r:e}"
            )));
        }
    }
    Err(Error::Convergence(format!(
        "Newton did not converge in {NEWTON_MAX_ITER} iterations (last iterate {x:?})"
    )))
}

/// Bounds for the Newton operator around `xbar` with a given approximate
/// inverse `a` of the Hessian; `Z2` is taken over the box of radius `r_star`.
pub fn zero_bounds(p: &MBParams, xbar: [f64; 2], a: &DMatrix<f64>, r_star: f64) -> Result<ZeroBounds> {
    if a.shape() != (2, 2) {
        return Err(Error::shape("2x2", format!("{}x{}", a.nrows(), a.ncols())));
    }
    let (x, y) = (Interval::point(xbar[0]), Interval::point(xbar[1]));
    let ai = IMatrix::from_dmatrix(a);
    let g = grad_v(p, x, y)?;
    let ag = ai.mat_vec(&IVector::new(g.to_vec()))?;
    let h = hess_v(p, x, y)?;
    let hm = IMatrix::from_fn(2, 2, |i, j| h[i][j]);
    let b = IMatrix::identity(2).sub(&ai.mat_mat(&hm)?)?;
    let a_norm = linalg::norm_inf_upper(a);
    let d3 = d3v_norm_bound(p, x.inflate(r_star), y.inflate(r_star))?;
    let z2 = Interval::point(a_norm) * d3;
    let up = |v: f64| Interval::point(v);
    Ok(ZeroBounds {
        y: up(ag.norm_inf()).finite()?,
        z1: up(b.norm_inf()).finite()?,
        z2: up(z2.hi()).finite()?,
        a_norm,
    })
}

/// Prove that `∇V` has a unique zero near `xbar` and classify it.
pub fn validate_zero(p: &MBParams, xbar: [f64; 2], r_star: f64) -> Result<CriticalPoint> {
    let a = linalg::inverse(&point_hess(p, xbar)?)?;
    let bounds = zero_bounds(p, xbar, &a, r_star)?;
    let cert = certify_affine(bounds.y, bounds.z1, bounds.z2, r_star);
    if !cert.success {
        return Err(Error::validation(
            "critical point",
            format!(
                "at {xbar:?}: Y = {:e}, Z1 = {:e}, Z2 = {:e}: {}",
                bounds.y.hi(),
                bounds.z1.hi(),
                bounds.z2.hi(),
                cert.diagnostic.clone().unwrap_or_default()
            ),
        ));
    }
    let r = cert.radius;
    let (x, y) = (Interval::point(xbar[0]).inflate(r), Interval::point(xbar[1]).inflate(r));
    let kind = classify(p, x, y)?;
    let ext = lift(p, x, y)?;
    Ok(CriticalPoint {
        center: xbar.to_vec(),
        location: IVector::new(vec![x, y]),
        kind,
        radius: r,
        extended_point: IVector::new(ext.to_vec()),
        bounds,
        certificate: cert,
        eigen: None,
    })
}

/// Signature of the Hessian over a box via its trace and determinant.
pub fn classify(p: &MBParams, x: Interval, y: Interval) -> Result<CriticalKind> {
    let h = hess_v(p, x, y)?;
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let tr = h[0][0] + h[1][1];
    if det.lo() > 0.0 && tr.lo() > 0.0 {
        Ok(CriticalKind::Minimum)
    } else if det.hi() < 0.0 {
        Ok(CriticalKind::Saddle)
    } else {
        Err(Error::validation(
            "classification",
            format!("Hessian signature undecided: det = {det}, trace = {tr}"),
        ))
    }
}
