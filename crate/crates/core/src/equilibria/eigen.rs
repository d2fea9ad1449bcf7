//! Eigenpairs of `Df(X0)` at a saddle and a validated diagonalization.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{CriticalKind, CriticalPoint};
use crate::contraction::{certify, RadiiBounds, ValidationCertificate};
use crate::error::{Error, Result};
use crate::interval::{hex_f64, rounding, IMatrix, IVector, Interval};
use crate::linalg;
use crate::potential::{dpsi, hess_v, jacobian, MBParams};

/// Condition number `‖S‖ ‖S^{-1}‖` above which a diagonalization is rejected.
pub const MAX_CONDITION: f64 = 1e8;

/// A validated eigenpair: `λ ∈ lambda`, `v ∈ v` with `<v̂, v> = 1`;
/// `radius` is the eigenvector radius.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Eigenpair {
    pub lambda: Interval,
    pub v: IVector,
    #[serde(with = "hex_f64")]
    pub radius: f64,
    pub certificate: ValidationCertificate,
}

/// `Df(X0) = S (D + E) S^{-1}` with `S` a point matrix, `D` diagonal and `E` small.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QData {
    pub s: IMatrix,
    pub s_inv: IMatrix,
    pub e: IMatrix,
    #[serde(with = "hex_f64::vec")]
    pub diag: Vec<f64>,
}

impl QData {
    /// Upper bound of `|S|_η |S^{-1}|_η`.
    pub fn kappa(&self, eta: &[f64]) -> Result<f64> {
        let a = self.s.weighted_op_norm(eta)?.hi();
        let b = self.s_inv.weighted_op_norm(eta)?.hi();
        Ok(rounding::mul_up(a, b))
    }

    /// Upper bound of `|(n λ I - Df)^{-1}|_η`, or `None` when the perturbation
    /// `E` is not dominated by the diagonal gap.
    pub fn inverse_bound(&self, n: usize, lambda: Interval, eta: &[f64]) -> Result<Option<f64>> {
        let nl = lambda.scale(n as f64);
        let gap = self
            .diag
            .iter()
            .map(|&d| (nl - d).mig())
            .fold(f64::INFINITY, f64::min);
        let e = self.e.weighted_op_norm(eta)?.hi();
        let denom = rounding::sub_down(gap, e);
        if !(denom > 0.0) {
            return Ok(None);
        }
        Ok(Some(rounding::div_up(self.kappa(eta)?, denom)))
    }
}

/// Spectral data of the lifted field at a saddle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenData {
    pub unstable: Eigenpair,
    pub stable: Eigenpair,
    pub q: Option<QData>,
    /// Why the diagonalization was rejected, if it was.
    pub q_failure: Option<String>,
}

/// Validate an eigenpair of every matrix in `df` near `(lam_hat, v_hat)`.
///
/// Zero finding for `(κ, v) ↦ (Df v - sκ v, <v̂, v> - 1)` with `λ = sκ` and
/// `s = max(1, |λ̂|)`, so that the eigenvalue and the eigenvector get radii
/// of their natural sizes (`s r` and `r`). The map is quadratic, so
/// `Z2 = 2 s ‖A_{:, 0..n}‖` holds on all of space.
pub fn validate_matrix_eigenpair(df: &IMatrix, lam_hat: f64, v_hat: &[f64]) -> Result<Eigenpair> {
    let n = df.rows();
    if df.cols() != n || v_hat.len() != n {
        return Err(Error::shape(n, v_hat.len()));
    }
    let vh = DVector::from_row_slice(v_hat);
    let dm = df.mid();
    // Refine in floating point.
    let mut lam = lam_hat;
    let mut v = vh.clone() / vh.dot(&vh);
    for _ in 0..8 {
        let mut jac = DMatrix::zeros(n + 1, n + 1);
        let mut rhs = DVector::zeros(n + 1);
        let r = &dm * &v - &v * lam;
        for i in 0..n {
            jac[(i, 0)] = -v[i];
            for j in 0..n {
                jac[(i, j + 1)] = dm[(i, j)] - if i == j { lam } else { 0.0 };
            }
            jac[(n, i + 1)] = vh[i];
            rhs[i] = r[i];
        }
        rhs[n] = vh.dot(&v) - 1.0;
        let Ok(step) = linalg::solve(&jac, &rhs) else { break };
        lam -= step[0];
        for i in 0..n {
            v[i] -= step[i + 1];
        }
        if step.amax() <= f64::EPSILON * (1.0 + lam.abs()) {
            break;
        }
    }

    let lam_i = Interval::point(lam);
    let vi = IVector::from_f64(v.as_slice());
    let vhi = IVector::from_f64(v_hat);
    let mut f = IVector::zeros(n + 1);
    let dv = df.mat_vec(&vi)?;
    for i in 0..n {
        f[i] = dv[i] - lam_i * vi[i];
    }
    f[n] = vhi.iter().zip(vi.iter()).map(|(a, b)| *a * *b).sum::<Interval>() - 1.0;
    let scale = lam.abs().max(1.0);
    let jac = IMatrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j) {
        (true, 0) => -vi[i] * scale,
        (true, j) => df[(i, j - 1)] - if i == j - 1 { lam_i } else { Interval::ZERO },
        (false, 0) => Interval::ZERO,
        (false, j) => vhi[j - 1],
    });
    let a = linalg::inverse(&jac.mid())?;
    let ai = IMatrix::from_dmatrix(&a);
    let y = ai.mat_vec(&f)?.norm_inf();
    let z1 = IMatrix::identity(n + 1).sub(&ai.mat_mat(&jac)?)?.norm_inf();
    let a_head = a.columns(0, n).into_owned();
    let z2 = rounding::mul_up(2.0 * scale, linalg::norm_inf_upper(&a_head));
    let bounds = RadiiBounds::new(y, z1, z2, 0.0, 0.0);
    let cert = certify(&bounds);
    if !cert.success {
        return Err(Error::validation(
            "eigenpair",
            format!(
                "λ ≈ {lam}: Y = {y:e}, Z1 = {z1:e}, Z2 = {z2:e}: {}",
                cert.diagnostic.clone().unwrap_or_default()
            ),
        ));
    }
    let r = cert.radius;
    Ok(Eigenpair {
        lambda: lam_i.inflate(rounding::mul_up(scale, r)),
        v: vi.iter().map(|x| x.inflate(r)).collect(),
        radius: r,
        certificate: cert,
    })
}

/// Validate an eigenpair of `Df(X0)` for `X0` in the given enclosure.
pub fn validate_eigenpair(p: &MBParams, x0: &[Interval; 6], lam_hat: f64, v_hat: &[f64]) -> Result<Eigenpair> {
    validate_matrix_eigenpair(&df_matrix(p, x0), lam_hat, v_hat)
}

fn df_matrix(p: &MBParams, x0: &[Interval; 6]) -> IMatrix {
    let j = jacobian(&p.field_coeffs::<Interval>(), x0);
    IMatrix::from_fn(6, 6, |i, k| j[i][k])
}

/// Enclose `S^{-1}` and `E = S^{-1} Df S - diag(d)` for a numerical
/// eigenvector matrix `s`.
pub fn validate_q_matrix(df: &IMatrix, s: &DMatrix<f64>, diag: &[f64]) -> Result<QData> {
    let n = df.rows();
    if s.shape() != (n, n) || diag.len() != n {
        return Err(Error::shape(n, diag.len()));
    }
    let si = IMatrix::from_dmatrix(s);
    let s_inv = linalg::verified_inverse(&si)
        .map_err(|e| Error::validation("diagonalization", format!("eigenvector matrix: {e}")))?;
    let cond = rounding::mul_up(si.norm_inf(), s_inv.norm_inf());
    if !(cond <= MAX_CONDITION) {
        return Err(Error::validation(
            "diagonalization",
            format!("eigenvector matrix is ill-conditioned (condition number <= {cond:e})"),
        ));
    }
    let mut e = s_inv.mat_mat(&df.mat_mat(&si)?)?;
    for (i, &d) in diag.iter().enumerate() {
        e[(i, i)] = e[(i, i)] - d;
    }
    if !e.is_finite() {
        return Err(Error::validation("diagonalization", "non-finite residual".to_string()));
    }
    Ok(QData {
        s: si,
        s_inv,
        e,
        diag: diag.to_vec(),
    })
}

/// Eigenvectors of the lifted Jacobian at `X0`: the two lifts `[w; Dψ w]` of
/// eigenvectors of `-Hess V`, then four null vectors `[-G_xy^{-1} G_z e_i; e_i]`
/// from the factorization `Df(X0) = [I; Dψ] Dg`.
pub fn validate_q(p: &MBParams, cp: &CriticalPoint, lam: f64, mu: f64, v_lam: &[f64], v_mu: &[f64]) -> Result<QData> {
    let df = df_matrix(p, &cp.extended());
    let dm = df.mid();
    let gxy = dm.view((0, 0), (2, 2)).into_owned();
    let gz = dm.view((0, 2), (2, 4)).into_owned();
    let null = linalg::inverse(&gxy)? * gz;
    let mut s = DMatrix::zeros(6, 6);
    for i in 0..6 {
        s[(i, 0)] = v_lam[i];
        s[(i, 1)] = v_mu[i];
    }
    for k in 0..4 {
        s[(0, k + 2)] = -null[(0, k)];
        s[(1, k + 2)] = -null[(1, k)];
        s[(k + 2, k + 2)] = 1.0;
    }
    validate_q_matrix(&df, &s, &[lam, mu, 0.0, 0.0, 0.0, 0.0])
}

/// Unit vector with its largest component positive.
fn orient(v: &mut DVector<f64>) {
    let n = v.norm();
    *v /= n;
    let k = v.iamax();
    if v[k] < 0.0 {
        v.neg_mut();
    }
}

/// Validate both nonzero eigenpairs of `Df(X0)` at a saddle and try to
/// diagonalize it.
pub fn saddle_eigen(p: &MBParams, cp: &CriticalPoint) -> Result<EigenData> {
    if cp.kind != CriticalKind::Saddle {
        return Err(Error::Domain("eigen data is only computed at saddles".into()));
    }
    let (x, y) = (Interval::point(cp.center[0]), Interval::point(cp.center[1]));
    let h = hess_v(p, x, y)?;
    let minus_h = DMatrix::from_fn(2, 2, |i, j| -h[i][j].mid());
    let eig = SymmetricEigen::new(minus_h);
    let dp = dpsi(p, x, y)?;
    let lift_vec = |k: usize| {
        let w = eig.eigenvectors.column(k);
        let mut v = DVector::zeros(6);
        v[0] = w[0];
        v[1] = w[1];
        for j in 0..4 {
            v[j + 2] = dp[j][0].mid() * w[0] + dp[j][1].mid() * w[1];
        }
        orient(&mut v);
        v
    };
    let (ku, ks) = if eig.eigenvalues[0] > eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let (lam, mu) = (eig.eigenvalues[ku], eig.eigenvalues[ks]);
    let (vu, vs) = (lift_vec(ku), lift_vec(ks));
    let x0 = cp.extended();
    let unstable = validate_eigenpair(p, &x0, lam, vu.as_slice())?;
    let stable = validate_eigenpair(p, &x0, mu, vs.as_slice())?;
    if !(unstable.lambda.lo() > 0.0 && stable.lambda.hi() < 0.0) {
        return Err(Error::validation(
            "eigenpair",
            format!("eigenvalue signs: λ = {}, μ = {}", unstable.lambda, stable.lambda),
        ));
    }
    let vu_mid = unstable.v.mid();
    let vs_mid = stable.v.mid();
    let (q, q_failure) = match validate_q(p, cp, unstable.lambda.mid(), stable.lambda.mid(), &vu_mid, &vs_mid) {
        Ok(q) => (Some(q), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(EigenData {
        unstable,
        stable,
        q,
        q_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{find_zero, validate_zero, DEFAULT_R_STAR};

    #[test]
    fn diagonal_eigenpair_is_exact() {
        let df = IMatrix::from_dmatrix(&DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]));
        let ep = validate_matrix_eigenpair(&df, 2.0, &[1.0, 0.0]).unwrap();
        assert!(ep.lambda.contains(2.0));
        assert!(ep.radius < 1e-300);
    }

    #[test]
    fn diagonal_q_is_identity() {
        let df = IMatrix::from_dmatrix(&DMatrix::from_diagonal(&DVector::from_row_slice(&[3.0, -1.0, 0.0])));
        let q = validate_q_matrix(&df, &DMatrix::identity(3, 3), &[3.0, -1.0, 0.0]).unwrap();
        assert_eq!(q.kappa(&[1.0, 2.0, 0.5]).unwrap(), 1.0);
    }

    #[test]
    fn near_defective_is_rejected() {
        let eps = 1e-12;
        let df = IMatrix::from_dmatrix(&DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0 + eps]));
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, eps]);
        assert!(matches!(
            validate_q_matrix(&df, &s, &[1.0, 1.0 + eps]),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn saddle_one_unstable_eigenvalue() {
        let p = MBParams::default();
        let z = find_zero(&p, [-0.8, 0.6]).unwrap();
        let cp = validate_zero(&p, z, DEFAULT_R_STAR).unwrap();
        let ed = saddle_eigen(&p, &cp).unwrap();
        assert!(ed.unstable.lambda.contains(750.8626628392770), "{}", ed.unstable.lambda);
        assert!(ed.unstable.lambda.width() <= 1e-9);
        assert!(ed.q.is_some(), "{:?}", ed.q_failure);
    }
}
