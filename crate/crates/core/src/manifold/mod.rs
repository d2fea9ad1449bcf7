//! One-dimensional unstable manifolds of saddles via the parameterization
//! method: `p(0) = X0`, `p'(0) = γ v`, `λ θ p'(θ) = f(p(θ))`.
//!
//! The first `N` Taylor coefficients are computed recursively in interval
//! arithmetic; the tail `(p_n)_{n >= N}` is a fixed point of
//! `T_n(p̌) = M_n^{-1} f_n(π_{n-1} p)` with `M_n = nλ I - Df(X0)`, and is
//! enclosed with radii polynomials in the space with norm
//! `sum_i sum_n |p_n^(i)| η_i`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::contraction::{certify, RadiiBounds, ValidationCertificate};
use crate::equilibria::{CriticalKind, CriticalPoint, QData};
use crate::error::{Error, Result};
use crate::interval::{hex_f64, rounding, IMatrix, IVector, Interval};
use crate::linalg;
use crate::ode;
use crate::potential::{field, jacobian, multi_indices, FieldCoeffs, Field, MBParams, MultiIndex};
use crate::series::{norm_l1, normalize_euclidean, perron_weights, Taylor, TaylorCoeffs};

/// Target window for the size of the last computed coefficient when tuning `γ`.
pub const GAMMA_TARGET: (f64, f64) = (1e-16, 1e-13);
pub const GAMMA_TUNING_STEPS: usize = 8;

/// A polynomial vector field on `R^6` acting on Taylor series.
pub trait SeriesField {
    /// Polynomial degree of the field.
    fn degree(&self) -> usize;

    /// Nonzero partial derivatives of order `k` along `p`, as
    /// `(component, multi-index, series)`.
    fn partials(&self, p: &TaylorCoeffs, k: u8) -> Vec<(usize, MultiIndex, Taylor<Interval>)>;

    /// `f(p)` as six series.
    fn value(&self, p: &TaylorCoeffs) -> Vec<Taylor<Interval>> {
        let mut out = vec![Taylor::zeros(0); 6];
        for (c, _, s) in self.partials(p, 0) {
            out[c] = s;
        }
        out
    }
}

/// The lifted Müller-Brown field.
#[derive(Clone, Debug)]
pub struct MBField(pub FieldCoeffs<Interval>);

impl MBField {
    pub fn new(p: &MBParams) -> Self {
        MBField(p.field_coeffs())
    }
}

impl SeriesField for MBField {
    fn degree(&self) -> usize {
        4
    }

    fn partials(&self, p: &TaylorCoeffs, k: u8) -> Vec<(usize, MultiIndex, Taylor<Interval>)> {
        let fld = Field::new(&self.0, p);
        let mut out = Vec::new();
        for alpha in multi_indices(k) {
            for c in 0..6 {
                if let Some(s) = fld.partial(c, &alpha) {
                    out.push((c, alpha, s));
                }
            }
        }
        out
    }

    fn value(&self, p: &TaylorCoeffs) -> Vec<Taylor<Interval>> {
        field(&self.0, p).to_vec()
    }
}

/// Bound `𝔐_N >= sup_{n >= N} |M_n^{-1}|_η` and its ingredients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MnBound {
    pub n: usize,
    #[serde(with = "hex_f64")]
    pub value: f64,
    /// Upper bound of `|Df(X0)|_η`.
    #[serde(with = "hex_f64")]
    pub df_norm: f64,
    /// `1 / (Nλ - |Df|_η)` when `Nλ > |Df|_η`.
    pub neumann: Option<f64>,
    /// Bound through the validated diagonalization, when available.
    pub diagonal: Option<f64>,
    /// Upper bound of `|S|_η |S^{-1}|_η`.
    pub kappa: Option<f64>,
}

/// `𝔐_N` from the Neumann series and, if given, the diagonalization of
/// `Df(X0)`. Both bounds decrease in `n`, so their values at `N` dominate
/// every `n >= N`.
pub fn bound_mn(df: &IMatrix, lambda: Interval, q: Option<&QData>, eta: &[f64], n: usize) -> Result<MnBound> {
    if !(lambda.lo() > 0.0) {
        return Err(Error::Domain(format!("unstable eigenvalue {lambda} is not positive")));
    }
    let df_norm = df.weighted_op_norm(eta)?.hi();
    let nl = rounding::mul_down(n as f64, lambda.lo());
    let gap = rounding::sub_down(nl, df_norm);
    let neumann = (gap > 0.0).then(|| rounding::div_up(1.0, gap));
    let (diagonal, kappa) = match q {
        Some(q) if n >= 2 => (q.inverse_bound(n, lambda, eta)?, Some(q.kappa(eta)?)),
        _ => (None, None),
    };
    let value = match (neumann, diagonal) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => {
            return Err(Error::validation(
                "manifold",
                format!("no bound on |M_n^-1| for n = {n}: nλ <= |Df|_η = {df_norm:e} and no diagonalization"),
            ))
        }
    };
    Ok(MnBound {
        n,
        value,
        df_norm,
        neumann,
        diagonal,
        kappa,
    })
}

/// `M_n = nλ I - Df`.
fn m_matrix(df: &IMatrix, lambda: Interval, n: usize) -> IMatrix {
    let nl = lambda.scale(n as f64);
    IMatrix::from_fn(6, 6, |i, j| if i == j { nl - df[(i, j)] } else { -df[(i, j)] })
}

/// Recursion `M_n p_n = f_n(π_{n-1} p)` over interval inputs.
fn recursion<F: SeriesField>(
    field: &F,
    x0: &[Interval; 6],
    df: &IMatrix,
    lambda: Interval,
    v: &IVector,
    gamma: f64,
    order: usize,
) -> Result<TaylorCoeffs> {
    let g = Interval::point(gamma);
    let mut p: TaylorCoeffs = std::array::from_fn(|i| Taylor::new(vec![x0[i], v[i] * g]));
    for n in 2..order {
        let f = field.value(&p);
        let rhs: IVector = f.iter().map(|s| s.get(n)).collect();
        let pn = linalg::verified_solve(&m_matrix(df, lambda, n), &rhs).map_err(|e| {
            Error::validation("manifold", format!("M_{n} not verifiably invertible: {e}"))
        })?;
        for i in 0..6 {
            p[i].c.push(pn[i]);
        }
    }
    Ok(p)
}

/// `Df` at a point, from the first partials of a constant series.
fn jacobian_at<F: SeriesField>(field: &F, x: &[Interval; 6]) -> IMatrix {
    let p: TaylorCoeffs = std::array::from_fn(|i| Taylor::new(vec![x[i]]));
    let mut df = IMatrix::zeros(6, 6);
    for (c, alpha, s) in field.partials(&p, 1) {
        let j = alpha.iter().position(|&a| a == 1).unwrap();
        df[(c, j)] = s.get(0);
    }
    df
}

/// Enclosures of `∂p_n / ∂c` over the input box, `c = (X0, λ, v)`, from
/// `M_n ∂p_n = sum_{k<n} Df(π_n p)_{n-k} ∂p_k - n (∂λ) p_n`.
fn sensitivities<F: SeriesField>(field: &F, p: &TaylorCoeffs, df: &IMatrix, lambda: Interval, gamma: f64) -> Result<Vec<[IVector; 13]>> {
    let order = p[0].len();
    let zero = || IVector::zeros(6);
    let mut d: Vec<[IVector; 13]> = Vec::with_capacity(order);
    d.push(std::array::from_fn(|j| {
        let mut e = zero();
        if j < 6 {
            e[j] = Interval::ONE;
        }
        e
    }));
    d.push(std::array::from_fn(|j| {
        let mut e = zero();
        if j >= 7 {
            e[j - 7] = Interval::point(gamma);
        }
        e
    }));
    for n in 2..order {
        let pn: TaylorCoeffs = std::array::from_fn(|i| Taylor::new(p[i].c[..=n].to_vec()));
        let mut jac = vec![IMatrix::zeros(6, 6); n + 1];
        for (c, alpha, s) in field.partials(&pn, 1) {
            let j = alpha.iter().position(|&a| a == 1).unwrap();
            for (k, m) in jac.iter_mut().enumerate() {
                m[(c, j)] = s.get(k);
            }
        }
        let mn = m_matrix(df, lambda, n);
        let mut row: [IVector; 13] = std::array::from_fn(|_| zero());
        for (j, out) in row.iter_mut().enumerate() {
            let mut rhs = zero();
            for (k, dk) in d.iter().enumerate() {
                for c in 0..6 {
                    for l in 0..6 {
                        rhs[c] += jac[n - k][(c, l)] * dk[j][l];
                    }
                }
            }
            if j == 6 {
                for c in 0..6 {
                    rhs[c] -= p[c].c[n].scale(n as f64);
                }
            }
            *out = linalg::verified_solve(&mn, &rhs)?;
        }
        d.push(row);
    }
    Ok(d)
}

/// Taylor coefficients `p_0 .. p_{order-1}` of the parameterization.
///
/// The direct interval recursion loses the correlations between `X0`, `λ`
/// and `v`; it is intersected with the mean-value form
/// `p_n(ĉ) + ∂p_n/∂c (c - ĉ)` around the midpoint inputs `ĉ`.
pub fn compute_coefficients<F: SeriesField>(
    field: &F,
    x0: &[Interval; 6],
    df: &IMatrix,
    lambda: Interval,
    v: &IVector,
    gamma: f64,
    order: usize,
) -> Result<TaylorCoeffs> {
    if order < 2 {
        return Err(Error::Domain(format!("order {order} must be at least 2")));
    }
    let mut p = recursion(field, x0, df, lambda, v, gamma, order)?;
    let mid = |x: Interval| Interval::point(x.mid());
    let x0c = x0.map(mid);
    let vc: IVector = v.iter().map(|x| mid(*x)).collect();
    let center = recursion(field, &x0c, &jacobian_at(field, &x0c), mid(lambda), &vc, gamma, order)?;
    let d = sensitivities(field, &p, df, lambda, gamma)?;
    let dev: [Interval; 13] = std::array::from_fn(|j| match j {
        0..=5 => x0[j] - x0c[j],
        6 => lambda - mid(lambda),
        _ => v[j - 7] - vc[j - 7],
    });
    for (n, dn) in d.iter().enumerate() {
        for i in 0..6 {
            let mut e = center[i].c[n];
            for (j, dj) in dn.iter().enumerate() {
                e += dj[i] * dev[j];
            }
            p[i].c[n] = p[i].c[n].intersect(e).ok_or_else(|| {
                Error::Numerical(format!("disjoint enclosures of coefficient {n}, component {i}"))
            })?;
        }
    }
    Ok(p)
}

/// Upper bound of `|(1/η^α) sum_i ‖u_i‖ η_i|` maximized over multi-indices.
fn weighted_max(norms: &BTreeMap<MultiIndex, Vec<Interval>>, eta: &[f64]) -> Interval {
    let mut best = Interval::ZERO;
    for (alpha, per_comp) in norms {
        let s: Interval = per_comp.iter().zip(eta).map(|(n, &w)| *n * w).sum();
        let mut denom = Interval::ONE;
        for (j, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                denom = denom * eta[j];
            }
        }
        best = best.max(s.div(denom).unwrap_or(Interval::ENTIRE));
    }
    best
}

/// `Y`, `Z1`, ..., `Z4` for the tail operator around `p̌ = 0`.
pub fn bounds_y_z<F: SeriesField>(
    field: &F,
    coeffs: &TaylorCoeffs,
    df: &IMatrix,
    lambda: Interval,
    eta: &[f64],
    mn: &MnBound,
) -> Result<RadiiBounds> {
    let order = coeffs[0].len();
    let m = Interval::point(mn.value);

    // Y: the residual f_n(p̂) vanishes beyond degree * (N - 1).
    let f = field.value(coeffs);
    let mut y = Interval::ZERO;
    for n in order..=field.degree() * (order - 1) {
        let rhs: IVector = f.iter().map(|s| s.get(n)).collect();
        if rhs.iter().all(|v| v.lo() == 0.0 && v.hi() == 0.0) {
            continue;
        }
        let t = linalg::verified_solve(&m_matrix(df, lambda, n), &rhs)?;
        y += Interval::point(t.weighted_norm(eta)?);
    }

    // Z1: coefficient 0 of D_j f(p̂) does not act on the tail.
    let mut d1 = IMatrix::zeros(6, 6);
    for (c, alpha, s) in field.partials(coeffs, 1) {
        let j = alpha.iter().position(|&a| a == 1).unwrap();
        d1[(c, j)] = norm_l1(s.c.get(1..).unwrap_or(&[]));
    }
    let z1 = m * d1.weighted_op_norm(eta)?;

    let mut zk = [Interval::ZERO; 3];
    for k in 2..=4u8 {
        let mut norms: BTreeMap<MultiIndex, Vec<Interval>> = BTreeMap::new();
        for (c, alpha, s) in field.partials(coeffs, k) {
            norms.entry(alpha).or_insert_with(|| vec![Interval::ZERO; 6])[c] = norm_l1(&s.c);
        }
        zk[k as usize - 2] = m * weighted_max(&norms, eta);
    }
    let up = |v: Interval| Interval::point(v.hi());
    Ok(RadiiBounds {
        y: up(y),
        z0: Interval::ZERO,
        z1: up(z1),
        z2: up(zk[0]),
        z3: up(zk[1]),
        z4: up(zk[2]),
    })
}

/// Outcome of the tail validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifoldValidation {
    /// `sum_i sum_{n >= N} |p_n^(i)| η_i <= radius`.
    #[serde(with = "hex_f64")]
    pub radius: f64,
    pub bounds: RadiiBounds,
    pub mn: MnBound,
    pub certificate: ValidationCertificate,
}

/// A truncated parameterization of the unstable manifold of a saddle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifoldParam {
    #[serde(with = "hex_f64::vec")]
    pub saddle: Vec<f64>,
    pub x0: IVector,
    pub lambda: Interval,
    pub v: IVector,
    #[serde(with = "hex_f64")]
    pub gamma: f64,
    pub order: usize,
    #[serde(with = "hex_f64::vec")]
    pub eta: Vec<f64>,
    pub coeffs: TaylorCoeffs,
    pub validation: Option<ManifoldValidation>,
}

impl ManifoldParam {
    pub fn radius(&self) -> Option<f64> {
        self.validation.as_ref().map(|v| v.radius)
    }

    /// Enclosure of `p̂(θ)` (without the tail).
    pub fn eval(&self, theta: Interval) -> IVector {
        crate::series::eval_taylor(&self.coeffs, theta)
    }

    /// Enclosure of the true `p(θ)` for `θ ∈ [-1, 1]`: `p̂(θ) ± r̄ / η_i`.
    pub fn eval_with_tail(&self, theta: Interval) -> Result<IVector> {
        let r = self
            .radius()
            .ok_or_else(|| Error::validation("manifold", "parameterization has not been validated"))?;
        let c = self.eval(theta);
        Ok((0..6)
            .map(|i| c[i].inflate(rounding::div_up(r, self.eta[i])))
            .collect())
    }

    /// Midpoint evaluation of `p̂(θ)`.
    pub fn eval_point(&self, theta: f64) -> [f64; 6] {
        std::array::from_fn(|i| {
            self.coeffs[i]
                .c
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * theta + c.mid())
        })
    }

    /// `max_i |p_{N-1}^(i)|`.
    pub fn last_coefficient(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|s| s.c.last().map_or(0.0, |c| c.mag()))
            .fold(0.0, f64::max)
    }
}

/// `|Df(X0)|` entrywise upper bounds.
pub fn df_at(p: &MBParams, x0: &[Interval; 6]) -> IMatrix {
    let j = jacobian(&p.field_coeffs::<Interval>(), x0);
    IMatrix::from_fn(6, 6, |i, k| j[i][k])
}

/// Weights minimizing `|Df(X0)|_η`: the Perron vector of `|Df(X0)|`, unit
/// in the Euclidean norm.
pub fn manifold_weights(df: &IMatrix) -> Result<Vec<f64>> {
    let mag: DMatrix<f64> = df.mag();
    let (eta, _) = perron_weights(&mag)?;
    Ok(normalize_euclidean(&eta))
}

fn eigen_of(saddle: &CriticalPoint) -> Result<&crate::equilibria::EigenData> {
    if saddle.kind != CriticalKind::Saddle {
        return Err(Error::Domain("unstable manifolds are computed at saddles".into()));
    }
    saddle
        .eigen
        .as_ref()
        .ok_or_else(|| Error::Domain("saddle has no validated eigen data".into()))
}

/// Compute `p̂ = (p_0, ..., p_{N-1})` at a saddle with validated eigen data.
pub fn compute_parameterization(p: &MBParams, saddle: &CriticalPoint, gamma: f64, order: usize) -> Result<ManifoldParam> {
    if !(gamma.is_finite() && gamma != 0.0) {
        return Err(Error::Domain(format!("invalid scaling {gamma}")));
    }
    let eig = eigen_of(saddle)?;
    let x0 = saddle.extended();
    let df = df_at(p, &x0);
    let lambda = eig.unstable.lambda;
    let coeffs = compute_coefficients(&MBField::new(p), &x0, &df, lambda, &eig.unstable.v, gamma, order)?;
    Ok(ManifoldParam {
        saddle: saddle.center.clone(),
        x0: saddle.extended_point.clone(),
        lambda,
        v: eig.unstable.v.clone(),
        gamma,
        order,
        eta: manifold_weights(&df)?,
        coeffs,
        validation: None,
    })
}

/// Rescale `γ` until the last coefficient lands in [`GAMMA_TARGET`], using
/// `p_n(γ) = γ^n p_n(1)` to aim at the geometric middle of the window.
pub fn tune_gamma(p: &MBParams, saddle: &CriticalPoint, gamma0: f64, order: usize) -> Result<f64> {
    let target = (GAMMA_TARGET.0 * GAMMA_TARGET.1).sqrt();
    let mut gamma = gamma0;
    for _ in 0..GAMMA_TUNING_STEPS {
        let last = compute_parameterization(p, saddle, gamma, order)?.last_coefficient();
        if (GAMMA_TARGET.0..=GAMMA_TARGET.1).contains(&last) {
            break;
        }
        if !(last > 0.0 && last.is_finite()) {
            return Err(Error::Numerical(format!("last coefficient {last:e} at γ = {gamma}")));
        }
        gamma *= (target / last).powf(1.0 / (order - 1) as f64);
    }
    Ok(gamma)
}

/// Validate the tail of `param` with the field and diagonalization data.
pub fn validate_with<F: SeriesField>(
    field: &F,
    param: &ManifoldParam,
    df: &IMatrix,
    q: Option<&QData>,
) -> Result<ManifoldParam> {
    let mn = bound_mn(df, param.lambda, q, &param.eta, param.order)?;
    let bounds = bounds_y_z(field, &param.coeffs, df, param.lambda, &param.eta, &mn)?;
    let cert = certify(&bounds);
    if !cert.success {
        return Err(Error::validation(
            "manifold",
            format!(
                "Y = {:e}, Z1 = {:e}, Z2 = {:e}, Z3 = {:e}, Z4 = {:e}, 𝔐_N = {:e}: {}",
                bounds.y.hi(),
                bounds.z1.hi(),
                bounds.z2.hi(),
                bounds.z3.hi(),
                bounds.z4.hi(),
                mn.value,
                cert.diagnostic.clone().unwrap_or_default()
            ),
        ));
    }
    let mut out = param.clone();
    out.validation = Some(ManifoldValidation {
        radius: cert.radius,
        bounds,
        mn,
        certificate: cert,
    });
    Ok(out)
}

/// Validate a Müller-Brown parameterization computed at `saddle`.
pub fn validate_manifold(p: &MBParams, saddle: &CriticalPoint, param: &ManifoldParam) -> Result<ManifoldParam> {
    let eig = eigen_of(saddle)?;
    let df = df_at(p, &saddle.extended());
    validate_with(&MBField::new(p), param, &df, eig.q.as_ref())
}

/// Non-rigorous check of `φ_t(p(θ)) = p(e^{λt} θ)`: max-norm distance after
/// integrating the lifted field for time `t`.
pub fn conjugacy_check(p: &MBParams, param: &ManifoldParam, t: f64, theta: f64) -> Result<f64> {
    let coeffs = p.field_coeffs::<f64>();
    let start = param.eval_point(theta);
    let traj = ode::integrate(|x| field(&coeffs, &to6(x)).to_vec(), &start, 0.0, t, ode::DEFAULT_TOL)?;
    let target = param.eval_point((param.lambda.mid() * t).exp() * theta);
    Ok(traj
        .last()
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

fn to6(x: &[f64]) -> [f64; 6] {
    std::array::from_fn(|i| x[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{find_zero, saddle_eigen, validate_zero, DEFAULT_R_STAR};

    fn saddle(guess: [f64; 2]) -> (MBParams, CriticalPoint) {
        let p = MBParams::default();
        let z = find_zero(&p, guess).unwrap();
        let mut cp = validate_zero(&p, z, DEFAULT_R_STAR).unwrap();
        cp.eigen = Some(saddle_eigen(&p, &cp).unwrap());
        (p, cp)
    }

    #[test]
    fn neumann_and_diagonal_formulas() {
        let half = IMatrix::from_fn(6, 6, |i, j| Interval::point(if i == j { 0.5 } else { 0.0 }));
        let mb = bound_mn(&half, Interval::ONE, None, &[1.0; 6], 1).unwrap();
        assert_eq!(mb.value, 2.0);
        let diag = [1.0, -1.0, 0.0, 0.0, 0.0, 0.0];
        let df = IMatrix::from_fn(6, 6, |i, j| Interval::point(if i == j { diag[i] } else { 0.0 }));
        let q = crate::equilibria::validate_q_matrix(&df, &DMatrix::identity(6, 6), &diag).unwrap();
        let mb = bound_mn(&df, Interval::ONE, Some(&q), &[1.0; 6], 2).unwrap();
        assert_eq!(mb.value, 1.0);
    }

    #[test]
    fn saddle_one_manifold_validates() {
        let (p, cp) = saddle([-0.8, 0.6]);
        let param = compute_parameterization(&p, &cp, 5.0, 20).unwrap();
        assert!(param.last_coefficient() < 1e-13, "{}", param.last_coefficient());
        let v = validate_manifold(&p, &cp, &param).unwrap();
        let r = v.radius().unwrap();
        assert!(r <= 1e-15, "radius {r}");
    }

    #[test]
    fn conjugacy_holds_numerically() {
        let (p, cp) = saddle([-0.8, 0.6]);
        let param = compute_parameterization(&p, &cp, 5.0, 20).unwrap();
        assert!(conjugacy_check(&p, &param, -1e-3, 1.0).unwrap() <= 1e-8);
        assert!(conjugacy_check(&p, &param, -1e-3, 0.0).unwrap() <= 1e-12);
    }
}
