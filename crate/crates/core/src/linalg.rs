//! Floating-point linear algebra (via nalgebra) and small verified solves.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::interval::{rounding, IMatrix, IVector, Interval};

/// Floating-point inverse.
pub fn inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("matrix is singular to working precision".into()))
}

/// Floating-point solve `m x = b`.
pub fn solve(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    m.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Numerical("singular linear system".into()))
}

/// Real parts of the eigenvalues whose imaginary part is negligible, plus all
/// eigenvalues as `(re, im)` pairs.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<(f64, f64)> {
    m.clone()
        .complex_eigenvalues()
        .iter()
        .map(|c| (c.re, c.im))
        .collect()
}

/// Unit vector spanning the numerical null space of `m - lambda I`.
pub fn eigenvector(m: &DMatrix<f64>, lambda: f64) -> Result<DVector<f64>> {
    let n = m.nrows();
    let shifted = m - DMatrix::identity(n, n) * lambda;
    let svd = shifted.svd(false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, &s)| if s < best.1 { (i, s) } else { best });
    Ok(vt.row(k).transpose().into_owned())
}

/// Rigorous enclosure of `M^{-1} b` for every `M` and `b` in the given enclosures.
///
/// With `R ≈ mid(M)^{-1}` and `E = I - R M`, `‖E‖ < 1` proves invertibility;
/// the solution lies in `x̃ + R(b - M x̃) ± ‖E‖ ‖R(b - M x̃)‖ / (1 - ‖E‖)`.
pub fn verified_solve(m: &IMatrix, b: &IVector) -> Result<IVector> {
    let r = inverse(&m.mid())?;
    let e = residual_norm(m, &r)?;
    solve_with(m, b, &r, e)
}

/// Rigorous enclosure of `M^{-1}` (column by column).
pub fn verified_inverse(m: &IMatrix) -> Result<IMatrix> {
    let n = m.rows();
    let r = inverse(&m.mid())?;
    let e = residual_norm(m, &r)?;
    let mut out = IMatrix::zeros(n, n);
    for j in 0..n {
        let mut ej = IVector::zeros(n);
        ej[j] = Interval::ONE;
        let col = solve_with(m, &ej, &r, e)?;
        for i in 0..n {
            out[(i, j)] = col[i];
        }
    }
    Ok(out)
}

/// Upper bound of `‖I - R M‖_∞`, failing unless it is below one.
pub fn residual_norm(m: &IMatrix, r: &DMatrix<f64>) -> Result<f64> {
    let n = m.rows();
    let rm = IMatrix::from_dmatrix(r).mat_mat(m)?;
    let e = IMatrix::identity(n).sub(&rm)?;
    let norm = e.norm_inf();
    if !(norm < 1.0) {
        return Err(Error::Numerical(format!(
            "approximate inverse not contracting: ‖I - RM‖ <= {norm:e}"
        )));
    }
    Ok(norm)
}

fn solve_with(m: &IMatrix, b: &IVector, r: &DMatrix<f64>, e: f64) -> Result<IVector> {
    let x0 = r * b.to_dvector();
    let x0i = IVector::from_f64(x0.as_slice());
    let res = b.sub(&m.mat_vec(&x0i)?)?;
    let d = IMatrix::from_dmatrix(r).mat_vec(&res)?;
    let num = rounding::mul_up(e, d.norm_inf());
    let delta = rounding::div_up(num, rounding::sub_down(1.0, e));
    Ok((0..b.len())
        .map(|i| (x0i[i] + d[i]).inflate(delta))
        .collect())
}

/// Upper bound of the max-row-sum norm of a point matrix.
pub fn norm_inf_upper(m: &DMatrix<f64>) -> f64 {
    (0..m.nrows())
        .map(|i| {
            let mut s = rounding::UpSum::default();
            for j in 0..m.ncols() {
                s.add(m[(i, j)].abs());
            }
            s.0
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verified_solve_contains_solution() {
        let m = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.3, -1.0, 5.0, 0.2, 0.1, 0.7, 3.0]);
        let b = DVector::from_row_slice(&[1.0, -2.0, 0.5]);
        let x = solve(&m, &b).unwrap();
        let xi = verified_solve(&IMatrix::from_dmatrix(&m), &IVector::from_f64(b.as_slice())).unwrap();
        for i in 0..3 {
            assert!((xi[i].mid() - x[i]).abs() < 1e-14);
            assert!(xi[i].width() < 1e-13);
        }
        let inv = verified_inverse(&IMatrix::from_dmatrix(&m)).unwrap();
        let prod = inv.mat_mat(&IMatrix::from_dmatrix(&m)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(prod[(i, j)].contains(if i == j { 1.0 } else { 0.0 }));
            }
        }
    }

    #[test]
    fn singular_matrices_fail() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(verified_inverse(&IMatrix::from_dmatrix(&m)).is_err());
    }

    #[test]
    fn eigen_of_diagonal() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let mut ev: Vec<f64> = eigenvalues(&m).iter().map(|e| e.0).collect();
        ev.sort_by(f64::total_cmp);
        assert_eq!(ev, vec![1.0, 2.0]);
        let v = eigenvector(&m, 2.0).unwrap();
        assert!((v[0].abs() - 1.0).abs() < 1e-14 && v[1].abs() < 1e-14);
    }
}
