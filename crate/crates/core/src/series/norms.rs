//! Weighted ℓ¹ norms of coefficient sequences.
//!
//! Each norm is returned as an interval enclosing the range of the norm over
//! all sequences inside the coefficient enclosures; callers use `.hi()`.

use super::ring::Scalar;
use super::taylor::TaylorCoeffs;
use crate::error::{Error, Result};
use crate::interval::Interval;

/// `sum_n |u_n|`.
pub fn norm_l1<S: Scalar>(u: &[S]) -> Interval {
    u.iter().map(|x| x.to_interval().abs()).sum()
}

/// Chebyshev weights `1, 2 nu, 2 nu^2, ...` of length `n`.
pub fn cheb_weights(nu: f64, n: usize) -> Vec<Interval> {
    let nu = Interval::point(nu);
    let mut w = Vec::with_capacity(n);
    let mut p = Interval::ONE;
    for k in 0..n {
        if k == 0 {
            w.push(Interval::ONE);
        } else {
            p = p * nu;
            w.push(p.scale(2.0));
        }
    }
    w
}

/// `|u_0| + 2 sum_{k>=1} |u_k| nu^k`.
pub fn norm_cheb<S: Scalar>(u: &[S], nu: f64) -> Interval {
    let w = cheb_weights(nu, u.len());
    u.iter()
        .zip(&w)
        .map(|(x, wk)| x.to_interval().abs() * *wk)
        .sum()
}

/// `sum_i sum_n |p_n^(i)| eta_i`.
pub fn norm_taylor(p: &TaylorCoeffs, eta: &[f64]) -> Result<Interval> {
    if eta.len() != 6 {
        return Err(Error::shape(6, eta.len()));
    }
    Ok(p
        .iter()
        .zip(eta)
        .map(|(comp, &w)| norm_l1(&comp.c) * w)
        .sum())
}

/// Euclidean normalization of a positive weight vector.
pub fn normalize_euclidean(eta: &[f64]) -> Vec<f64> {
    let n = eta.iter().map(|x| x * x).sum::<f64>().sqrt();
    eta.iter().map(|x| x / n).collect()
}
