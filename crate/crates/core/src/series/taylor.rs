use serde::{Deserialize, Serialize};

use super::ring::{Ring, Scalar};
use crate::interval::{IVector, Interval};

/// Scalar power series `sum_n c_n theta^n`, stored densely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Taylor<S> {
    pub c: Vec<S>,
}

impl<S: Scalar> Taylor<S> {
    pub fn new(c: Vec<S>) -> Self {
        Taylor { c }
    }

    pub fn zeros(n: usize) -> Self {
        Taylor { c: vec![S::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn get(&self, n: usize) -> S {
        self.c.get(n).copied().unwrap_or_else(S::zero)
    }

    pub fn truncate(mut self, n: usize) -> Self {
        self.c.truncate(n);
        self
    }

    /// Horner evaluation.
    pub fn eval(&self, theta: S) -> S {
        self.c.iter().rev().fold(S::zero(), |acc, &a| acc * theta + a)
    }
}

/// `(u ⋆ v)_n = sum_{m=0}^{n} u_m v_{n-m}` for `n < out_len`.
pub fn cauchy_product<S: Scalar>(u: &[S], v: &[S], out_len: usize) -> Vec<S> {
    let mut out = vec![S::zero(); out_len];
    for (i, &a) in u.iter().enumerate().take(out_len) {
        for (j, &b) in v.iter().enumerate().take(out_len - i) {
            out[i + j] = out[i + j] + a * b;
        }
    }
    out
}

impl<S: Scalar> Ring for Taylor<S> {
    type S = S;

    fn constant(c: S) -> Self {
        Taylor { c: vec![c] }
    }

    fn add(&self, o: &Self) -> Self {
        zip_pad(&self.c, &o.c, |a, b| a + b)
    }

    fn sub(&self, o: &Self) -> Self {
        zip_pad(&self.c, &o.c, |a, b| a - b)
    }

    fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return Taylor { c: Vec::new() };
        }
        let n = self.c.len() + o.c.len() - 1;
        Taylor {
            c: cauchy_product(&self.c, &o.c, n),
        }
    }

    fn scale(&self, k: S) -> Self {
        Taylor {
            c: self.c.iter().map(|&a| a * k).collect(),
        }
    }
}

pub(crate) fn zip_pad<S: Scalar, T: From<Vec<S>>>(a: &[S], b: &[S], f: impl Fn(S, S) -> S) -> T {
    let n = a.len().max(b.len());
    let get = |v: &[S], i: usize| v.get(i).copied().unwrap_or_else(S::zero);
    T::from((0..n).map(|i| f(get(a, i), get(b, i))).collect())
}

impl<S> From<Vec<S>> for Taylor<S> {
    fn from(c: Vec<S>) -> Self {
        Taylor { c }
    }
}

/// Six-component Taylor coefficients `p_n` of a curve in the extended phase space.
pub type TaylorCoeffs<S = Interval> = [Taylor<S>; 6];

/// Enclosure of `p(theta) = sum_n p_n theta^n`.
pub fn eval_taylor(p: &TaylorCoeffs, theta: Interval) -> IVector {
    p.iter().map(|comp| comp.eval(theta)).collect()
}
