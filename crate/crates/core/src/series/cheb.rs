use serde::{Deserialize, Serialize};

use super::ring::{Ring, Scalar};
use super::taylor::zip_pad;

/// Chebyshev series `u_0 + 2 sum_{k>=1} u_k T_k(t)` on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cheb<S> {
    pub c: Vec<S>,
}

impl<S: Scalar> Cheb<S> {
    pub fn new(c: Vec<S>) -> Self {
        Cheb { c }
    }

    pub fn zeros(n: usize) -> Self {
        Cheb { c: vec![S::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn get(&self, k: usize) -> S {
        self.c.get(k).copied().unwrap_or_else(S::zero)
    }

    /// Values at `t = -1` and `t = +1`.
    pub fn endpoints(&self) -> (S, S) {
        let two = S::from_f64(2.0);
        let mut left = self.get(0);
        let mut right = self.get(0);
        for (k, &a) in self.c.iter().enumerate().skip(1) {
            let t = two * a;
            right = right + t;
            left = if k % 2 == 0 { left + t } else { left - t };
        }
        (left, right)
    }
}

impl Cheb<f64> {
    /// Clenshaw evaluation at `t` in `[-1, 1]`.
    pub fn eval(&self, t: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &a in self.c.iter().skip(1).rev() {
            let b0 = 2.0 * a + 2.0 * t * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.get(0) + t * b1 - b2
    }
}

/// Symmetric convolution `(u * v)_k = sum_{l in Z} u_|l| v_|k-l|` for `k < out_len`.
pub fn cheb_convolution<S: Scalar>(u: &[S], v: &[S], out_len: usize) -> Vec<S> {
    let mut out = vec![S::zero(); out_len];
    let two = S::from_f64(2.0);
    for (i, &a) in u.iter().enumerate() {
        for (j, &b) in v.iter().enumerate() {
            let p = a * b;
            if i + j < out_len {
                out[i + j] = out[i + j] + p;
            }
            if i > 0 && j > 0 {
                if i == j {
                    out[0] = out[0] + two * p;
                } else {
                    let d = i.abs_diff(j);
                    if d < out_len {
                        out[d] = out[d] + p;
                    }
                }
            }
        }
    }
    out
}

impl<S: Scalar> Ring for Cheb<S> {
    type S = S;

    fn constant(c: S) -> Self {
        Cheb { c: vec![c] }
    }

    fn add(&self, o: &Self) -> Self {
        zip_pad(&self.c, &o.c, |a, b| a + b)
    }

    fn sub(&self, o: &Self) -> Self {
        zip_pad(&self.c, &o.c, |a, b| a - b)
    }

    fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return Cheb { c: Vec::new() };
        }
        let n = self.c.len() + o.c.len() - 1;
        Cheb {
            c: cheb_convolution(&self.c, &o.c, n),
        }
    }

    fn scale(&self, k: S) -> Self {
        Cheb {
            c: self.c.iter().map(|&a| a * k).collect(),
        }
    }
}

impl<S> From<Vec<S>> for Cheb<S> {
    fn from(c: Vec<S>) -> Self {
        Cheb { c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t1_squared() {
        let u = [0.0, 1.0];
        assert_eq!(cheb_convolution(&u, &u, 3), vec![2.0, 0.0, 1.0]);
        // 2T_1 * 2T_1 = 4t^2 = 2 + 2T_2: coefficient form (2, 0, 1).
        let w = Cheb::new(vec![2.0, 0.0, 1.0]);
        for t in [-1.0, -0.3, 0.0, 0.8] {
            assert!((w.eval(t) - 4.0 * t * t).abs() < 1e-14);
        }
    }

    #[test]
    fn delta_is_unit() {
        let v = [0.3, -1.0, 2.5];
        assert_eq!(cheb_convolution(&[1.0], &v, 3), v.to_vec());
    }

    #[test]
    fn endpoint_values() {
        assert_eq!(Cheb::new(vec![3.0, 0.0, 0.0]).endpoints(), (3.0, 3.0));
        assert_eq!(Cheb::new(vec![0.0, 1.0]).endpoints(), (-2.0, 2.0));
        let u = Cheb::new(vec![0.5, -0.25, 0.125, 1.0]);
        let (l, r) = u.endpoints();
        assert!((l - u.eval(-1.0)).abs() < 1e-15 && (r - u.eval(1.0)).abs() < 1e-15);
    }
}
