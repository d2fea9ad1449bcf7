//! The quartic vector field on the extended phase space `(x, y, z_1..z_4)`.
//!
//! With `L_r,i` the derivatives of the exponents (`r = 0` for x, `r = 1` for y)
//! and `S_r = sum_i L_r,i z_i`, the field is
//! `f_1 = -S_0`, `f_2 = -S_1`, `f_{j+2} = -z_j (L_0,j S_0 + L_1,j S_1)`.
//! On the slice `z = psi(x, y)` the first two components equal `-grad V`.
//!
//! All partial derivatives are produced from a multi-index by the Leibniz
//! rule, generically over any [`Ring`], so the same code serves points,
//! intervals, Taylor and Chebyshev sequences.

use super::FieldCoeffs;
use crate::series::{Ring, Scalar};

/// Multiplicity of each of the six variables in a partial derivative.
pub type MultiIndex = [u8; 6];

/// All multi-indices of total order `k`, in lexicographic order.
pub fn multi_indices(k: u8) -> Vec<MultiIndex> {
    fn rec(pos: usize, left: u8, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if pos == 5 {
            cur[5] = left;
            out.push(*cur);
            return;
        }
        for m in (0..=left).rev() {
            cur[pos] = m;
            rec(pos + 1, left - m, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    rec(0, k, &mut [0; 6], &mut out);
    out
}

/// Multi-index of an ordered tuple of variable indices.
pub fn multi_index_of(vars: &[usize]) -> MultiIndex {
    let mut a = [0u8; 6];
    for &v in vars {
        a[v] += 1;
    }
    a
}

fn lower(alpha: &MultiIndex, v: usize) -> MultiIndex {
    let mut b = *alpha;
    b[v] -= 1;
    b
}

fn add_opt<R: Ring>(a: Option<R>, b: Option<R>) -> Option<R> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.add(&b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// The field evaluated at one argument, with the shared sums precomputed.
pub struct Field<R: Ring> {
    coeffs: FieldCoeffs<R::S>,
    z: [R; 4],
    l: [[R; 4]; 2],
    s: [R; 2],
    sx: [R; 2],
    sy: [R; 2],
}

impl<R: Ring> Field<R> {
    pub fn new(coeffs: &FieldCoeffs<R::S>, vars: &[R; 6]) -> Self {
        let (x, y) = (&vars[0], &vars[1]);
        let z: [R; 4] = std::array::from_fn(|i| vars[i + 2].clone());
        let l: [[R; 4]; 2] = std::array::from_fn(|r| {
            std::array::from_fn(|i| {
                x.scale(coeffs.cx[r][i])
                    .add(&y.scale(coeffs.cy[r][i]))
                    .sub(&R::constant(coeffs.w[r][i]))
            })
        });
        let dot = |w: &[R; 4]| -> R {
            let mut acc = w[0].mul(&z[0]);
            for i in 1..4 {
                acc = acc.add(&w[i].mul(&z[i]));
            }
            acc
        };
        let lin = |c: &[R::S; 4]| -> R {
            let mut acc = z[0].scale(c[0]);
            for i in 1..4 {
                acc = acc.add(&z[i].scale(c[i]));
            }
            acc
        };
        let s = [dot(&l[0]), dot(&l[1])];
        let sx = [lin(&coeffs.cx[0]), lin(&coeffs.cx[1])];
        let sy = [lin(&coeffs.cy[0]), lin(&coeffs.cy[1])];
        Field {
            coeffs: coeffs.clone(),
            z,
            l,
            s,
            sx,
            sy,
        }
    }

    /// `d^alpha S_r`, or `None` when it vanishes identically.
    fn ds(&self, r: usize, alpha: &MultiIndex) -> Option<R> {
        let nz: u8 = alpha[2..].iter().sum();
        let (ax, ay) = (alpha[0], alpha[1]);
        if nz > 1 || ax + ay > 1 {
            return None;
        }
        if nz == 0 {
            return Some(match (ax, ay) {
                (0, 0) => self.s[r].clone(),
                (1, 0) => self.sx[r].clone(),
                _ => self.sy[r].clone(),
            });
        }
        let i = (2..6).find(|&v| alpha[v] == 1).unwrap() - 2;
        Some(match (ax, ay) {
            (0, 0) => self.l[r][i].clone(),
            (1, 0) => R::constant(self.coeffs.cx[r][i]),
            _ => R::constant(self.coeffs.cy[r][i]),
        })
    }

    /// `d^alpha G_j` with `G_j = L_0,j S_0 + L_1,j S_1`.
    fn dg(&self, j: usize, alpha: &MultiIndex) -> Option<R> {
        let mut acc = None;
        for r in 0..2 {
            acc = add_opt(acc, self.ds(r, alpha).map(|d| self.l[r][j].mul(&d)));
            if alpha[0] > 0 {
                let c = self.coeffs.cx[r][j] * R::S::from_f64(alpha[0] as f64);
                acc = add_opt(acc, self.ds(r, &lower(alpha, 0)).map(|d| d.scale(c)));
            }
            if alpha[1] > 0 {
                let c = self.coeffs.cy[r][j] * R::S::from_f64(alpha[1] as f64);
                acc = add_opt(acc, self.ds(r, &lower(alpha, 1)).map(|d| d.scale(c)));
            }
        }
        acc
    }

    /// `d^alpha f_comp`, or `None` when it vanishes identically.
    pub fn partial(&self, comp: usize, alpha: &MultiIndex) -> Option<R> {
        let minus = R::S::from_f64(-1.0);
        if comp < 2 {
            return self.ds(comp, alpha).map(|d| d.scale(minus));
        }
        let j = comp - 2;
        let mut acc = self.dg(j, alpha).map(|d| self.z[j].mul(&d));
        if alpha[comp] > 0 {
            let c = R::S::from_f64(alpha[comp] as f64);
            acc = add_opt(acc, self.dg(j, &lower(alpha, comp)).map(|d| d.scale(c)));
        }
        acc.map(|d| d.scale(minus))
    }

    /// Like [`Field::partial`] with zero filled in.
    pub fn partial_or_zero(&self, comp: usize, alpha: &MultiIndex) -> R {
        self.partial(comp, alpha)
            .unwrap_or_else(|| R::constant(R::S::zero()))
    }

    pub fn value(&self) -> [R; 6] {
        std::array::from_fn(|c| self.partial_or_zero(c, &[0; 6]))
    }

    /// `J[i][j] = d f_i / d X_j`.
    pub fn jacobian(&self) -> [[R; 6]; 6] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut a = [0u8; 6];
                a[j] = 1;
                self.partial_or_zero(i, &a)
            })
        })
    }
}

/// `f(X)`.
pub fn field<R: Ring>(coeffs: &FieldCoeffs<R::S>, x: &[R; 6]) -> [R; 6] {
    Field::new(coeffs, x).value()
}

/// `Df(X)`.
pub fn jacobian<R: Ring>(coeffs: &FieldCoeffs<R::S>, x: &[R; 6]) -> [[R; 6]; 6] {
    Field::new(coeffs, x).jacobian()
}

/// `D^k f(X)[h_1, ..., h_k]` for `k = dirs.len()`.
pub fn tensor_action<S: Scalar + Ring<S = S>>(
    coeffs: &FieldCoeffs<S>,
    x: &[S; 6],
    dirs: &[[S; 6]],
) -> [S; 6] {
    let fld = Field::new(coeffs, x);
    let k = dirs.len();
    let mut out = [S::zero(); 6];
    let mut idx = vec![0usize; k];
    loop {
        let alpha = multi_index_of(&idx);
        let mut w = S::from_f64(1.0);
        for (d, &j) in dirs.iter().zip(&idx) {
            w = w * d[j];
        }
        for (c, o) in out.iter_mut().enumerate() {
            if let Some(v) = fld.partial(c, &alpha) {
                *o = *o + v * w;
            }
        }
        // Next tuple in 0..6^k.
        let mut p = 0;
        loop {
            if p == k {
                return out;
            }
            idx[p] += 1;
            if idx[p] < 6 {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::MBParams;

    #[test]
    fn index_counts() {
        assert_eq!(multi_indices(0).len(), 1);
        assert_eq!(multi_indices(1).len(), 6);
        assert_eq!(multi_indices(2).len(), 21);
        assert_eq!(multi_indices(3).len(), 56);
        assert_eq!(multi_indices(4).len(), 126);
        assert!(multi_indices(3).iter().all(|a| a.iter().sum::<u8>() == 3));
    }

    #[test]
    fn degrees() {
        let c = MBParams::default().field_coeffs::<f64>();
        let x = [0.1, 0.2, -3.0, 1.0, 2.0, 0.5];
        let fld = Field::new(&c, &x);
        for comp in 0..2 {
            for a in multi_indices(3) {
                assert!(fld.partial(comp, &a).is_none());
            }
        }
        for comp in 2..6 {
            for a in multi_indices(5) {
                assert!(fld.partial(comp, &a).is_none());
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let c = MBParams::default().field_coeffs::<f64>();
        let x = [-0.3, 0.7, -12.0, -30.0, -5.0, 4.0];
        let j = jacobian(&c, &x);
        for col in 0..6 {
            let h = 1e-6 * x[col].abs().max(1.0);
            let mut xp = x;
            let mut xm = x;
            xp[col] += h;
            xm[col] -= h;
            let (fp, fm) = (field(&c, &xp), field(&c, &xm));
            for row in 0..6 {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                let scale = j[row][col].abs().max(1.0);
                assert!((fd - j[row][col]).abs() <= 1e-6 * scale, "{row},{col}: {fd} vs {}", j[row][col]);
            }
        }
    }
}
