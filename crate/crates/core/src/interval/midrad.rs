//! Midpoint-radius matrix products for the large blocks of the orbit proof.
//!
//! A product `R * B` with a point matrix `R` and an interval matrix `B = mid ± rad`
//! is enclosed as `R*mid ± (|R|*rad + err)`, where the floating-point error of
//! the two BLAS-style products is bounded a priori: a length-`n` dot product
//! computed in any order satisfies `|fl(x.y) - x.y| <= g_n |x|.|y|` with
//! `g_n = n u / (1 - n u)`, `u = 2^-53`. Underflow adds at most `n` times the
//! smallest normal number per entry.

use nalgebra::DMatrix;

use super::rounding::{add_up, mul_up, sub_down};
use super::{IMatrix, Interval};

/// Interval matrix stored as `mid ± rad` with `rad >= 0`.
#[derive(Clone, Debug)]
pub struct MidRadMatrix {
    pub mid: DMatrix<f64>,
    pub rad: DMatrix<f64>,
}

/// Safe overestimate of `2 g_n`.
fn gamma(n: usize) -> f64 {
    (n as f64 + 2.0) * f64::EPSILON
}

impl MidRadMatrix {
    pub fn from_point(mid: DMatrix<f64>) -> Self {
        let rad = DMatrix::zeros(mid.nrows(), mid.ncols());
        MidRadMatrix { mid, rad }
    }

    pub fn from_imatrix(m: &IMatrix) -> Self {
        let mid = m.mid();
        let rad = DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].rad());
        MidRadMatrix { mid, rad }
    }

    pub fn nrows(&self) -> usize {
        self.mid.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mid.ncols()
    }

    pub fn entry(&self, i: usize, j: usize) -> Interval {
        Interval::mid_rad(self.mid[(i, j)], self.rad[(i, j)])
    }

    pub fn to_imatrix(&self) -> IMatrix {
        IMatrix::from_fn(self.nrows(), self.ncols(), |i, j| self.entry(i, j))
    }

    /// Entrywise upper bound of `|x|` over the enclosure.
    pub fn abs_upper(&self) -> DMatrix<f64> {
        self.mid.zip_map(&self.rad, |m, r| add_up(m.abs(), r))
    }

    /// Rigorous enclosure of `r * self` for the point matrix `r`.
    pub fn left_mul(&self, r: &DMatrix<f64>) -> MidRadMatrix {
        assert_eq!(r.ncols(), self.nrows(), "inner dimensions differ");
        let n = r.ncols();
        let g = gamma(n);
        let mid = r * &self.mid;
        let w = self
            .mid
            .zip_map(&self.rad, |m, rad| add_up(rad, mul_up(g, m.abs())));
        let abs_r = r.abs();
        let tiny = (n as f64 + 1.0) * f64::MIN_POSITIVE;
        let rad = (&abs_r * &w).map(|x| add_up(mul_up(x, 1.0 + g), tiny));
        MidRadMatrix { mid, rad }
    }

    /// Rigorous enclosure of `self - other`.
    pub fn sub(&self, other: &MidRadMatrix) -> MidRadMatrix {
        let mid = &self.mid - &other.mid;
        let rad = DMatrix::from_fn(self.nrows(), self.ncols(), |i, j| {
            let r = add_up(self.rad[(i, j)], other.rad[(i, j)]);
            add_up(r, mul_up(mid[(i, j)].abs(), f64::EPSILON))
        });
        MidRadMatrix { mid, rad }
    }

    /// Rigorous enclosure of `self + other`.
    pub fn add(&self, other: &MidRadMatrix) -> MidRadMatrix {
        let mid = &self.mid + &other.mid;
        let rad = DMatrix::from_fn(self.nrows(), self.ncols(), |i, j| {
            let r = add_up(self.rad[(i, j)], other.rad[(i, j)]);
            add_up(r, mul_up(mid[(i, j)].abs(), f64::EPSILON))
        });
        MidRadMatrix { mid, rad }
    }

    /// Lower bound of every entry.
    pub fn lower(&self) -> DMatrix<f64> {
        self.mid.zip_map(&self.rad, sub_down)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_encloses_interval_product() {
        let r = DMatrix::from_fn(7, 5, |i, j| ((i * 5 + j) as f64 * 0.37).sin());
        let b = IMatrix::from_fn(5, 4, |i, j| {
            let c = ((i + 3 * j) as f64 * 0.91).cos();
            Interval::new(c - 1e-9, c + 2e-9)
        });
        let fast = MidRadMatrix::from_imatrix(&b).left_mul(&r);
        let slow = IMatrix::from_dmatrix(&r).mat_mat(&b).unwrap();
        for i in 0..7 {
            for j in 0..4 {
                assert!(slow[(i, j)].subset_of(fast.entry(i, j)));
                assert!(fast.entry(i, j).width() < slow[(i, j)].width() * 2.0 + 1e-14);
            }
        }
    }
}
