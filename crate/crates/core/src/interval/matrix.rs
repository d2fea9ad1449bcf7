//! Dense interval vectors and matrices.

use std::ops::{Index, IndexMut};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::rounding::UpSum;
use super::Interval;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IVector(Vec<Interval>);

impl IVector {
    pub fn new(data: Vec<Interval>) -> Self {
        IVector(data)
    }

    pub fn zeros(n: usize) -> Self {
        IVector(vec![Interval::ZERO; n])
    }

    pub fn from_f64(x: &[f64]) -> Self {
        IVector(x.iter().map(|&v| Interval::point(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<Interval> {
        self.0
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.mid()).collect()
    }

    pub fn add(&self, other: &IVector) -> Result<IVector> {
        check_len(self.len(), other.len())?;
        Ok(IVector(
            self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect(),
        ))
    }

    pub fn sub(&self, other: &IVector) -> Result<IVector> {
        check_len(self.len(), other.len())?;
        Ok(IVector(
            self.0.iter().zip(&other.0).map(|(a, b)| *a - *b).collect(),
        ))
    }

    pub fn scale(&self, c: Interval) -> IVector {
        IVector(self.0.iter().map(|a| *a * c).collect())
    }

    /// Upper bound of the max norm.
    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.mag()))
    }

    /// Upper bound of `sum_i |x_i| eta_i`.
    pub fn weighted_norm(&self, eta: &[f64]) -> Result<f64> {
        check_len(self.len(), eta.len())?;
        let mut s = UpSum::default();
        for (x, w) in self.0.iter().zip(eta) {
            s.add_prod(x.mag(), *w);
        }
        Ok(s.0)
    }

    pub fn contains_zero(&self) -> bool {
        self.0.iter().all(|x| x.contains_zero())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Index<usize> for IVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl IndexMut<usize> for IVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.0[i]
    }
}

impl FromIterator<Interval> for IVector {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        IVector(iter.into_iter().collect())
    }
}

/// Row-major dense interval matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMatrix {
            rows,
            cols,
            data: vec![Interval::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Interval>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::shape(format!("{r} rows of length {c}"), "ragged rows"));
        }
        Ok(IMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        IMatrix::from_fn(m.nrows(), m.ncols(), |i, j| Interval::point(m[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mid(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mid())
    }

    /// Entrywise `sup |a_ij|`.
    pub fn mag(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mag())
    }

    pub fn transpose(&self) -> IMatrix {
        IMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn add(&self, other: &IMatrix) -> Result<IMatrix> {
        self.check_same(other)?;
        Ok(IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a + *b).collect(),
        })
    }

    pub fn sub(&self, other: &IMatrix) -> Result<IMatrix> {
        self.check_same(other)?;
        Ok(IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect(),
        })
    }

    pub fn scale(&self, c: Interval) -> IMatrix {
        IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| *a * c).collect(),
        }
    }

    pub fn mat_vec(&self, x: &IVector) -> Result<IVector> {
        if x.len() != self.cols {
            return Err(Error::shape(self.cols, x.len()));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect())
    }

    pub fn mat_mat(&self, other: &IMatrix) -> Result<IMatrix> {
        if other.rows != self.cols {
            return Err(Error::shape(
                format!("{} rows", self.cols),
                format!("{} rows", other.rows),
            ));
        }
        Ok(IMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        }))
    }

    /// Enclosure of `max_j (1/eta_j) sum_i sup|a_ij| eta_i`.
    pub fn weighted_op_norm(&self, eta: &[f64]) -> Result<Interval> {
        if eta.len() != self.rows || self.rows != self.cols {
            return Err(Error::shape(
                format!("square matrix and {} weights", self.rows),
                format!("{}x{} and {}", self.rows, self.cols, eta.len()),
            ));
        }
        if eta.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Domain("weights must be positive".into()));
        }
        let mut best = Interval::ZERO;
        for j in 0..self.cols {
            let s: Interval = (0..self.rows)
                .map(|i| Interval::point(self[(i, j)].mag()) * eta[i])
                .sum();
            best = best.max(s.div(Interval::point(eta[j]))?);
        }
        Ok(best)
    }

    /// Upper bound of the max-row-sum norm.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                let mut s = UpSum::default();
                for j in 0..self.cols {
                    s.add(self[(i, j)].mag());
                }
                s.0
            })
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    fn check_same(&self, other: &IMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for IMatrix {
    type Output = Interval;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

/// Rigorous `R * b` for a point matrix `R`.
pub fn point_mat_vec(r: &DMatrix<f64>, b: &IVector) -> Result<IVector> {
    if r.ncols() != b.len() {
        return Err(Error::shape(r.ncols(), b.len()));
    }
    Ok((0..r.nrows())
        .map(|i| (0..r.ncols()).map(|j| b[j] * r[(i, j)]).sum())
        .collect())
}

pub(crate) fn check_len(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::shape(a, b))
    }
}

impl IVector {
    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(|x| x.mid()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_norms_of_small_matrices() {
        let id = IMatrix::identity(2);
        assert!(id.weighted_op_norm(&[1.0, 1.0]).unwrap().contains(1.0));
        let swap = IMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Interval::ZERO
            } else {
                Interval::point(2.0)
            }
        });
        assert!(swap.weighted_op_norm(&[1.0, 1.0]).unwrap().contains(2.0));
        assert!(swap.weighted_op_norm(&[1.0, 0.0]).is_err());
        assert!(swap.weighted_op_norm(&[1.0]).is_err());
    }

    #[test]
    fn products_contain_point_products() {
        let a = DMatrix::from_row_slice(2, 2, &[0.1, 0.2, 0.3, 0.4]);
        let b = DMatrix::from_row_slice(2, 2, &[1.5, -0.7, 0.25, 3.0]);
        let c = IMatrix::from_dmatrix(&a)
            .mat_mat(&IMatrix::from_dmatrix(&b))
            .unwrap();
        let p = &a * &b;
        for i in 0..2 {
            for j in 0..2 {
                assert!(c[(i, j)].contains(p[(i, j)]));
            }
        }
        let v = IVector::from_f64(&[1.0, -1.0]);
        assert!(IMatrix::identity(3).mat_vec(&v).is_err());
    }
}
