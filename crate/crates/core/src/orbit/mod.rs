//! Connecting orbits from the end of a validated unstable manifold into a
//! trapping square, written as piecewise Chebyshev series on a time grid
//! `0 = t_0 < ... < t_M = τ`.
//!
//! On piece `m` with `h_m = t_m - t_{m-1}` the coefficients satisfy
//! `F_k = k X_k - h_m/4 (f_{k-1}(X) - f_{k+1}(X)) = 0` for `k >= 1`. Row
//! `k = 0` matches the left value `X_0 + 2 sum (-1)^k X_k` of piece `m` with
//! the right value `X_0 + 2 sum X_k` of piece `m - 1`, or with the start point
//! on the first piece.
//!
//! Unknowns are stored flat with index `(m * 6 + i) * K + k`.

mod bounds;

pub use bounds::{
    certify_orbit, orbit_bounds, validate_orbit, OrbitBounds, OrbitOptions, OrbitSolution, ZkMode,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::interval::{IMatrix, IVector, Interval};
use crate::ode;
use crate::potential::{field, Field, FieldCoeffs, MBParams};
use crate::series::{Cheb, Scalar};

pub const NEWTON_MAX_ITER: usize = 30;
/// Target for `‖F^[K](X̄)‖_∞`.
pub const NEWTON_TOL: f64 = 1e-12;

/// The boundary value problem for one orbit.
#[derive(Clone, Debug)]
pub struct OrbitProblem {
    /// Enclosure of `X(0)`, usually `p(±1)` inflated by the manifold radius.
    pub start: IVector,
    pub grid: Vec<f64>,
    /// Chebyshev modes per piece and component.
    pub order: usize,
    pub nu: f64,
    field: FieldCoeffs<Interval>,
    field_f64: FieldCoeffs<f64>,
}

impl OrbitProblem {
    /// Uniform grid of `pieces` steps on `[0, tau]`.
    pub fn new(p: &MBParams, start: IVector, tau: f64, pieces: usize, order: usize, nu: f64) -> Result<Self> {
        if pieces == 0 || !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("need tau > 0 and at least one piece, got {tau}, {pieces}")));
        }
        let mut grid: Vec<f64> = (0..pieces).map(|m| tau * m as f64 / pieces as f64).collect();
        grid.push(tau);
        Self::with_grid(p, start, grid, order, nu)
    }

    pub fn with_grid(p: &MBParams, start: IVector, grid: Vec<f64>, order: usize, nu: f64) -> Result<Self> {
        if start.len() != 6 {
            return Err(Error::shape(6, start.len()));
        }
        if grid.len() < 2 || grid[0] != 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("grid must start at 0 and increase strictly".into()));
        }
        if order == 0 || !(nu > 1.0 && nu.is_finite()) {
            return Err(Error::Domain(format!("need K >= 1 and nu > 1, got {order}, {nu}")));
        }
        Ok(OrbitProblem {
            start,
            grid,
            order,
            nu,
            field: p.field_coeffs(),
            field_f64: p.field_coeffs(),
        })
    }

    pub fn pieces(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn tau(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// Number of unknowns `6 M K`.
    pub fn dim(&self) -> usize {
        6 * self.pieces() * self.order
    }

    #[inline]
    pub fn index(&self, m: usize, i: usize, k: usize) -> usize {
        (m * 6 + i) * self.order + k
    }

    /// `h_m / 4` for piece `m` (zero-based).
    fn quarter_step<S: Scalar>(&self, m: usize) -> S {
        let h = Interval::point(self.grid[m + 1]) - Interval::point(self.grid[m]);
        S::from_interval(h.scale(0.25))
    }

    /// The six component series of piece `m`.
    pub fn piece<S: Scalar>(&self, x: &[S], m: usize) -> [Cheb<S>; 6] {
        std::array::from_fn(|i| {
            let a = self.index(m, i, 0);
            Cheb::new(x[a..a + self.order].to_vec())
        })
    }

    /// Rows `0 .. rows` of `F` per piece and component.
    fn residual_rows<S: Scalar>(&self, coeffs: &FieldCoeffs<S>, x: &[S], start: &[S], rows: usize) -> Vec<[Vec<S>; 6]> {
        let mut prev_right: Vec<S> = start.to_vec();
        let mut out = Vec::with_capacity(self.pieces());
        for m in 0..self.pieces() {
            let vars = self.piece(x, m);
            let f = field(coeffs, &vars);
            let hq: S = self.quarter_step(m);
            let mut right = vec![S::zero(); 6];
            let comp: [Vec<S>; 6] = std::array::from_fn(|i| {
                let (l, r) = vars[i].endpoints();
                right[i] = r;
                let mut row = Vec::with_capacity(rows);
                row.push(l - prev_right[i]);
                for k in 1..rows {
                    let kx = vars[i].get(k) * S::from_f64(k as f64);
                    row.push(kx - hq * (f[i].get(k - 1) - f[i].get(k + 1)));
                }
                row
            });
            prev_right = right;
            out.push(comp);
        }
        out
    }

    /// Truncated residual `F^[K](X)` in floating point, against the midpoint
    /// of the start box.
    pub fn build_f(&self, x: &[f64]) -> Vec<f64> {
        let start = self.start.mid();
        self.flatten(self.residual_rows(&self.field_f64, x, &start, self.order))
    }

    /// Enclosure of every nonzero row of `F(X)`, `k = 0 ..= 4K - 3`, over the
    /// start box.
    pub fn residual(&self, x: &[f64]) -> Vec<[Vec<Interval>; 6]> {
        let xs: Vec<Interval> = x.iter().map(|&v| Interval::point(v)).collect();
        let rows = (4 * self.order).saturating_sub(2).max(self.order);
        self.residual_rows(&self.field, &xs, self.start.as_slice(), rows)
    }

    fn flatten<S: Scalar>(&self, rows: Vec<[Vec<S>; 6]>) -> Vec<S> {
        let mut out = Vec::with_capacity(self.dim());
        for piece in rows {
            for comp in piece {
                out.extend_from_slice(&comp[..self.order]);
            }
        }
        out
    }

    /// `D_j f^(i)` along piece `m`, as `u[i][j]`.
    fn first_partials<S: Scalar>(&self, coeffs: &FieldCoeffs<S>, x: &[S], m: usize) -> [[Vec<S>; 6]; 6] {
        let jac = Field::new(coeffs, &self.piece(x, m)).jacobian();
        jac.map(|row| row.map(|s| s.c))
    }

    /// Diagonal blocks `∂F^(m)/∂X^(m)` of `DF^[K]` in floating point.
    fn diagonal_blocks(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        let kk = self.order;
        (0..self.pieces())
            .map(|m| {
                let u = self.first_partials(&self.field_f64, x, m);
                let hq: f64 = self.quarter_step(m);
                DMatrix::from_fn(6 * kk, 6 * kk, |r, c| {
                    let (i, k, j, l) = (r / kk, r % kk, c / kk, c % kk);
                    block_entry(&u[i][j], hq, i == j, k, l)
                })
            })
            .collect()
    }

    /// Enclosure of the truncated Jacobian `DF^[K](X)` as a dense matrix.
    pub fn truncated_jacobian(&self, x: &[f64]) -> IMatrix {
        let (kk, n) = (self.order, self.dim());
        let xs: Vec<Interval> = x.iter().map(|&v| Interval::point(v)).collect();
        let mut out = IMatrix::zeros(n, n);
        for m in 0..self.pieces() {
            let u = self.first_partials(&self.field, &xs, m);
            let hq: Interval = self.quarter_step(m);
            for i in 0..6 {
                for k in 0..kk {
                    for j in 0..6 {
                        for l in 0..kk {
                            out[(self.index(m, i, k), self.index(m, j, l))] =
                                block_entry(&u[i][j], hq, i == j, k, l);
                        }
                    }
                    if m > 0 && k == 0 {
                        for l in 0..kk {
                            out[(self.index(m, i, 0), self.index(m - 1, i, l))] = Interval::point(-right_weight(l));
                        }
                    }
                }
            }
        }
        out
    }

    /// Approximate inverse `A^[K]` of `DF^[K](X)`. The Jacobian is block lower
    /// bidiagonal, so the inverse is assembled by block forward substitution
    /// and is exactly zero above the block diagonal.
    pub fn approximate_inverse(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let (kk, mm) = (self.order, self.pieces());
        let nk = 6 * kk;
        let dinv: Vec<DMatrix<f64>> = self
            .diagonal_blocks(x)
            .into_iter()
            .enumerate()
            .map(|(m, b)| {
                b.lu()
                    .try_inverse()
                    .ok_or_else(|| Error::Numerical(format!("diagonal block {m} of DF^[K] is singular")))
            })
            .collect::<Result<_>>()?;
        let mut a = DMatrix::zeros(self.dim(), self.dim());
        for n in 0..mm {
            let mut cur = dinv[n].clone();
            a.view_mut((n * nk, n * nk), (nk, nk)).copy_from(&cur);
            for m in n + 1..mm {
                let r = DMatrix::from_fn(6, nk, |i, c| (0..kk).map(|k| right_weight(k) * cur[(i * kk + k, c)]).sum());
                let cols = DMatrix::from_fn(nk, 6, |row, i| dinv[m][(row, i * kk)]);
                cur = cols * r;
                a.view_mut((m * nk, n * nk), (nk, nk)).copy_from(&cur);
            }
        }
        if !a.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical("approximate inverse is not finite".into()));
        }
        Ok(a)
    }

    /// Solve `DF^[K](X) d = b` by block forward substitution.
    fn block_solve(&self, blocks: Vec<DMatrix<f64>>, b: &[f64]) -> Result<Vec<f64>> {
        let kk = self.order;
        let nk = 6 * kk;
        let mut out = Vec::with_capacity(b.len());
        for (m, blk) in blocks.into_iter().enumerate() {
            let mut rhs = nalgebra::DVector::from_column_slice(&b[m * nk..(m + 1) * nk]);
            if m > 0 {
                let prev = &out[(m - 1) * nk..m * nk];
                for i in 0..6 {
                    rhs[i * kk] += (0..kk).map(|k| right_weight(k) * prev[i * kk + k]).sum::<f64>();
                }
            }
            let d = blk
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::Numerical(format!("diagonal block {m} of DF^[K] is singular")))?;
            out.extend(d.iter());
        }
        Ok(out)
    }

    /// Newton's method on `F^[K] = 0` from `guess`.
    pub fn solve_truncated(&self, guess: &[f64]) -> Result<Vec<f64>> {
        if guess.len() != self.dim() {
            return Err(Error::shape(self.dim(), guess.len()));
        }
        let mut x = guess.to_vec();
        let mut res = sup_norm(&self.build_f(&x));
        for _ in 0..NEWTON_MAX_ITER {
            if res <= NEWTON_TOL {
                return Ok(x);
            }
            let d = self.block_solve(self.diagonal_blocks(&x), &self.build_f(&x))?;
            let next: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a - b).collect();
            let next_res = sup_norm(&self.build_f(&next));
            if !next_res.is_finite() {
                return Err(Error::Convergence("Newton iterate is not finite".into()));
            }
            let stalled = next_res >= res && sup_norm(&d) <= 1e-14 * sup_norm(&x).max(1.0);
            x = next;
            res = next_res;
            if stalled {
                break;
            }
        }
        if res <= NEWTON_TOL {
            Ok(x)
        } else {
            Err(Error::Convergence(format!(
                "Newton on the truncated orbit problem stopped at residual {res:e}"
            )))
        }
    }

    /// Chebyshev interpolation of a numerical trajectory from the midpoint of
    /// the start box, at the Gauss-Lobatto points of every piece.
    pub fn initial_guess(&self) -> Result<Vec<f64>> {
        let start = self.start.mid();
        let coeffs = &self.field_f64;
        let traj = ode::integrate(
            |x| field(coeffs, &std::array::from_fn(|i| x[i])).to_vec(),
            &start,
            0.0,
            self.tau(),
            ode::DEFAULT_TOL,
        )?;
        let kk = self.order;
        let mut out = vec![0.0; self.dim()];
        for m in 0..self.pieces() {
            let (a, b) = (self.grid[m], self.grid[m + 1]);
            let at = |s: f64| traj.eval(0.5 * (a + b) + 0.5 * (b - a) * s);
            if kk == 1 {
                let v = at(0.0);
                for i in 0..6 {
                    out[self.index(m, i, 0)] = v[i];
                }
                continue;
            }
            let n = kk - 1;
            let nodes: Vec<Vec<f64>> = (0..=n)
                .map(|j| at((std::f64::consts::PI * j as f64 / n as f64).cos()))
                .collect();
            for i in 0..6 {
                for k in 0..=n {
                    let mut s = 0.0;
                    for (j, v) in nodes.iter().enumerate() {
                        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                        s += w * v[i] * (std::f64::consts::PI * (j * k) as f64 / n as f64).cos();
                    }
                    let ak = 2.0 * s / n as f64;
                    out[self.index(m, i, k)] = if k == n { ak / 4.0 } else { ak / 2.0 };
                }
            }
        }
        Ok(out)
    }

    /// `X̄(t)` for `t` in `[0, τ]` (clamped).
    pub fn eval(&self, x: &[f64], t: f64) -> [f64; 6] {
        let t = t.clamp(0.0, self.tau());
        let m = self.grid[1..].iter().position(|&b| t <= b).unwrap_or(self.pieces() - 1);
        let (a, b) = (self.grid[m], self.grid[m + 1]);
        let s = ((2.0 * t - a - b) / (b - a)).clamp(-1.0, 1.0);
        let piece = self.piece(x, m);
        std::array::from_fn(|i| piece[i].eval(s))
    }

    /// Enclosures of `X̄` at the ends of piece `m`.
    pub fn piece_endpoints(&self, x: &[f64], m: usize) -> ([Interval; 6], [Interval; 6]) {
        let xs: Vec<Interval> = x.iter().map(|&v| Interval::point(v)).collect();
        let piece = self.piece(&xs, m);
        let ends = piece.map(|s| s.endpoints());
        (ends.map(|e| e.0), ends.map(|e| e.1))
    }
}

/// `1` for `k = 0`, `2` otherwise: the derivative of `X(1)` in `X_k`.
#[inline]
fn right_weight(k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        2.0
    }
}

/// `(u * e_l)_k` with `e_l` the `l`-th unit sequence.
#[inline]
fn conv_unit<S: Scalar>(u: &[S], k: usize, l: usize) -> S {
    let get = |n: usize| u.get(n).copied().unwrap_or_else(S::zero);
    if l == 0 {
        get(k)
    } else {
        get(k.abs_diff(l)) + get(k + l)
    }
}

/// `-h/4 ((u * e_l)_{k-1} - (u * e_l)_{k+1})` for `k >= 1`.
#[inline]
fn flow_entry<S: Scalar>(u: &[S], hq: S, k: usize, l: usize) -> S {
    -(hq * (conv_unit(u, k - 1, l) - conv_unit(u, k + 1, l)))
}

/// Entry `(k, l)` of `∂F^(m,i)/∂X^(m,j)` with `u = D_j f^(i)`.
fn block_entry<S: Scalar>(u: &[S], hq: S, same: bool, k: usize, l: usize) -> S {
    if k == 0 {
        return match (same, l) {
            (false, _) => S::zero(),
            (true, 0) => S::from_f64(1.0),
            (true, l) if l % 2 == 0 => S::from_f64(2.0),
            (true, _) => S::from_f64(-2.0),
        };
    }
    let v = flow_entry(u, hq, k, l);
    if same && k == l {
        v + S::from_f64(k as f64)
    } else {
        v
    }
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}
