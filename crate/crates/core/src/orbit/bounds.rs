//! Validation of a truncated orbit `X̄` through the Newton-like operator
//! `I - A F`.
//!
//! `A†` equals the truncated Jacobian `DF^[K](X̄)` on the first `K` modes and
//! multiplication by `k` beyond; `A` is a floating-point inverse of the
//! truncated Jacobian on the first `K` modes and `1/k` beyond. Piece `m` gets
//! its own radii polynomial in the norm `sum_i η^(m,i) ‖X^(m,i)‖_ν` with
//! `‖u‖_ν = |u_0| + 2 sum_{k>=1} |u_k| ν^k`; the pieces share one radius.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{block_entry, flow_entry, right_weight, OrbitProblem};
use crate::contraction::{certify_componentwise, RadiiBounds, ValidationCertificate};
use crate::equilibria::TrappingSquare;
use crate::error::{Error, Result};
use crate::interval::rounding::{add_up, div_up, mul_down, mul_up, UpSum};
use crate::interval::{hex_f64, point_mat_vec, IMatrix, IVector, Interval, MidRadMatrix};
use crate::potential::{multi_indices, Field, MultiIndex};
use crate::series::{cheb_weights, Cheb, norm_cheb, normalize_euclidean, perron_weights};

/// `B[i][j]` for the component pair `(i, j)` of a piece pair.
type Block = [[f64; 6]; 6];

/// How `Z2`, `Z3`, `Z4` are assembled from block norms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZkMode {
    /// Weights and block norms combined before maximizing over multi-indices.
    #[default]
    Sharp,
    /// Product of the weighted norm of `A` and that of `D^k F`.
    Relaxed,
}

#[derive(Clone, Debug, Default)]
pub struct OrbitOptions {
    pub zk: ZkMode,
    /// Weights `η^(m,i)` at index `6 m + i`; Perron weights when `None`.
    pub weights: Option<Vec<f64>>,
}

/// Per-piece bounds and the weights they were computed with.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitBounds {
    pub pieces: Vec<RadiiBounds>,
    #[serde(with = "hex_f64::vec")]
    pub eta: Vec<f64>,
    pub zk_mode: ZkMode,
}

/// A certified orbit: `‖X - X̄‖ <= rho` in the weighted norm, so that
/// `|X^(i)(t) - X̄^(i)(t)| <= rho / η^(m,i)` on piece `m`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitSolution {
    #[serde(with = "hex_f64::vec")]
    pub grid: Vec<f64>,
    pub order: usize,
    #[serde(with = "hex_f64")]
    pub nu: f64,
    #[serde(with = "hex_f64::vec")]
    pub coeffs: Vec<f64>,
    pub bounds: OrbitBounds,
    pub certificate: ValidationCertificate,
    #[serde(with = "hex_f64")]
    pub rho: f64,
    /// Enclosure of the true `X(τ)`.
    pub endpoint: IVector,
}

impl OrbitSolution {
    pub fn eta(&self) -> &[f64] {
        &self.bounds.eta
    }

    /// `rho / η^(m,i)`.
    pub fn pointwise_radius(&self, m: usize, i: usize) -> f64 {
        div_up(self.rho, self.bounds.eta[6 * m + i])
    }

    pub fn pieces(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn tau(&self) -> f64 {
        self.grid[self.pieces()]
    }

    /// `X̄(t)` for `t` in `[0, τ]` (clamped).
    pub fn eval(&self, t: f64) -> [f64; 6] {
        let mm = self.pieces();
        let t = t.clamp(self.grid[0], self.tau());
        let m = self.grid[1..mm].partition_point(|&g| g <= t);
        let (a, b) = (self.grid[m], self.grid[m + 1]);
        let s = (2.0 * (t - a) / (b - a) - 1.0).clamp(-1.0, 1.0);
        let kk = self.order;
        std::array::from_fn(|i| {
            let off = (m * 6 + i) * kk;
            Cheb::new(self.coeffs[off..off + kk].to_vec()).eval(s)
        })
    }
}

/// Enclosures of the Chebyshev weights `ξ_k`.
struct Xi {
    up: Vec<f64>,
    lo: Vec<f64>,
}

impl Xi {
    fn new(nu: f64, n: usize) -> Self {
        let w = cheb_weights(nu, n);
        Xi {
            up: w.iter().map(|x| x.hi()).collect(),
            lo: w.iter().map(|x| x.lo()).collect(),
        }
    }
}

/// `max_j (1/η_n,j) sum_i B[i][j] η_m,i`.
fn weighted(b: &Block, eta_m: &[f64], eta_n: &[f64]) -> f64 {
    (0..6)
        .map(|j| {
            let mut s = UpSum::default();
            for i in 0..6 {
                s.add_prod(b[i][j], eta_m[i]);
            }
            div_up(s.0, eta_n[j])
        })
        .fold(0.0, f64::max)
}

/// Lower bound of `η^α`.
fn eta_power_lo(eta: &[f64], alpha: &MultiIndex) -> f64 {
    let mut p = 1.0;
    for (j, &a) in alpha.iter().enumerate() {
        for _ in 0..a {
            p = mul_down(p, eta[j]);
        }
    }
    p
}

/// Norms for column piece `n` and row pieces `m >= n` (index `m - n`):
/// `‖(I - A A†)^(m,i;n,j)‖_ν` and the finite-column part of
/// `‖(A (DF - A†))^(m,i;n,j)‖_ν`.
fn column_piece(
    prob: &OrbitProblem,
    a: &DMatrix<f64>,
    u: &[[Vec<Interval>; 6]; 6],
    hq: Interval,
    n: usize,
    xi: &Xi,
) -> (Vec<Block>, Vec<Block>) {
    let (mm, kk) = (prob.pieces(), prob.order);
    let nk = 6 * kk;
    let ncol = 4 * kk - 1;
    let extra = if n + 1 < mm { 6 } else { 0 };

    // Columns 0..K of piece n in DF^[K], then columns K..=4K-2 restricted to
    // rows below K. Besides piece n itself only the rows X^(n+1)_0 are hit.
    let w = IMatrix::from_fn(nk + extra, 6 * ncol, |r, c| {
        let (j, l) = (c / ncol, c % ncol);
        if r < nk {
            let (i, k) = (r / kk, r % kk);
            block_entry(&u[i][j], hq, i == j, k, l)
        } else if r - nk == j {
            Interval::point(-right_weight(l))
        } else {
            Interval::ZERO
        }
    });
    let rows0 = n * nk;
    let a_sub = DMatrix::from_fn((mm - n) * nk, nk + extra, |r, c| {
        let col = if c < nk { rows0 + c } else { prob.index(n + 1, c - nk, 0) };
        a[(rows0 + r, col)]
    });
    let p = MidRadMatrix::from_imatrix(&w).left_mul(&a_sub);

    // Rows k >= K of DF - A† for the diagonal block, where A acts as 1/k.
    let mut tail = vec![[[0.0; 6]; 6]; ncol];
    for (l, t) in tail.iter_mut().enumerate() {
        for i in 0..6 {
            for j in 0..6 {
                let mut s = UpSum::default();
                for k in kk.max(1)..=l + u[i][j].len() + 1 {
                    let e = flow_entry(&u[i][j], hq, k, l).mag();
                    if e > 0.0 {
                        s.add_prod(div_up(e, k as f64), xi.up[k]);
                    }
                }
                t[i][j] = s.0;
            }
        }
    }

    let mut z0 = vec![[[0.0; 6]; 6]; mm - n];
    let mut cf = vec![[[0.0; 6]; 6]; mm - n];
    for mi in 0..mm - n {
        for i in 0..6 {
            let rbase = mi * nk + i * kk;
            for j in 0..6 {
                let (mut zb, mut cb) = (0.0f64, 0.0f64);
                for l in 0..ncol {
                    let col = j * ncol + l;
                    let mut s = UpSum::default();
                    for k in 0..kk {
                        let (mid, rad) = (p.mid[(rbase + k, col)], p.rad[(rbase + k, col)]);
                        let v = if l < kk && mi == 0 && i == j && k == l {
                            add_up((Interval::ONE - Interval::point(mid)).mag(), rad)
                        } else {
                            add_up(mid.abs(), rad)
                        };
                        s.add_prod(v, xi.up[k]);
                    }
                    let mut cs = if l < kk {
                        zb = zb.max(div_up(s.0, xi.lo[l]));
                        0.0
                    } else {
                        s.0
                    };
                    if mi == 0 {
                        cs = add_up(cs, tail[l][i][j]);
                    }
                    cb = cb.max(div_up(cs, xi.lo[l]));
                }
                z0[mi][i][j] = zb;
                cf[mi][i][j] = cb;
            }
        }
    }
    (z0, cf)
}

/// Rescale whole pieces of `eta` so that `Z1` stays at most halfway between
/// its largest diagonal term and 1. A common factor on all pieces leaves the
/// pointwise radii unchanged, so pieces are only ever scaled down, and only
/// as far as their off-diagonal terms require.
fn balance_pieces(eta: &mut [f64], c: &[Block], mm: usize) {
    let diag: Vec<f64> = (0..mm)
        .map(|m| weighted(&c[m * mm + m], &eta[6 * m..6 * m + 6], &eta[6 * m..6 * m + 6]))
        .collect();
    let target = 0.5 * (1.0 + diag.iter().copied().fold(0.0, f64::max));
    if target >= 1.0 {
        return;
    }
    for m in 1..mm {
        let off: f64 = (0..m)
            .map(|n| weighted(&c[m * mm + n], &eta[6 * m..6 * m + 6], &eta[6 * n..6 * n + 6]))
            .sum();
        let room = target - diag[m];
        if off > room {
            let s = room / off;
            eta[6 * m..6 * m + 6].iter_mut().for_each(|v| *v *= s);
        }
    }
}

/// `‖A^(m,i;n,j)_{·,0}‖_ν` and `‖A^(m,i;n,j)‖_ν` (including the `1/k` tail),
/// at index `m * M + n`.
fn a_norms(prob: &OrbitProblem, a: &DMatrix<f64>, xi: &Xi) -> (Vec<Block>, Vec<Block>) {
    let (mm, kk) = (prob.pieces(), prob.order);
    let mut col0 = vec![[[0.0; 6]; 6]; mm * mm];
    let mut full = vec![[[0.0; 6]; 6]; mm * mm];
    for m in 0..mm {
        for n in 0..=m {
            for i in 0..6 {
                for j in 0..6 {
                    let mut best = if m == n && i == j { div_up(1.0, kk as f64) } else { 0.0 };
                    for l in 0..kk {
                        let mut s = UpSum::default();
                        for k in 0..kk {
                            s.add_prod(a[(prob.index(m, i, k), prob.index(n, j, l))].abs(), xi.up[k]);
                        }
                        if l == 0 {
                            col0[m * mm + n][i][j] = s.0;
                        }
                        best = best.max(div_up(s.0, xi.lo[l]));
                    }
                    full[m * mm + n][i][j] = best;
                }
            }
        }
    }
    (col0, full)
}

/// `‖u_∓‖_ν` with `(u_∓)_k = u_{k-1} - u_{k+1}` for `k >= 1`.
fn shifted_difference_norm(u: &[Interval], nu: f64) -> f64 {
    let get = |k: usize| u.get(k).copied().unwrap_or(Interval::ZERO);
    let v: Vec<Interval> = (0..u.len() + 2)
        .map(|k| if k == 0 { Interval::ZERO } else { get(k - 1) - get(k + 1) })
        .collect();
    norm_cheb(&v, nu).hi()
}

/// `Y`, `Z0`, ..., `Z4` for every piece.
pub fn orbit_bounds(prob: &OrbitProblem, x: &[f64], opts: &OrbitOptions) -> Result<OrbitBounds> {
    if x.len() != prob.dim() {
        return Err(Error::shape(prob.dim(), x.len()));
    }
    let (mm, kk, nu) = (prob.pieces(), prob.order, prob.nu);
    let xi = Xi::new(nu, 8 * kk + 4);
    let xs: Vec<Interval> = x.iter().map(|&v| Interval::point(v)).collect();
    let u: Vec<[[Vec<Interval>; 6]; 6]> = (0..mm).map(|m| prob.first_partials(&prob.field, &xs, m)).collect();
    let hq: Vec<Interval> = (0..mm).map(|m| prob.quarter_step(m)).collect();
    let a = prob.approximate_inverse(x)?;

    let per_n: Vec<(Vec<Block>, Vec<Block>)> = (0..mm)
        .into_par_iter()
        .map(|n| column_piece(prob, &a, &u[n], hq[n], n, &xi))
        .collect();
    let (acol0, anorm) = a_norms(prob, &a, &xi);

    // C = max(finite columns, tail columns) per block, for n <= m.
    let tail_factor = div_up(4.0, xi.lo[kk]);
    let mut c = vec![[[0.0; 6]; 6]; mm * mm];
    for m in 0..mm {
        for n in 0..=m {
            for i in 0..6 {
                for j in 0..6 {
                    let next = if n < m { acol0[m * mm + n + 1][i][j] } else { 0.0 };
                    let mut t = mul_up(tail_factor, add_up(acol0[m * mm + n][i][j], next));
                    if m == n {
                        let d = shifted_difference_norm(&u[n][i][j], nu);
                        t = add_up(t, div_up(mul_up(hq[n].hi(), d), kk as f64));
                    }
                    c[m * mm + n][i][j] = per_n[n].1[m - n][i][j].max(t);
                }
            }
        }
    }

    let eta = match &opts.weights {
        Some(w) => {
            if w.len() != 6 * mm {
                return Err(Error::shape(6 * mm, w.len()));
            }
            if w.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                return Err(Error::Domain("orbit weights must be positive".into()));
            }
            w.clone()
        }
        None => {
            let mut eta = Vec::with_capacity(6 * mm);
            for m in 0..mm {
                let b = &c[m * mm + m];
                let (w, _) = perron_weights(&DMatrix::from_fn(6, 6, |i, j| b[i][j]))?;
                eta.extend(normalize_euclidean(&w));
            }
            balance_pieces(&mut eta, &c, mm);
            eta
        }
    };
    let eta_of = |m: usize| &eta[6 * m..6 * m + 6];

    // Norms of the k-th derivatives of f along each piece.
    let two_nu = 2.0 * nu;
    let dk: Vec<Vec<Vec<(MultiIndex, [f64; 6])>>> = (0..mm)
        .map(|n| {
            let fld = Field::new(&prob.field, &prob.piece(&xs, n));
            let scale = mul_up(hq[n].hi(), two_nu);
            (2..=4u8)
                .map(|k| {
                    multi_indices(k)
                        .into_iter()
                        .filter_map(|alpha| {
                            let g: [f64; 6] = std::array::from_fn(|i| {
                                fld.partial(i, &alpha)
                                    .map_or(0.0, |s| mul_up(scale, norm_cheb(&s.c, nu).hi()))
                            });
                            g.iter().any(|v| *v > 0.0).then_some((alpha, g))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    // Y from every nonzero row of F(X̄), with the start box.
    let res = prob.residual(x);
    let b: IVector = res
        .iter()
        .flat_map(|piece| piece.iter().flat_map(|row| row[..kk].iter().copied()))
        .collect();
    let ab = point_mat_vec(&a, &b)?;

    let mut pieces = Vec::with_capacity(mm);
    for m in 0..mm {
        let em = eta_of(m);
        let mut y = UpSum::default();
        for i in 0..6 {
            let mut s = UpSum::default();
            for k in 0..kk {
                s.add_prod(ab[prob.index(m, i, k)].mag(), xi.up[k]);
            }
            for (k, v) in res[m][i].iter().enumerate().skip(kk) {
                s.add_prod(div_up(v.mag(), k as f64), xi.up[k]);
            }
            y.add_prod(s.0, em[i]);
        }
        let (mut z0, mut z1) = (UpSum::default(), UpSum::default());
        let mut zk = [UpSum::default(); 3];
        for n in 0..=m {
            let en = eta_of(n);
            z0.add(weighted(&per_n[n].0[m - n], em, en));
            z1.add(weighted(&c[m * mm + n], em, en));
            let an = &anorm[m * mm + n];
            let a_weighted = weighted(an, em, en);
            for (kidx, list) in dk[n].iter().enumerate() {
                let mut best = 0.0f64;
                for (alpha, g) in list {
                    let lo = eta_power_lo(en, alpha);
                    let v = match opts.zk {
                        ZkMode::Sharp => {
                            let mut s = UpSum::default();
                            for i1 in 0..6 {
                                let mut inner = UpSum::default();
                                for i2 in 0..6 {
                                    inner.add_prod(an[i1][i2], g[i2]);
                                }
                                s.add_prod(em[i1], inner.0);
                            }
                            s.0
                        }
                        ZkMode::Relaxed => {
                            let mut s = UpSum::default();
                            for i2 in 0..6 {
                                s.add_prod(en[i2], g[i2]);
                            }
                            mul_up(a_weighted, s.0)
                        }
                    };
                    best = best.max(div_up(v, lo));
                }
                zk[kidx].add(best);
            }
        }
        let p = Interval::point;
        pieces.push(RadiiBounds {
            y: p(y.0),
            z0: p(z0.0),
            z1: p(z1.0),
            z2: p(zk[0].0),
            z3: p(zk[1].0),
            z4: p(zk[2].0),
        });
    }
    Ok(OrbitBounds {
        pieces,
        eta,
        zk_mode: opts.zk,
    })
}

/// Certify `X̄` and enclose the true endpoint `X(τ)`.
pub fn certify_orbit(prob: &OrbitProblem, x: &[f64], opts: &OrbitOptions) -> Result<OrbitSolution> {
    let bounds = orbit_bounds(prob, x, opts)?;
    let cert = certify_componentwise(&bounds.pieces);
    if !cert.success {
        let worst = bounds
            .pieces
            .iter()
            .map(|b| (b.z0 + b.z1).hi())
            .fold(0.0, f64::max);
        return Err(Error::validation(
            "orbit",
            format!(
                "max Y = {:e}, max Z0 + Z1 = {worst:e}: {}",
                bounds.pieces.iter().map(|b| b.y.hi()).fold(0.0, f64::max),
                cert.diagnostic.clone().unwrap_or_default()
            ),
        ));
    }
    let rho = cert.radius;
    let last = prob.pieces() - 1;
    let (_, right) = prob.piece_endpoints(x, last);
    let endpoint: IVector = (0..6)
        .map(|i| right[i].inflate(div_up(rho, bounds.eta[6 * last + i])))
        .collect();
    Ok(OrbitSolution {
        grid: prob.grid.clone(),
        order: prob.order,
        nu: prob.nu,
        coeffs: x.to_vec(),
        bounds,
        certificate: cert,
        rho,
        endpoint,
    })
}

/// Certify `X̄` and prove that `(X^(1)(τ), X^(2)(τ))` lies in the open square.
pub fn validate_orbit(
    prob: &OrbitProblem,
    x: &[f64],
    target: &TrappingSquare,
    opts: &OrbitOptions,
) -> Result<OrbitSolution> {
    let sol = certify_orbit(prob, x, opts)?;
    if !target.contains_box(sol.endpoint[0], sol.endpoint[1]) {
        return Err(Error::validation(
            "orbit endpoint",
            format!(
                "X(τ) = ({}, {}) is not inside the square {} x {}",
                sol.endpoint[0], sol.endpoint[1], target.x, target.y
            ),
        ));
    }
    Ok(sol)
}
