//! Sequence algebra for Taylor and Chebyshev coefficients.
//!
//! Taylor sequences multiply by the Cauchy product, Chebyshev sequences by the
//! symmetric convolution that corresponds to pointwise multiplication of
//! `u_0 + 2 sum u_k T_k`. Norms are the weighted ℓ¹ norms in which both
//! products are submultiplicative.

mod cheb;
mod norms;
mod perron;
mod ring;
mod taylor;

pub use cheb::{cheb_convolution, Cheb};
pub use norms::{cheb_weights, norm_cheb, norm_l1, norm_taylor, normalize_euclidean};
pub use perron::{perron_weights, PERRON_MAX_ITER, PERRON_TOL};
pub use ring::{Ring, Scalar};
pub use taylor::{cauchy_product, eval_taylor, Taylor, TaylorCoeffs};
