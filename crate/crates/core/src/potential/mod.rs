//! The Müller-Brown potential and its polynomial lift to six dimensions.

mod field;
mod params;
mod surface;

pub use field::{field, jacobian, multi_index_of, multi_indices, tensor_action, Field, MultiIndex};
pub use params::{FieldCoeffs, MBParams, MBParamsDecimal};
pub use surface::{barrier, d3_v, d3v_norm_bound, dpsi, grad_v, hess_v, psi, v};

use crate::error::Result;
use crate::interval::Interval;

/// Lift of a planar point to the extended phase space, `(x, y, psi(x, y))`.
pub fn lift(p: &MBParams, x: Interval, y: Interval) -> Result<[Interval; 6]> {
    let s = psi(p, x, y)?;
    Ok([x, y, s[0], s[1], s[2], s[3]])
}
