//! Computer-assisted proofs of minimum-energy paths of the Müller-Brown potential.
//!
//! The crate validates, with interval arithmetic and radii-polynomial
//! contraction arguments, every ingredient of a chain of heteroclinic orbits
//! `Min1 <- Sad1 -> Min2 <- Sad2 -> Min3` of the gradient flow `x' = -grad V`:
//! critical points, one-dimensional unstable manifolds of the saddles,
//! trapping squares around the minima, and the connecting orbits between
//! them written as piecewise Chebyshev series.
//!
//! Modules build on each other bottom-up:
//! [`interval`] → [`series`] → [`potential`] → [`contraction`] →
//! [`equilibria`] → [`manifold`] → [`orbit`] → [`pipeline`].

pub mod contraction;
pub mod equilibria;
pub mod error;
pub mod interval;
pub mod linalg;
pub mod manifold;
pub mod ode;
pub mod orbit;
pub mod pipeline;
pub mod potential;
pub mod series;

pub use error::{Error, Result};
pub use interval::{IMatrix, IVector, Interval};
