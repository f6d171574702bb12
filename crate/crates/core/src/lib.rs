//! Sub-Riemannian geodesics on the Engel group.
//!
//! The left-invariant problem on the Engel group with the frame
//! X₁ = ∂x − (y/2)∂z, X₂ = ∂y + (x/2)∂z + (x²/2)∂w: extremals via the pendulum
//! reduction ([`expmap`]), the cut time and the stratification of the cut
//! locus ([`cutlocus`]), and the set of all minimizers to a given point
//! ([`synthesis`]).

// `!(x > 0.0)` is the NaN-rejecting form of a positivity guard
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cutlocus;
pub mod elliptic;
pub mod error;
pub mod expmap;
pub mod group;
pub mod ode;
pub(crate) mod roots;
pub mod selftest;
pub mod synthesis;

pub use error::{Error, Result};
