//! Quadrature for Hadamard finite-part integrals
//!
//! Evaluates integrals of the form
//!
//! ```text
//!          b
//!         =∫  w(x) f(x) / (x - xi)^(p+1) dx,      a < xi < b,
//!          a
//! ```
//!
//! where `=∫` denotes the Hadamard finite part (the Cauchy principal value
//! when p = 0). The singular factor is subtracted out, the remaining smooth
//! integral is handled by a Gauss rule for the weight `w`, and the one
//! cancellation-prone divided difference at the Gauss node closest to `xi`
//! is replaced by the divided difference of a Lagrange interpolant built on
//! a well-separated equidistant node set. The interpolant's derivative
//! coefficients are computed through the cycle index of the symmetric
//! group, which keeps the whole coefficient column at O(k^2) cost.
//!
//! Module map:
//! - [`combinatorics`] — cycle index of the symmetric group, integer partitions
//! - [`orthogonal`] — Gauss rules and weight masses for the supported weights
//! - [`interpolation`] — node layout, derivative coefficients, divided differences
//! - [`moments`] — closed-form finite-part moments of the weights
//! - [`engine`] — assembly of the full rule, baseline rule, node-count search
//! - [`bounds`] — a-priori error bounds with ellipse-maximum estimation
//! - [`specialfn`] — exponential integral and exact reference values

// validation guards are written as `!(x < y)` so that NaN inputs fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod combinatorics;
pub mod engine;
mod error;
pub mod interpolation;
pub mod moments;
pub mod orthogonal;
pub mod specialfn;

pub use engine::{Integrand, QuadratureResult, RuleParameters, SearchCriterion};
pub use error::{Error, Result};
pub use interpolation::{CoefficientTable, NodeLayout, Orientation};
pub use orthogonal::{CustomWeight, GaussRule, WeightFamily, WeightKind};
