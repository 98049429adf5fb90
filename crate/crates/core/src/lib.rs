//! Validated numerics for tangent inequalities on `(0, pi/2)`.
//!
//! Intervals with outward rounding, enclosures of the entire functions
//! `cos`, `sinc` and `p(x) = (sin x - x cos x)/x^3`, Taylor models about 0 and
//! pi/2, and a certifier that turns each inequality of the catalog into a
//! checkable certificate.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::approx_constant, clippy::excessive_precision))]

pub mod analysis;
pub mod certifier;
pub mod cli;
pub mod enclosures;
pub mod error;
pub mod hexfloat;
pub mod interval;
pub mod lemma;
pub mod series;
pub mod taylor;

pub use error::{Error, Result};
pub use interval::{Interval, Rational};
