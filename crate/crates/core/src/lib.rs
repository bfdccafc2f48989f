//! Numerics for false-vacuum tunneling of soliton/antisoliton pairs in
//! charge-density-wave conductors.
//!
//! The pipeline runs from the pinned sine-Gordon potential ([`vacuum`]) through
//! the thin-wall phase profile and its spectrum ([`profile`]), single-mode
//! Gaussian wavefunctionals ([`wavefunctional`]) and the tunneling matrix
//! element ([`transfer`]) to the I-E law, which [`fit`] compares against the
//! Zener law. [`pair_production`] evaluates the `D + 1` dimensional Schwinger
//! rates the I-E curve is compared with. Every sampled curve travels as a
//! [`series::CurveSeries`].
//!
//! Units follow the usual scaling `hbar = e = m = D w_p^2 = 1`.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fit;
pub mod pair_production;
pub mod profile;
pub mod quadrature;
pub mod roots;
pub mod series;
pub mod special;
pub mod transfer;
pub mod vacuum;
pub mod wavefunctional;

pub use error::{Error, Result};
pub use series::{CurveSeries, Grid, GridScale};
