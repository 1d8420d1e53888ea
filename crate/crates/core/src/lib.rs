//! Rigorous evaluation of arithmetic Gevrey series: E-functions, Borel–Laplace
//! sums of divergent Ж-series, identity verification and relation probing.
// `!(x < y)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod borel;
pub mod error;
pub mod identities;
pub mod instrument;
pub mod oracles;
pub mod pslq;
pub mod series;

pub use ball::{Ball, ComplexBall, Mag, PrecisionContext};
pub use error::{Error, Result};
pub use rug::{Integer, Rational};
