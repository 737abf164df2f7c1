//! Numerical laboratory for the N-player war of attrition.
//!
//! * [`prize`] - prize functions `V` and sampled prize sequences.
//! * [`dynamic`] - the re-randomising game as a pure-birth Markov chain.
//! * [`static_model`] - the one-shot game's ESS candidate `G_N`, its
//!   second-order certificate and the `delta_0` invasion gap.
//! * [`meanfield`] - the infinitely-many-players limit.
//! * [`simulate`] - seeded Monte Carlo of both games.
//! * [`cli`] - the `attrition` command-line front end.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod dynamic;
pub mod error;
pub mod meanfield;
pub mod numerics;
pub mod output;
pub mod prize;
pub mod simulate;
pub mod static_model;

pub use error::{Error, Result};
pub use prize::{Convexity, PrizeKind, PrizeSpec};
