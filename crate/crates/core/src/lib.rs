//! Broadband slow light in warm alkali vapor.
//!
//! The vapor is a sum of Lorentzian lines whose strength scales with a
//! temperature-dependent number density. Pulse envelopes are propagated
//! through the resulting linear transfer function and the output is scored
//! for delay, broadening, distortion and power leakage.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod metrics;
pub mod pulse;
pub mod scenario;
pub mod sweeps;
pub mod units;
pub mod vapor;

pub use error::{Error, Result};
