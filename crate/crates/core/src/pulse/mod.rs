//! Time/frequency grids, pulse envelopes and linear propagation through a
//! transfer function.

mod envelope;
pub mod fourier;
mod grid;
mod propagate;
mod transfer;

pub use envelope::{PulseEnvelope, PulseShape, GAUSSIAN_EDGE_TOLERANCE, SINC_TIME_BANDWIDTH};
pub use grid::{GridOptions, SampledGrid};
pub use propagate::propagate;
pub use transfer::{cell_response, sample_cell_response, unwrap_phase, TransferFunction};
