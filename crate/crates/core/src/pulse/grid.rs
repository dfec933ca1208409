use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sizing rules for [`SampledGrid`]. The defaults are the standard rule set;
/// every field can be overridden per run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridOptions {
    /// Frequency span (1/dt) over the pulse's rectangular bandwidth.
    pub bandwidth_factor: f64,
    /// Time span over `T0 + max delay`.
    pub duration_factor: f64,
    /// Output edge magnitude (relative to peak) that counts as wraparound.
    pub wrap_tolerance: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            bandwidth_factor: 8.0,
            duration_factor: 16.0,
            wrap_tolerance: 1e-3,
        }
    }
}

/// Uniform time grid of `len` samples with the origin at index `len / 2`,
/// paired with the angular-frequency grid of its DFT.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledGrid {
    len: usize,
    time_step: f64,
}

impl SampledGrid {
    pub fn new(len: usize, time_step: f64) -> Result<Self> {
        if len < 4 || !len.is_power_of_two() {
            return Err(Error::invalid(
                "n_samples",
                format!("must be a power of two >= 4, got {len}"),
            ));
        }
        if !(time_step.is_finite() && time_step > 0.0) {
            return Err(Error::invalid(
                "time_step",
                format!("must be positive, got {time_step}"),
            ));
        }
        Ok(Self { len, time_step })
    }

    /// Smallest power-of-two grid meeting the sizing rules for a pulse of
    /// rectangular bandwidth `bandwidth_hz` and duration budget `duration`
    /// (T0 plus the largest expected delay). `min_span` adds a floor on the
    /// time window, used for slowly decaying envelopes.
    pub fn sized_for(bandwidth_hz: f64, duration: f64, min_span: f64, options: &GridOptions) -> Result<Self> {
        if !(bandwidth_hz > 0.0 && duration > 0.0) {
            return Err(Error::invalid("grid", "bandwidth and duration must be positive"));
        }
        let time_step = 1.0 / (options.bandwidth_factor * bandwidth_hz);
        let span = (options.duration_factor * duration).max(min_span);
        let len = ((span / time_step).ceil() as usize).next_power_of_two().max(4);
        Self::new(len, time_step)
    }

    /// Checks an explicitly chosen grid against the sizing rules.
    pub fn check(&self, bandwidth_hz: f64, duration: f64, options: &GridOptions) -> Result<()> {
        let freq_span = 1.0 / self.time_step;
        if freq_span < options.bandwidth_factor * bandwidth_hz * (1.0 - 1e-12) {
            return Err(Error::GridConstraint(format!(
                "frequency span {:.4e} Hz is below {} x bandwidth {:.4e} Hz",
                freq_span, options.bandwidth_factor, bandwidth_hz
            )));
        }
        if self.time_span() < options.duration_factor * duration * (1.0 - 1e-12) {
            return Err(Error::GridConstraint(format!(
                "time span {:.4e} s is below {} x (T0 + max delay) = {:.4e} s",
                self.time_span(),
                options.duration_factor,
                options.duration_factor * duration
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time_step(&self) -> f64 {
        self.time_step
    }

    pub fn time_span(&self) -> f64 {
        self.len as f64 * self.time_step
    }

    pub fn omega_step(&self) -> f64 {
        2.0 * PI / self.time_span()
    }

    pub fn time(&self, k: usize) -> f64 {
        (k as f64 - (self.len / 2) as f64) * self.time_step
    }

    /// Baseband angular frequency of ascending-order bin `j`.
    pub fn omega(&self, j: usize) -> f64 {
        (j as f64 - (self.len / 2) as f64) * self.omega_step()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.time(k)).collect()
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.len).map(|j| self.omega(j)).collect()
    }
}
