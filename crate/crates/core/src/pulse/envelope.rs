use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fourier;
use super::grid::SampledGrid;
use crate::error::{Error, Result};

/// Intensity FWHM times bandwidth for a rectangular field spectrum (sinc² pulse).
pub const SINC_TIME_BANDWIDTH: f64 = 0.885_892_941_378_901;

/// Edge tolerance applied to Gaussian envelopes at construction.
pub const GAUSSIAN_EDGE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseShape {
    Gaussian,
    /// Rectangular spectrum.
    #[serde(alias = "rectangular")]
    Sinc,
}

impl PulseShape {
    /// Rectangular bandwidth (Hz) used for grid sizing: the sinc passband for
    /// a sinc pulse, and the same figure for a Gaussian of equal T0.
    pub fn sizing_bandwidth(self, t0: f64) -> f64 {
        SINC_TIME_BANDWIDTH / t0
    }

    /// Minimum time window. A sinc envelope decays as 1/t and needs this span
    /// to fall to `wrap_tolerance / 8` of its peak at the edges. Gaussian
    /// wings that reach a resonance pick up delays of hundreds of ps, so the
    /// same floor keeps their wrapped remainder below tolerance.
    pub fn min_window(self, t0: f64, wrap_tolerance: f64) -> f64 {
        16.0 / (PI * self.sizing_bandwidth(t0) * wrap_tolerance)
    }
}

impl std::str::FromStr for PulseShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(PulseShape::Gaussian),
            "sinc" | "rectangular" => Ok(PulseShape::Sinc),
            other => Err(Error::invalid("shape", format!("unknown pulse shape `{other}`"))),
        }
    }
}

/// Complex field envelope on a grid, riding on `carrier` (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct PulseEnvelope {
    grid: SampledGrid,
    carrier: f64,
    samples: Vec<Complex64>,
}

impl PulseEnvelope {
    /// Wraps samples after checking length, finite energy and that the
    /// window edges sit below `edge_tolerance` of the peak.
    pub fn new(grid: SampledGrid, carrier: f64, samples: Vec<Complex64>, edge_tolerance: f64) -> Result<Self> {
        let pulse = Self::unchecked(grid, carrier, samples)?;
        let energy = pulse.energy();
        if !(energy.is_finite() && energy > 0.0) {
            return Err(Error::invalid("envelope", "energy must be finite and nonzero"));
        }
        let ratio = pulse.edge_ratio();
        if ratio > edge_tolerance {
            return Err(Error::Wraparound {
                ratio,
                limit: edge_tolerance,
            });
        }
        Ok(pulse)
    }

    pub(crate) fn unchecked(grid: SampledGrid, carrier: f64, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::invalid(
                "envelope",
                format!("{} samples for a {}-point grid", samples.len(), grid.len()),
            ));
        }
        if !(carrier.is_finite() && carrier > 0.0) {
            return Err(Error::invalid("carrier", format!("must be positive, got {carrier}")));
        }
        Ok(Self { grid, carrier, samples })
    }

    /// `E(t) = exp(-2 ln2 t² / T0²)`: unit peak, intensity FWHM exactly `t0`.
    pub fn gaussian(t0: f64, carrier: f64, grid: SampledGrid) -> Result<Self> {
        check_t0(t0)?;
        let samples = grid
            .times()
            .into_iter()
            .map(|t| Complex64::new((-2.0 * LN_2 * t * t / (t0 * t0)).exp(), 0.0))
            .collect();
        Self::new(grid, carrier, samples, GAUSSIAN_EDGE_TOLERANCE)
    }

    /// Rectangular field spectrum of full width `0.8859 / t0` Hz centered on
    /// the carrier, synthesized on the grid's frequency bins (edge bins get
    /// their fractional overlap). Unit peak at t = 0.
    pub fn sinc(t0: f64, carrier: f64, grid: SampledGrid, wrap_tolerance: f64) -> Result<Self> {
        check_t0(t0)?;
        let half_width = PI * SINC_TIME_BANDWIDTH / t0;
        let step = grid.omega_step();
        if half_width < step {
            return Err(Error::GridConstraint(
                "sinc passband is narrower than one frequency bin".into(),
            ));
        }
        let spectrum: Vec<Complex64> = (0..grid.len())
            .map(|j| {
                let w = grid.omega(j);
                let lo = (w - 0.5 * step).max(-half_width);
                let hi = (w + 0.5 * step).min(half_width);
                Complex64::new(((hi - lo) / step).max(0.0), 0.0)
            })
            .collect();
        let mut samples = fourier::from_spectrum(&spectrum);
        let peak = samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for s in &mut samples {
            *s /= peak;
        }
        Self::new(grid, carrier, samples, wrap_tolerance)
    }

    pub fn grid(&self) -> &SampledGrid {
        &self.grid
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.norm_sqr()).collect()
    }

    /// `sum |E|² dt`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.time_step()
    }

    pub fn peak_magnitude(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest magnitude in the outer 1/64 of the window on either side,
    /// relative to the peak.
    pub fn edge_ratio(&self) -> f64 {
        let n = self.samples.len();
        let band = (n / 64).max(1);
        let edge = self.samples[..band]
            .iter()
            .chain(&self.samples[n - band..])
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        edge / self.peak_magnitude()
    }

    /// Spectrum in ascending baseband frequency order.
    pub fn spectrum(&self) -> Vec<Complex64> {
        fourier::to_spectrum(&self.samples)
    }

    /// Circularly delays the envelope by `k` samples.
    pub fn shifted(&self, k: isize) -> Self {
        let mut samples = self.samples.clone();
        let n = samples.len() as isize;
        samples.rotate_right(k.rem_euclid(n) as usize);
        Self {
            grid: self.grid,
            carrier: self.carrier,
            samples,
        }
    }

    /// Same envelope with samples replaced by `f(samples)`.
    pub fn map_samples(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            carrier: self.carrier,
            samples: self.samples.iter().map(|&c| f(c)).collect(),
        }
    }

    /// `a * self + b * other`; both must share a grid and carrier.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.grid != other.grid || self.carrier != other.carrier {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            carrier: self.carrier,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }
}

fn check_t0(t0: f64) -> Result<()> {
    if !(t0.is_finite() && t0 > 0.0) {
        return Err(Error::invalid("t0", format!("must be positive, got {t0}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::intensity_fwhm;

    const CARRIER: f64 = 2.39e15;

    #[test]
    fn gaussian_fwhm_matches_t0() {
        let t0 = 250e-15;
        let grid = SampledGrid::new(4096, 5e-15).unwrap();
        let pulse = PulseEnvelope::gaussian(t0, CARRIER, grid).unwrap();
        let fwhm = intensity_fwhm(&pulse).unwrap();
        assert!((fwhm - t0).abs() < grid.time_step(), "{fwhm:e}");
        assert!((pulse.peak_magnitude() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_energy_matches_closed_form() {
        // integral of exp(-4 ln2 t²/T0²) dt = T0 sqrt(pi / (4 ln2))
        let t0 = 250e-15;
        let grid = SampledGrid::new(4096, 5e-15).unwrap();
        let pulse = PulseEnvelope::gaussian(t0, CARRIER, grid).unwrap();
        let exact = t0 * (PI / (4.0 * LN_2)).sqrt();
        assert!((pulse.energy() - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn gaussian_time_bandwidth_product() {
        let t0 = 250e-15;
        let grid = SampledGrid::new(1 << 14, 2e-15).unwrap();
        let pulse = PulseEnvelope::gaussian(t0, CARRIER, grid).unwrap();
        let power: Vec<f64> = pulse.spectrum().iter().map(|c| c.norm_sqr()).collect();
        let width_bins = half_max_width(&power);
        let df = 1.0 / grid.time_span();
        let tbp = width_bins * df * t0;
        assert!((tbp - 2.0 * LN_2 / PI).abs() < 2e-3, "{tbp}");
    }

    // Linear-interpolated full width at half maximum, in bins.
    fn half_max_width(y: &[f64]) -> f64 {
        let peak = y.iter().cloned().fold(0.0, f64::max);
        let half = peak / 2.0;
        let first = y.iter().position(|&v| v >= half).unwrap();
        let last = y.len() - 1 - y.iter().rev().position(|&v| v >= half).unwrap();
        let left = first as f64 - (y[first] - half) / (y[first] - y[first - 1]);
        let right = last as f64 + (y[last] - half) / (y[last] - y[last + 1]);
        right - left
    }

    #[test]
    fn sinc_spectrum_is_flat_and_band_limited() {
        let t0 = 250e-15;
        let grid = SampledGrid::sized_for(
            PulseShape::Sinc.sizing_bandwidth(t0),
            t0,
            PulseShape::Sinc.min_window(t0, 1e-3),
            &Default::default(),
        )
        .unwrap();
        let pulse = PulseEnvelope::sinc(t0, CARRIER, grid, 1e-3).unwrap();
        let spec = pulse.spectrum();
        let half_width = PI * SINC_TIME_BANDWIDTH / t0;
        let step = grid.omega_step();
        let level = spec[grid.len() / 2].norm();
        for (j, z) in spec.iter().enumerate() {
            let w = grid.omega(j).abs();
            if w + 0.5 * step <= half_width {
                assert!((z.norm() - level).abs() < 1e-6 * level, "bin {j}");
            } else if w - 0.5 * step >= half_width {
                assert!(z.norm() < 1e-6 * level, "bin {j}");
            }
        }
    }

    #[test]
    fn sinc_bandwidth_for_250_fs() {
        let dnu = PulseShape::Sinc.sizing_bandwidth(250e-15);
        assert!((dnu - 3.5e12).abs() < 0.05e12, "{dnu:e}");
        let nm = crate::units::bandwidth_hz_to_nm(dnu, 788.0);
        assert!((nm - 6.9).abs() < 0.5, "{nm}");
    }

    #[test]
    fn sinc_fwhm_matches_t0() {
        let t0 = 650e-15;
        let grid = SampledGrid::sized_for(
            PulseShape::Sinc.sizing_bandwidth(t0),
            t0,
            PulseShape::Sinc.min_window(t0, 1e-3),
            &Default::default(),
        )
        .unwrap();
        let pulse = PulseEnvelope::sinc(t0, CARRIER, grid, 1e-3).unwrap();
        let fwhm = intensity_fwhm(&pulse).unwrap();
        assert!((fwhm - t0).abs() < grid.time_step(), "{fwhm:e} vs {t0:e}");
    }

    #[test]
    fn tight_window_is_rejected_for_gaussian() {
        let grid = SampledGrid::new(64, 10e-15).unwrap();
        assert!(matches!(
            PulseEnvelope::gaussian(250e-15, CARRIER, grid),
            Err(Error::Wraparound { .. })
        ));
    }
}
