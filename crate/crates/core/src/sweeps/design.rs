use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{distortion_of_samples, Distortion};
use crate::pulse::{sample_cell_response, SINC_TIME_BANDWIDTH};
use crate::scenario::Center;
use crate::units::{bandwidth_nm_to_hz, kelvin_to_celsius, omega_to_wavelength_nm};
use crate::vapor::VaporCell;

/// Frequency samples used to evaluate distortion over a band.
pub const BAND_SAMPLES: usize = 4097;

/// What stopped the temperature search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignLimit {
    /// Raising the temperature further would exceed the distortion budget.
    Distortion,
    /// The budget holds up to the top of the temperature range.
    TemperatureRange,
    /// The budget is already violated at the bottom of the range.
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignSearch {
    /// Distortion budget applied to both D_a and D_p.
    pub max_distortion: f64,
    /// °C.
    pub min_temperature_c: f64,
    /// °C.
    pub max_temperature_c: f64,
    /// Scan step, °C; at most 1.
    pub temperature_step_c: f64,
}

impl DesignSearch {
    /// Full range of the cell's density model at 1 °C steps.
    pub fn over_model_range(cell: &VaporCell, max_distortion: f64) -> Self {
        let model = cell.density_model();
        Self {
            max_distortion,
            min_temperature_c: kelvin_to_celsius(model.min_k),
            max_temperature_c: kelvin_to_celsius(model.max_k),
            temperature_step_c: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.max_distortion > 0.0) {
            return Err(Error::invalid("max_distortion", "must be positive"));
        }
        if !(self.min_temperature_c <= self.max_temperature_c) {
            return Err(Error::invalid("temperature range", "is empty"));
        }
        if !(self.temperature_step_c > 0.0 && self.temperature_step_c <= 1.0) {
            return Err(Error::invalid("temperature_step_c", "must be in (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    /// Hz.
    pub bandwidth_hz: f64,
    /// Intensity FWHM of the matching sinc pulse, s.
    pub t0: f64,
    pub center_nm: f64,
    /// Best fractional delay; 0 when infeasible.
    pub fractional_delay: f64,
    /// °C; NaN when infeasible.
    pub temperature_c: f64,
    /// Group delay at the center, s.
    pub delay: f64,
    pub amplitude_distortion: f64,
    pub phase_distortion: f64,
    pub limit: DesignLimit,
}

impl DesignPoint {
    pub fn feasible(&self) -> bool {
        self.limit != DesignLimit::Infeasible
    }
}

/// Distortion of the cell response over the band `carrier ± π B`.
pub fn band_distortion(cell: &VaporCell, carrier: f64, bandwidth_hz: f64) -> Result<Distortion> {
    let half = PI * bandwidth_hz;
    let step = 2.0 * half / (BAND_SAMPLES - 1) as f64;
    let omegas: Vec<f64> = (0..BAND_SAMPLES).map(|i| carrier - half + i as f64 * step).collect();
    distortion_of_samples(&omegas, &sample_cell_response(cell, &omegas, true))
}

/// Largest fractional delay of a rectangular-spectrum pulse of
/// `bandwidth_hz` keeping both distortions below the budget, with the cell
/// temperature as the only free parameter.
///
/// Distortion grows with density, so the scan stops at the first violation
/// and the boundary is bisected down to 1e-6 °C.
pub fn max_fractional_delay(
    template: &VaporCell,
    center: Center,
    bandwidth_hz: f64,
    search: &DesignSearch,
) -> Result<DesignPoint> {
    search.validate()?;
    if !(bandwidth_hz > 0.0 && bandwidth_hz.is_finite()) {
        return Err(Error::invalid("bandwidth", "must be positive"));
    }
    let carrier = center.omega(template)?;
    let center_nm = center.wavelength_nm(template)?;
    if carrier - PI * bandwidth_hz <= 0.0 {
        return Err(Error::invalid("bandwidth", "band extends below zero frequency"));
    }
    let t0 = SINC_TIME_BANDWIDTH / bandwidth_hz;
    let eval = |t: f64| -> Result<(VaporCell, Distortion)> {
        let cell = template.at_temperature_c(t)?;
        let d = band_distortion(&cell, carrier, bandwidth_hz)?;
        Ok((cell, d))
    };

    let budget = search.max_distortion;
    let mut best: Option<(f64, VaporCell, Distortion)> = None;
    let mut violated_at = None;
    let n = ((search.max_temperature_c - search.min_temperature_c) / search.temperature_step_c).ceil() as usize;
    for i in 0..=n {
        let t = (search.min_temperature_c + i as f64 * search.temperature_step_c).min(search.max_temperature_c);
        let (cell, d) = eval(t)?;
        if d.within(budget) {
            best = Some((t, cell, d));
        } else {
            violated_at = Some(t);
            break;
        }
    }

    let limit;
    match (best.take(), violated_at) {
        (None, _) => {
            return Ok(DesignPoint {
                bandwidth_hz,
                t0,
                center_nm,
                fractional_delay: 0.0,
                temperature_c: f64::NAN,
                delay: 0.0,
                amplitude_distortion: f64::NAN,
                phase_distortion: f64::NAN,
                limit: DesignLimit::Infeasible,
            })
        }
        (Some(ok), None) => {
            limit = DesignLimit::TemperatureRange;
            best = Some(ok);
        }
        (Some(ok), Some(bad)) => {
            limit = DesignLimit::Distortion;
            let (mut lo, mut hi) = (ok.0, bad);
            best = Some(ok);
            while hi - lo > 1e-6 {
                let mid = 0.5 * (lo + hi);
                let (cell, d) = eval(mid)?;
                if d.within(budget) {
                    lo = mid;
                    best = Some((mid, cell, d));
                } else {
                    hi = mid;
                }
            }
        }
    }
    let (temperature_c, cell, d) = best.expect("feasible point");
    let delay = cell.group_delay(carrier);
    Ok(DesignPoint {
        bandwidth_hz,
        t0,
        center_nm,
        fractional_delay: delay / t0,
        temperature_c,
        delay,
        amplitude_distortion: d.amplitude,
        phase_distortion: d.phase,
        limit,
    })
}

/// [`max_fractional_delay`] for each bandwidth, in parallel, in input order.
pub fn design_curve(
    template: &VaporCell,
    center: Center,
    bandwidths_hz: &[f64],
    search: &DesignSearch,
) -> Result<Vec<DesignPoint>> {
    bandwidths_hz
        .par_iter()
        .map(|&b| max_fractional_delay(template, center, b, search))
        .collect()
}

/// Bandwidth in Hz of a band `width_nm` wide centered on `center`.
pub fn bandwidth_at(center: f64, width_nm: f64) -> f64 {
    bandwidth_nm_to_hz(width_nm, omega_to_wavelength_nm(center))
}
