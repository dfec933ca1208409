use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::range::SweepRange;
use crate::error::Result;
use crate::units::{omega_to_wavelength_nm, wavelength_nm_to_omega};
use crate::vapor::{plateau_bracket, VaporCell};

/// Tolerated excess of `n_g - 1` over its in-band minimum (50%).
pub const UNIFORM_BAND_VARIATION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayRow {
    pub wavelength_nm: f64,
    /// s
    pub group_delay: f64,
    pub group_index: f64,
    pub transmission: f64,
}

/// Region around the GVD zero where `n_g - 1` stays within 50% of its value
/// there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformBand {
    pub center_nm: f64,
    /// Group delay at the band center, s.
    pub reference_delay: f64,
    pub short_edge_nm: f64,
    pub long_edge_nm: f64,
    pub width_nm: f64,
    pub width_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelaySpectrum {
    pub rows: Vec<DelayRow>,
    pub uniform_band: Option<UniformBand>,
}

impl DelaySpectrum {
    pub fn max_delay(&self) -> f64 {
        self.rows.iter().map(|r| r.group_delay).fold(f64::MIN, f64::max)
    }
}

/// Group delay, group index and transmission on an evenly spaced wavelength
/// grid, plus the uniform slow-light band.
pub fn delay_spectrum(cell: &VaporCell, wavelengths_nm: &SweepRange) -> Result<DelaySpectrum> {
    wavelengths_nm.validate()?;
    let rows = wavelengths_nm
        .values()
        .par_iter()
        .map(|&nm| {
            let w = wavelength_nm_to_omega(nm);
            DelayRow {
                wavelength_nm: nm,
                group_delay: cell.group_delay(w),
                group_index: cell.group_index(w),
                transmission: cell.transmission(w),
            }
        })
        .collect();
    Ok(DelaySpectrum {
        rows,
        uniform_band: uniform_band(cell),
    })
}

/// `None` for an empty cell or a single-line catalog.
pub fn uniform_band(cell: &VaporCell) -> Option<UniformBand> {
    let (lo, hi) = plateau_bracket(cell.catalog()).ok()?;
    let center = cell.gvd_zero().ok()?;
    let reference = cell.group_delay(center);
    if !(reference > 0.0) {
        return None;
    }
    let limit = (1.0 + UNIFORM_BAND_VARIATION) * reference;
    let excess = |w: f64| cell.group_delay(w) - limit;
    let low_edge = bisect(excess, lo, center)?;
    let high_edge = bisect(excess, center, hi)?;
    // higher frequency is the shorter wavelength
    let short_edge_nm = omega_to_wavelength_nm(high_edge);
    let long_edge_nm = omega_to_wavelength_nm(low_edge);
    Some(UniformBand {
        center_nm: omega_to_wavelength_nm(center),
        reference_delay: reference,
        short_edge_nm,
        long_edge_nm,
        width_nm: long_edge_nm - short_edge_nm,
        width_hz: (high_edge - low_edge) / std::f64::consts::TAU,
    })
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = f(a);
    if fa.signum() == f(b).signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a <= 1e-13 * m {
            break;
        }
        let fm = f(m);
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}
