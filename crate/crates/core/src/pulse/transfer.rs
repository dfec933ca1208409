use num_complex::Complex64;

use super::grid::SampledGrid;
use crate::error::{Error, Result};
use crate::units::{omega_to_wavelength_nm, SPEED_OF_LIGHT};
use crate::vapor::VaporCell;

/// `H(omega)` sampled on a grid's absolute frequency axis
/// `carrier + Omega_j`, in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    grid: SampledGrid,
    carrier: f64,
    values: Vec<Complex64>,
    vacuum_referenced: bool,
}

impl TransferFunction {
    /// `H = exp(i n omega L / c)` with `n = 1 + chi/2` and `L` the effective
    /// path. Vacuum referencing drops the `exp(i omega L / c)` factor so an
    /// empty cell gives `H = 1`.
    ///
    /// The linearized index is used at every bin, including bins close to a
    /// resonance where the pulse carries (almost) no energy.
    pub fn for_cell(cell: &VaporCell, grid: SampledGrid, carrier: f64, vacuum_referenced: bool) -> Result<Self> {
        let lowest = carrier + grid.omega(0);
        if !(lowest > 0.0) {
            return Err(Error::invalid(
                "grid",
                format!("absolute frequencies must be positive (lowest is {lowest:e} rad/s)"),
            ));
        }
        let length = cell.interaction_length();
        let values = (0..grid.len())
            .map(|j| cell_response(cell, carrier + grid.omega(j), length, vacuum_referenced))
            .collect();
        Ok(Self {
            grid,
            carrier,
            values,
            vacuum_referenced,
        })
    }

    /// Builds `H` from any function of absolute angular frequency.
    pub fn from_fn(grid: SampledGrid, carrier: f64, vacuum_referenced: bool, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|j| f(carrier + grid.omega(j))).collect();
        Self {
            grid,
            carrier,
            values,
            vacuum_referenced,
        }
    }

    pub fn grid(&self) -> &SampledGrid {
        &self.grid
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_vacuum_referenced(&self) -> bool {
        self.vacuum_referenced
    }

    pub fn absolute_omegas(&self) -> Vec<f64> {
        (0..self.grid.len())
            .map(|j| self.carrier + self.grid.omega(j))
            .collect()
    }

    pub fn unwrapped_phase(&self) -> Vec<f64> {
        unwrap_phase(&self.values)
    }

    /// Rows of (vacuum wavelength nm, |H|, unwrapped phase rad), ascending
    /// in frequency.
    pub fn table(&self) -> Vec<[f64; 3]> {
        self.absolute_omegas()
            .into_iter()
            .zip(&self.values)
            .zip(self.unwrapped_phase())
            .map(|((w, h), phase)| [omega_to_wavelength_nm(w), h.norm(), phase])
            .collect()
    }
}

/// `H` of a cell at a single absolute frequency.
pub fn cell_response(cell: &VaporCell, omega: f64, length: f64, vacuum_referenced: bool) -> Complex64 {
    let chi = cell.susceptibility(omega);
    let k0l = omega * length / SPEED_OF_LIGHT;
    // exp(i (n - 1) omega L / c) with n - 1 = chi / 2
    let excess = Complex64::new(0.0, 0.5 * k0l) * chi;
    let h = excess.exp();
    if vacuum_referenced {
        h
    } else {
        h * Complex64::from_polar(1.0, k0l)
    }
}

/// Samples a cell's transfer function at arbitrary absolute frequencies.
pub fn sample_cell_response(cell: &VaporCell, omegas: &[f64], vacuum_referenced: bool) -> Vec<Complex64> {
    let length = cell.interaction_length();
    omegas
        .iter()
        .map(|&w| cell_response(cell, w, length, vacuum_referenced))
        .collect()
}

/// Removes 2π jumps between consecutive samples.
pub fn unwrap_phase(values: &[Complex64]) -> Vec<f64> {
    use std::f64::consts::{PI, TAU};
    let mut out = Vec::with_capacity(values.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for v in values {
        let raw = v.arg();
        if let Some(p) = prev {
            let mut d = raw + offset - p;
            while d > PI {
                offset -= TAU;
                d -= TAU;
            }
            while d < -PI {
                offset += TAU;
                d += TAU;
            }
        }
        let phase = raw + offset;
        out.push(phase);
        prev = Some(phase);
    }
    out
}
