//! One pulse through one cell: grid choice, synthesis, propagation, scoring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::PropagationReport;
use crate::pulse::{propagate, GridOptions, PulseEnvelope, PulseShape, SampledGrid, TransferFunction};
use crate::units::{omega_to_wavelength_nm, wavelength_nm_to_omega};
use crate::vapor::VaporCell;

/// Where a pulse is centered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Center {
    /// Vacuum wavelength in nm.
    Wavelength(f64),
    /// The cell's GVD zero between the lines bounding the widest gap.
    GvdZero,
}

impl Center {
    pub fn omega(&self, cell: &VaporCell) -> Result<f64> {
        match *self {
            Center::Wavelength(nm) if nm.is_finite() && nm > 0.0 => Ok(wavelength_nm_to_omega(nm)),
            Center::Wavelength(nm) => Err(Error::invalid("center_nm", format!("must be positive, got {nm}"))),
            Center::GvdZero => cell.gvd_zero(),
        }
    }

    pub fn wavelength_nm(&self, cell: &VaporCell) -> Result<f64> {
        match *self {
            Center::Wavelength(nm) => self.omega(cell).map(|_| nm),
            Center::GvdZero => self.omega(cell).map(omega_to_wavelength_nm),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseRecipe {
    pub shape: PulseShape,
    /// Intensity FWHM, s.
    pub t0: f64,
    pub center: Center,
}

impl PulseRecipe {
    pub fn new(shape: PulseShape, t0: f64, center: Center) -> Self {
        Self { shape, t0, center }
    }

    pub fn synthesize(&self, carrier: f64, grid: SampledGrid, options: &GridOptions) -> Result<PulseEnvelope> {
        match self.shape {
            PulseShape::Gaussian => PulseEnvelope::gaussian(self.t0, carrier, grid),
            PulseShape::Sinc => PulseEnvelope::sinc(self.t0, carrier, grid, options.wrap_tolerance),
        }
    }

    /// Grid meeting the sizing rules for this pulse and a delay budget.
    pub fn grid(&self, max_delay: f64, options: &GridOptions) -> Result<SampledGrid> {
        let bandwidth = self.shape.sizing_bandwidth(self.t0);
        SampledGrid::sized_for(
            bandwidth,
            self.t0 + max_delay.max(0.0),
            self.shape.min_window(self.t0, options.wrap_tolerance),
            options,
        )
    }
}

/// Grid settings for a run: the sizing rules and an optional explicit grid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub grid: GridOptions,
    pub fixed_grid: Option<SampledGrid>,
}

impl SimOptions {
    /// Resolves the grid for `recipe` with a delay budget, validating a
    /// fixed grid against the sizing rules.
    pub fn resolve_grid(&self, recipe: &PulseRecipe, max_delay: f64) -> Result<SampledGrid> {
        match self.fixed_grid {
            Some(grid) => {
                grid.check(
                    recipe.shape.sizing_bandwidth(recipe.t0),
                    recipe.t0 + max_delay.max(0.0),
                    &self.grid,
                )?;
                Ok(grid)
            }
            None => recipe.grid(max_delay, &self.grid),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub input: PulseEnvelope,
    pub transfer: TransferFunction,
    pub report: PropagationReport,
}

/// Delay budget used for grid sizing: twice the group delay at the carrier.
pub fn delay_budget(cell: &VaporCell, carrier: f64) -> f64 {
    2.0 * cell.group_delay(carrier).abs()
}

/// Propagates `recipe` through `cell` on `grid` (vacuum referenced).
pub fn simulate_on(
    cell: &VaporCell,
    recipe: &PulseRecipe,
    grid: SampledGrid,
    options: &GridOptions,
) -> Result<Simulation> {
    let carrier = recipe.center.omega(cell)?;
    let input = recipe.synthesize(carrier, grid, options)?;
    let transfer = TransferFunction::for_cell(cell, grid, carrier, true)?;
    let output = propagate(&input, &transfer, options.wrap_tolerance)?;
    let report = PropagationReport::analyze(&input, output, &transfer)?;
    Ok(Simulation {
        input,
        transfer,
        report,
    })
}

/// Propagates `recipe` through `cell` on a grid sized for this cell.
pub fn simulate(cell: &VaporCell, recipe: &PulseRecipe, options: &SimOptions) -> Result<Simulation> {
    let carrier = recipe.center.omega(cell)?;
    let grid = options.resolve_grid(recipe, delay_budget(cell, carrier))?;
    simulate_on(cell, recipe, grid, &options.grid)
}
