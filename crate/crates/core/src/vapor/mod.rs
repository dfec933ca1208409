//! Lorentzian vapor model: catalogs, density, and the optical response of a cell.

mod calibration;
mod catalog;
mod cell;
mod density;

pub use calibration::{Calibration, CALIBRATION_FACTOR_RANGE};
pub use catalog::{CatalogFile, LineCatalog, SpectralLine};
pub use cell::{
    dispersion_per_atom, find_gvd_zero, plateau_bracket, plateau_midpoint, Dispersion, VaporCell, CHI_LIMIT,
};
pub use density::{DensityModel, PressureBranch};
