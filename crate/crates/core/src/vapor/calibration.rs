use serde::{Deserialize, Serialize};

use super::catalog::LineCatalog;
use super::cell::{plateau_midpoint, VaporCell};
use super::density::DensityModel;
use crate::error::{Error, Result};

/// Allowed range of the density scale factor. A factor outside it means the
/// vapor-pressure coefficients are too far off to be trusted.
pub const CALIBRATION_FACTOR_RANGE: (f64, f64) = (0.5, 2.0);

/// Pins the density scale so that the group delay of a reference cell,
/// taken at the frequency midpoint between the two lines bounding the widest
/// gap of the catalog, equals `target_delay`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    /// Seconds.
    pub target_delay: f64,
    pub temperature_c: f64,
    /// Effective interaction length, m.
    pub length: f64,
}

impl Calibration {
    /// 10 ps at 280 °C over a 21 cm (three-pass) path.
    pub fn rubidium_plateau() -> Self {
        Self {
            target_delay: 10e-12,
            temperature_c: 280.0,
            length: 0.21,
        }
    }

    /// Multiplier that must be applied to `model`'s density.
    pub fn factor(&self, catalog: &LineCatalog, model: &DensityModel) -> Result<f64> {
        if !(self.target_delay > 0.0 && self.length > 0.0) {
            return Err(Error::invalid(
                "calibration",
                "target delay and length must be positive",
            ));
        }
        let cell = VaporCell::new(catalog.clone(), model.clone(), self.temperature_c, self.length, 1)?;
        let delay = cell.group_delay(plateau_midpoint(catalog)?);
        if !(delay > 0.0) {
            return Err(Error::invalid("calibration", format!("reference delay is {delay:e} s")));
        }
        Ok(self.target_delay / delay)
    }

    /// Returns `model` rescaled, rejecting factors outside
    /// [`CALIBRATION_FACTOR_RANGE`].
    pub fn apply(&self, catalog: &LineCatalog, model: &DensityModel) -> Result<DensityModel> {
        let factor = self.factor(catalog, model)?;
        let (min, max) = CALIBRATION_FACTOR_RANGE;
        if !(min..=max).contains(&factor) {
            return Err(Error::CalibrationRejected { factor, min, max });
        }
        Ok(model.clone().with_scale(model.scale * factor))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vapor::CatalogFile;

    #[test]
    fn calibrated_plateau_hits_target() {
        let file = CatalogFile::rubidium();
        let cal = Calibration::rubidium_plateau();
        let model = cal.apply(&file.catalog, &file.density).unwrap();
        let cell = VaporCell::new(file.catalog, model, 280.0, 0.07, 3).unwrap();
        let delay = cell.group_delay(plateau_midpoint(cell.catalog()).unwrap());
        assert!((delay - 10e-12).abs() < 1e-24, "{delay:e}");
        let factor = Calibration::rubidium_plateau()
            .factor(cell.catalog(), &file.density)
            .unwrap();
        assert!((0.5..=2.0).contains(&factor), "{factor}");
    }

    #[test]
    fn rejects_far_off_coefficients() {
        let file = CatalogFile::rubidium();
        let bad = file.density.clone().with_scale(10.0);
        let err = Calibration::rubidium_plateau().apply(&file.catalog, &bad).unwrap_err();
        assert!(matches!(err, Error::CalibrationRejected { .. }));
    }
}
