//! Temperature-dependent number density from a two-branch vapor-pressure fit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{BOLTZMANN, PASCAL_PER_TORR};

/// Coefficients of `log10(P / torr) = a + b/T + c*T + d*log10(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PressureBranch {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl PressureBranch {
    pub fn log10_torr(&self, kelvin: f64) -> f64 {
        self.a + self.b / kelvin + self.c * kelvin + self.d * kelvin.log10()
    }
}

fn unit_scale() -> f64 {
    1.0
}

/// Vapor-pressure parameterization plus ideal-gas conversion to atoms/m³.
///
/// `scale` multiplies the resulting density; it is the single calibration
/// knob and defaults to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityModel {
    pub name: String,
    pub solid: PressureBranch,
    pub liquid: PressureBranch,
    pub melting_point_k: f64,
    pub min_k: f64,
    pub max_k: f64,
    #[serde(default = "unit_scale")]
    pub scale: f64,
}

impl DensityModel {
    /// Nesmeyanov coefficients for rubidium.
    pub fn rubidium() -> Self {
        Self {
            name: "Rb (Nesmeyanov)".into(),
            solid: PressureBranch {
                a: -94.048_26,
                b: -1961.258,
                c: -0.037_716_87,
                d: 42.575_26,
            },
            liquid: PressureBranch {
                a: 15.882_53,
                b: -4529.635,
                c: 0.000_586_63,
                d: -2.991_38,
            },
            melting_point_k: 312.45,
            min_k: 290.0,
            max_k: 650.0,
            scale: 1.0,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.melting_point_k, self.min_k, self.max_k, self.scale]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.min_k <= 0.0 || self.min_k >= self.max_k {
            return Err(Error::Catalog(format!(
                "density model `{}` has an invalid validity range [{}, {}] K",
                self.name, self.min_k, self.max_k
            )));
        }
        if self.scale < 0.0 {
            return Err(Error::Catalog(format!(
                "density model `{}` has negative scale {}",
                self.name, self.scale
            )));
        }
        Ok(())
    }

    fn check_range(&self, kelvin: f64) -> Result<()> {
        if !(kelvin >= self.min_k && kelvin <= self.max_k) {
            return Err(Error::TemperatureOutOfRange {
                kelvin,
                min_k: self.min_k,
                max_k: self.max_k,
            });
        }
        Ok(())
    }

    /// Saturated vapor pressure in Pa.
    pub fn vapor_pressure(&self, kelvin: f64) -> Result<f64> {
        self.check_range(kelvin)?;
        let branch = if kelvin < self.melting_point_k {
            &self.solid
        } else {
            &self.liquid
        };
        Ok(10f64.powf(branch.log10_torr(kelvin)) * PASCAL_PER_TORR)
    }

    /// Ideal-gas number density `N = scale * P(T) / (k_B T)` in atoms/m³.
    pub fn number_density(&self, kelvin: f64) -> Result<f64> {
        Ok(self.scale * self.vapor_pressure(kelvin)? / (BOLTZMANN * kelvin))
    }
}
