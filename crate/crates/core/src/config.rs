//! Run configuration (TOML) and its resolution into model objects.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::Format;
use crate::pulse::{GridOptions, PulseShape, SampledGrid, SINC_TIME_BANDWIDTH};
use crate::scenario::{Center, PulseRecipe, SimOptions};
use crate::sweeps::{DesignSearch, SweepParameter, SweepRange};
use crate::units::{bandwidth_nm_to_hz, omega_to_wavelength_nm};
use crate::vapor::{Calibration, CatalogFile, DensityModel, VaporCell};

/// Environment variable naming a directory searched for relative catalog
/// paths not found next to the config file.
pub const CATALOG_DIR_ENV: &str = "SLOWLIGHT_CATALOG_DIR";

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Catalog file; the bundled two-line rubidium catalog when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    pub cell: CellConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationConfig>,
    pub pulse: PulseConfig,
    pub grid: GridConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignConfig>,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CellConfig {
    pub temperature_c: f64,
    /// Single-pass length, m.
    pub length_m: f64,
    pub passes: u32,
    /// Fixed atom density in m^-3, bypassing the density model (0 for an
    /// empty cell).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub number_density: Option<f64>,
}

impl Default for CellConfig {
    fn default() -> Self {
        Self {
            temperature_c: 280.0,
            length_m: 0.07,
            passes: 1,
            number_density: None,
        }
    }
}

/// Density calibration: scale N(T) so the mid-gap group delay of the
/// reference cell equals the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    pub target_delay_ps: f64,
    pub temperature_c: f64,
    /// Total path length, m.
    pub length_m: f64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        let c = Calibration::rubidium_plateau();
        Self {
            target_delay_ps: c.target_delay * 1e12,
            temperature_c: c.temperature_c,
            length_m: c.length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseConfig {
    pub shape: PulseShape,
    /// Intensity FWHM, fs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0_fs: Option<f64>,
    /// Rectangular spectral width, nm; alternative to `t0_fs`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_nm: Option<f64>,
    /// Carrier wavelength, nm; the GVD zero when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_nm: Option<f64>,
    /// Envelope file (`t, re, im`) to propagate instead of a synthesized
    /// pulse.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

impl Default for PulseConfig {
    fn default() -> Self {
        Self {
            shape: PulseShape::Sinc,
            t0_fs: None,
            bandwidth_nm: None,
            center_nm: None,
            file: None,
        }
    }
}

pub const DEFAULT_T0_FS: f64 = 250.0;

impl PulseConfig {
    pub fn center(&self) -> Center {
        self.center_nm.map_or(Center::GvdZero, Center::Wavelength)
    }

    pub fn recipe(&self, cell: &VaporCell) -> Result<PulseRecipe> {
        let center = self.center();
        let t0 = match (self.t0_fs, self.bandwidth_nm) {
            (Some(_), Some(_)) => {
                return Err(Error::invalid("pulse", "give t0_fs or bandwidth_nm, not both"));
            }
            (Some(fs), None) => positive("pulse.t0_fs", fs)? * 1e-15,
            (None, Some(nm)) => {
                let lambda = omega_to_wavelength_nm(center.omega(cell)?);
                SINC_TIME_BANDWIDTH / bandwidth_nm_to_hz(positive("pulse.bandwidth_nm", nm)?, lambda)
            }
            (None, None) => DEFAULT_T0_FS * 1e-15,
        };
        Ok(PulseRecipe::new(self.shape, t0, center))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wrap_tolerance: Option<f64>,
    /// Explicit grid: sample count (power of two) and step in fs. Both or
    /// neither.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_step_fs: Option<f64>,
}

impl GridConfig {
    pub fn sim_options(&self) -> Result<SimOptions> {
        let d = GridOptions::default();
        let grid = GridOptions {
            bandwidth_factor: positive(
                "grid.bandwidth_factor",
                self.bandwidth_factor.unwrap_or(d.bandwidth_factor),
            )?,
            duration_factor: positive(
                "grid.duration_factor",
                self.duration_factor.unwrap_or(d.duration_factor),
            )?,
            wrap_tolerance: positive("grid.wrap_tolerance", self.wrap_tolerance.unwrap_or(d.wrap_tolerance))?,
        };
        let fixed_grid = match (self.points, self.time_step_fs) {
            (Some(n), Some(fs)) => Some(SampledGrid::new(n, fs * 1e-15)?),
            (None, None) => None,
            _ => return Err(Error::invalid("grid", "points and time_step_fs must be given together")),
        };
        Ok(SimOptions { grid, fixed_grid })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub start_nm: f64,
    pub stop_nm: f64,
    pub step_nm: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            start_nm: 772.0,
            stop_nm: 796.0,
            step_nm: 0.05,
        }
    }
}

impl SpectrumConfig {
    pub fn range(&self) -> Result<SweepRange> {
        SweepRange::new(self.start_nm, self.stop_nm, self.step_nm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Temperature in °C; wavelength (pulse center) and bandwidth in nm.
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Extra pulses swept together (temperature sweeps only); `[pulse]` is
    /// used when empty.
    #[serde(default, rename = "recipe", skip_serializing_if = "Vec::is_empty")]
    pub recipes: Vec<PulseConfig>,
}

impl SweepConfig {
    pub fn range(&self) -> Result<SweepRange> {
        SweepRange::new(self.start, self.stop, self.step)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignConfig {
    pub max_distortion: f64,
    pub bandwidth_start_nm: f64,
    pub bandwidth_stop_nm: f64,
    pub bandwidth_step_nm: f64,
    /// Defaults to the density model's range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_temperature_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_temperature_c: Option<f64>,
    pub temperature_step_c: f64,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            max_distortion: 0.05,
            bandwidth_start_nm: 1.0,
            bandwidth_stop_nm: 8.0,
            bandwidth_step_nm: 0.25,
            min_temperature_c: None,
            max_temperature_c: None,
            temperature_step_c: 1.0,
        }
    }
}

impl DesignConfig {
    pub fn search(&self, cell: &VaporCell) -> Result<DesignSearch> {
        let mut s = DesignSearch::over_model_range(cell, self.max_distortion);
        if let Some(t) = self.min_temperature_c {
            s.min_temperature_c = t;
        }
        if let Some(t) = self.max_temperature_c {
            s.max_temperature_c = t;
        }
        s.temperature_step_c = self.temperature_step_c;
        s.validate()?;
        Ok(s)
    }

    pub fn bandwidths_nm(&self) -> Result<SweepRange> {
        SweepRange::new(self.bandwidth_start_nm, self.bandwidth_stop_nm, self.bandwidth_step_nm)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Output file; standard output when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub format: Format,
    /// Also export the transfer function (propagate only).
    pub transfer: bool,
}

/// A config turned into ready-to-use model objects.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub catalog_path: Option<PathBuf>,
    /// Density scale applied by calibration (1 when none).
    pub density_scale: f64,
    pub cell: VaporCell,
    pub options: SimOptions,
}

impl RunConfig {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Finds the catalog relative to `base_dir`, then under
    /// [`CATALOG_DIR_ENV`].
    pub fn catalog_path(&self, base_dir: &Path) -> Option<PathBuf> {
        let name = Path::new(self.catalog.as_deref()?);
        if name.is_absolute() {
            return Some(name.to_path_buf());
        }
        let local = base_dir.join(name);
        if local.exists() {
            return Some(local);
        }
        match std::env::var_os(CATALOG_DIR_ENV) {
            Some(dir) if !dir.is_empty() => {
                let candidate = Path::new(&dir).join(name);
                Some(if candidate.exists() { candidate } else { local })
            }
            _ => Some(local),
        }
    }

    pub fn resolve(&self, base_dir: &Path) -> Result<Resolved> {
        let catalog_path = self.catalog_path(base_dir);
        let file = match &catalog_path {
            Some(p) => CatalogFile::load(p)?,
            None => CatalogFile::rubidium(),
        };
        let mut density: DensityModel = file.density.clone();
        if let Some(c) = &self.calibration {
            let cal = Calibration {
                target_delay: positive("calibration.target_delay_ps", c.target_delay_ps)? * 1e-12,
                temperature_c: c.temperature_c,
                length: positive("calibration.length_m", c.length_m)?,
            };
            density = cal.apply(&file.catalog, &density)?;
        }
        let density_scale = density.scale / file.density.scale;
        let cell_cfg = &self.cell;
        if cell_cfg.passes == 0 {
            return Err(Error::invalid("cell.passes", "must be at least 1"));
        }
        positive("cell.length_m", cell_cfg.length_m)?;
        let mut cell = VaporCell::new(
            file.catalog,
            density,
            cell_cfg.temperature_c,
            cell_cfg.length_m,
            cell_cfg.passes,
        )?;
        if let Some(n) = cell_cfg.number_density {
            if !(n.is_finite() && n >= 0.0) {
                return Err(Error::invalid("cell.number_density", format!("must be >= 0, got {n}")));
            }
            cell = cell.with_number_density(n);
        }
        let mut config = self.clone();
        if let Some(p) = &catalog_path {
            config.catalog = Some(p.display().to_string());
        }
        Ok(Resolved {
            options: self.grid.sim_options()?,
            config,
            catalog_path,
            density_scale,
            cell,
        })
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::invalid(name, format!("must be positive, got {v}")))
    }
}
