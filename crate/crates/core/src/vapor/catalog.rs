//! Lorentzian line catalogs and their on-disk format.
//!
//! A catalog file is TOML with a `label`, one `[[line]]` table per resonance
//! and a `[density]` block holding the vapor-pressure coefficients. Each line
//! gives its center either as `wavelength_nm` (vacuum) or as
//! `angular_frequency` (rad/s), never both.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::density::DensityModel;
use crate::error::{Error, Result};
use crate::units::wavelength_nm_to_omega;

const RUBIDIUM_EFFECTIVE: &str = include_str!("../../data/rb_effective.toml");

/// One Lorentzian resonance contributing `-N s / (omega - center + i linewidth)`
/// to the susceptibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    /// Effective transition strength, m³·rad/s.
    pub strength: f64,
    /// Angular frequency of the resonance, rad/s.
    pub center: f64,
    /// Half-width, rad/s.
    pub linewidth: f64,
}

impl SpectralLine {
    pub fn new(strength: f64, center: f64, linewidth: f64) -> Result<Self> {
        for (name, value) in [("strength", strength), ("center", center), ("linewidth", linewidth)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be positive and finite, got {value}"),
                ));
            }
        }
        Ok(Self {
            strength,
            center,
            linewidth,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineCatalog {
    label: String,
    lines: Vec<SpectralLine>,
}

impl LineCatalog {
    pub fn new(label: impl Into<String>, lines: Vec<SpectralLine>) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::Catalog("a catalog needs at least one line".into()));
        }
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                if a.center == b.center {
                    return Err(Error::Catalog(format!("duplicate line center {:.9e} rad/s", a.center)));
                }
            }
        }
        Ok(Self {
            label: label.into(),
            lines,
        })
    }

    /// Two lines of equal strength and width placed symmetrically about `midpoint`.
    pub fn symmetric_pair(strength: f64, midpoint: f64, half_separation: f64, linewidth: f64) -> Result<Self> {
        Self::new(
            "symmetric doublet",
            vec![
                SpectralLine::new(strength, midpoint - half_separation, linewidth)?,
                SpectralLine::new(strength, midpoint + half_separation, linewidth)?,
            ],
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    /// Line centers sorted by frequency.
    pub fn sorted_centers(&self) -> Vec<f64> {
        let mut centers: Vec<f64> = self.lines.iter().map(|l| l.center).collect();
        centers.sort_by(f64::total_cmp);
        centers
    }

    /// Returns a copy with every linewidth replaced.
    pub fn with_linewidth(&self, linewidth: f64) -> Result<Self> {
        let lines = self
            .lines
            .iter()
            .map(|l| SpectralLine::new(l.strength, l.center, linewidth))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.label.clone(), lines)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineEntry {
    wavelength_nm: Option<f64>,
    angular_frequency: Option<f64>,
    strength: f64,
    linewidth: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    label: String,
    #[serde(default)]
    line: Vec<LineEntry>,
    density: DensityModel,
}

/// A parsed catalog file: line list plus its density model.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogFile {
    pub catalog: LineCatalog,
    pub density: DensityModel,
}

impl CatalogFile {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        let lines = raw
            .line
            .iter()
            .enumerate()
            .map(|(i, entry)| {
                let center = match (entry.wavelength_nm, entry.angular_frequency) {
                    (Some(nm), None) => {
                        if !(nm.is_finite() && nm > 0.0) {
                            return Err(Error::Catalog(format!("line {i}: wavelength_nm must be positive")));
                        }
                        wavelength_nm_to_omega(nm)
                    }
                    (None, Some(w)) => w,
                    (Some(_), Some(_)) => {
                        return Err(Error::Catalog(format!(
                            "line {i}: give exactly one of wavelength_nm or angular_frequency, not both"
                        )))
                    }
                    (None, None) => {
                        return Err(Error::Catalog(format!(
                            "line {i}: missing center (wavelength_nm or angular_frequency)"
                        )))
                    }
                };
                SpectralLine::new(entry.strength, center, entry.linewidth)
                    .map_err(|e| Error::Catalog(format!("line {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        raw.density.validate()?;
        Ok(Self {
            catalog: LineCatalog::new(raw.label, lines)?,
            density: raw.density,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// The bundled two-line rubidium catalog.
    pub fn rubidium() -> Self {
        Self::parse(RUBIDIUM_EFFECTIVE).expect("bundled catalog parses")
    }
}
