use num_complex::Complex64;

use super::catalog::LineCatalog;
use super::density::DensityModel;
use crate::error::{Error, Result};
use crate::units::{celsius_to_kelvin, kelvin_to_celsius, SPEED_OF_LIGHT};

/// Largest |chi| for which `n = 1 + chi/2` is accepted.
pub const CHI_LIMIT: f64 = 1e-2;

const BISECTION_RTOL: f64 = 1e-12;

/// Real-index dispersion at one frequency: `n' - 1` and its first two
/// frequency derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub index_excess: f64,
    pub first: f64,
    pub second: f64,
}

/// A heated vapor cell. Fields evolve as `exp(-i omega t)`, so a positive
/// imaginary index is loss.
#[derive(Debug, Clone, PartialEq)]
pub struct VaporCell {
    catalog: LineCatalog,
    density_model: DensityModel,
    temperature_k: f64,
    length: f64,
    passes: u32,
    number_density: f64,
}

impl VaporCell {
    pub fn new(
        catalog: LineCatalog,
        density_model: DensityModel,
        temperature_c: f64,
        length: f64,
        passes: u32,
    ) -> Result<Self> {
        Self::from_kelvin(catalog, density_model, celsius_to_kelvin(temperature_c), length, passes)
    }

    pub fn from_kelvin(
        catalog: LineCatalog,
        density_model: DensityModel,
        temperature_k: f64,
        length: f64,
        passes: u32,
    ) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid("length", format!("must be positive, got {length}")));
        }
        if passes == 0 {
            return Err(Error::invalid("passes", "must be at least 1"));
        }
        let number_density = density_model.number_density(temperature_k)?;
        Ok(Self {
            catalog,
            density_model,
            temperature_k,
            length,
            passes,
            number_density,
        })
    }

    /// Same cell at another temperature.
    pub fn at_temperature_c(&self, temperature_c: f64) -> Result<Self> {
        Self::new(
            self.catalog.clone(),
            self.density_model.clone(),
            temperature_c,
            self.length,
            self.passes,
        )
    }

    pub fn with_geometry(&self, length: f64, passes: u32) -> Result<Self> {
        Self::from_kelvin(
            self.catalog.clone(),
            self.density_model.clone(),
            self.temperature_k,
            length,
            passes,
        )
    }

    /// Replaces the modeled density, e.g. with 0 for an empty cell.
    pub fn with_number_density(mut self, number_density: f64) -> Self {
        assert!(number_density >= 0.0 && number_density.is_finite());
        self.number_density = number_density;
        self
    }

    pub fn catalog(&self) -> &LineCatalog {
        &self.catalog
    }

    pub fn density_model(&self) -> &DensityModel {
        &self.density_model
    }

    pub fn temperature_k(&self) -> f64 {
        self.temperature_k
    }

    pub fn temperature_c(&self) -> f64 {
        kelvin_to_celsius(self.temperature_k)
    }

    pub fn single_pass_length(&self) -> f64 {
        self.length
    }

    pub fn passes(&self) -> u32 {
        self.passes
    }

    /// Effective interaction length `passes * length`.
    pub fn interaction_length(&self) -> f64 {
        self.length * f64::from(self.passes)
    }

    pub fn number_density(&self) -> f64 {
        self.number_density
    }

    pub fn susceptibility(&self, omega: f64) -> Complex64 {
        debug_assert!(omega > 0.0);
        let sum: Complex64 = self
            .catalog
            .lines()
            .iter()
            .map(|line| line.strength / Complex64::new(omega - line.center, line.linewidth))
            .sum();
        -self.number_density * sum
    }

    /// `n = 1 + chi/2`, refused once |chi| reaches [`CHI_LIMIT`].
    pub fn refractive_index(&self, omega: f64) -> Result<Complex64> {
        let chi = self.susceptibility(omega);
        let magnitude = chi.norm();
        if magnitude >= CHI_LIMIT {
            return Err(Error::ModelValidity {
                magnitude,
                limit: CHI_LIMIT,
            });
        }
        Ok(1.0 + chi / 2.0)
    }

    /// Intensity optical depth `alpha L = 2 omega L n'' / c`.
    pub fn optical_depth(&self, omega: f64) -> f64 {
        omega * self.interaction_length() * self.susceptibility(omega).im / SPEED_OF_LIGHT
    }

    /// Beer's-law intensity transmission.
    pub fn transmission(&self, omega: f64) -> f64 {
        (-self.optical_depth(omega)).exp()
    }

    /// Closed-form `n' - 1`, `dn'/domega` and `d2n'/domega2`.
    pub fn dispersion(&self, omega: f64) -> Dispersion {
        let unit = dispersion_per_atom(&self.catalog, omega);
        Dispersion {
            index_excess: self.number_density * unit.index_excess,
            first: self.number_density * unit.first,
            second: self.number_density * unit.second,
        }
    }

    /// `n_g = n' + omega dn'/domega`.
    pub fn group_index(&self, omega: f64) -> f64 {
        let d = self.dispersion(omega);
        1.0 + d.index_excess + omega * d.first
    }

    /// Group delay relative to vacuum, `L (n_g - 1) / c`.
    pub fn group_delay(&self, omega: f64) -> f64 {
        let d = self.dispersion(omega);
        self.interaction_length() * (d.index_excess + omega * d.first) / SPEED_OF_LIGHT
    }

    /// Group velocity dispersion `d(1/v_g)/domega` in s²/m.
    pub fn gvd(&self, omega: f64) -> f64 {
        let d = self.dispersion(omega);
        (2.0 * d.first + omega * d.second) / SPEED_OF_LIGHT
    }

    /// Locates the zero of the GVD in `[lo, hi]` by bisection.
    ///
    /// The search runs on the per-atom dispersion, so the root depends only on
    /// the catalog and not on temperature or density.
    pub fn find_gvd_zero(&self, lo: f64, hi: f64) -> Result<f64> {
        find_gvd_zero(&self.catalog, lo, hi)
    }

    /// GVD zero inside the widest gap between adjacent line centers.
    pub fn gvd_zero(&self) -> Result<f64> {
        let (lo, hi) = plateau_bracket(&self.catalog)?;
        find_gvd_zero(&self.catalog, lo, hi)
    }
}

/// Dispersion for unit number density.
pub fn dispersion_per_atom(catalog: &LineCatalog, omega: f64) -> Dispersion {
    let mut out = Dispersion {
        index_excess: 0.0,
        first: 0.0,
        second: 0.0,
    };
    for line in catalog.lines() {
        let detuning = omega - line.center;
        let g2 = line.linewidth * line.linewidth;
        let d2 = detuning * detuning;
        let denom = d2 + g2;
        out.index_excess -= 0.5 * line.strength * detuning / denom;
        out.first -= 0.5 * line.strength * (g2 - d2) / (denom * denom);
        out.second -= line.strength * detuning * (d2 - 3.0 * g2) / (denom * denom * denom);
    }
    out
}

fn gvd_shape(catalog: &LineCatalog, omega: f64) -> f64 {
    let d = dispersion_per_atom(catalog, omega);
    2.0 * d.first + omega * d.second
}

pub fn find_gvd_zero(catalog: &LineCatalog, lo: f64, hi: f64) -> Result<f64> {
    let not_found = Error::RootNotFound {
        quantity: "GVD",
        lo,
        hi,
    };
    if !(lo > 0.0 && hi > lo) {
        return Err(not_found);
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = gvd_shape(catalog, a);
    let fb = gvd_shape(catalog, b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(not_found);
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a <= BISECTION_RTOL * mid {
            break;
        }
        let fm = gvd_shape(catalog, mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

fn widest_gap(catalog: &LineCatalog) -> Result<(f64, f64)> {
    let centers = catalog.sorted_centers();
    centers
        .windows(2)
        .map(|w| (w[0], w[1]))
        .max_by(|x, y| (x.1 - x.0).total_cmp(&(y.1 - y.0)))
        .ok_or_else(|| Error::Catalog("plateau search needs at least two lines".into()))
}

/// Frequency midpoint of the widest gap between adjacent line centers.
pub fn plateau_midpoint(catalog: &LineCatalog) -> Result<f64> {
    let (lo, hi) = widest_gap(catalog)?;
    Ok(0.5 * (lo + hi))
}

/// Interior of the widest gap between adjacent line centers, trimmed by 2%
/// of the gap at each end.
pub fn plateau_bracket(catalog: &LineCatalog) -> Result<(f64, f64)> {
    let (lo, hi) = widest_gap(catalog)?;
    let margin = 0.02 * (hi - lo);
    Ok((lo + margin, hi - margin))
}
