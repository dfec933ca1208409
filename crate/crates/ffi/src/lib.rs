//! C ABI for the slowlight vapor model and pulse simulator.
//!
//! Every function returns an [`SlStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and can be fetched with
//! [`sl_last_error`]. Cells are opaque handles owned by the caller and
//! released with [`sl_cell_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use slowlight::pulse::PulseShape;
use slowlight::scenario::{simulate, Center, PulseRecipe, SimOptions};
use slowlight::sweeps::{evaluate_regime, Regime, RegimeQuery};
use slowlight::units::{omega_to_wavelength_nm, wavelength_nm_to_omega};
use slowlight::vapor::{Calibration, CatalogFile, VaporCell};
use slowlight::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Argument out of range, bad config value, or model range exceeded.
    InvalidArgument = 2,
    /// A file could not be read.
    Io = 3,
    /// A catalog file could not be parsed.
    Parse = 4,
    /// A numerical guard fired (validity limit, grid too small, no root).
    Numerical = 5,
    /// Internal error; the library caught a panic.
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlPulseShape {
    Gaussian = 0,
    /// Rectangular spectrum.
    Sinc = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlRegime {
    DispersionDominated = 0,
    AbsorptionDominated = 1,
}

/// Outcome of one propagation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SlReport {
    /// Peak delay, s.
    pub delay_s: f64,
    pub fractional_delay: f64,
    pub fractional_broadening: f64,
    /// Intensity FWHM, s.
    pub input_fwhm_s: f64,
    pub output_fwhm_s: f64,
    pub amplitude_distortion: f64,
    pub phase_distortion: f64,
    pub leakage: f64,
    /// Fraction of input energy absorbed.
    pub absorbed: f64,
}

/// Opaque vapor cell handle.
pub struct SlCell {
    inner: VaporCell,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> SlStatus {
    match e {
        Error::Read { .. } | Error::Io(_) => SlStatus::Io,
        Error::Parse { .. } | Error::Catalog(_) => SlStatus::Parse,
        e if e.is_numerical_guard() => SlStatus::Numerical,
        _ => SlStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), SlStatus>) -> SlStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal error (panic)");
            SlStatus::Internal
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, SlStatus>;
}

impl<T> OrStatus<T> for slowlight::Result<T> {
    fn or_status(self) -> Result<T, SlStatus> {
        self.map_err(|e| {
            let mut msg = e.to_string();
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                msg.push_str(&format!(": {s}"));
                src = s.source();
            }
            set_error(msg);
            status_of(&e)
        })
    }
}

fn null(what: &str) -> SlStatus {
    set_error(format!("null pointer: {what}"));
    SlStatus::NullPointer
}

fn invalid(msg: impl Into<String>) -> SlStatus {
    set_error(msg);
    SlStatus::InvalidArgument
}

unsafe fn cell_ref<'a>(cell: *const SlCell) -> Result<&'a VaporCell, SlStatus> {
    cell.as_ref().map(|c| &c.inner).ok_or_else(|| null("cell"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), SlStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

fn omega(nm: f64) -> Result<f64, SlStatus> {
    if nm.is_finite() && nm > 0.0 {
        Ok(wavelength_nm_to_omega(nm))
    } else {
        Err(invalid(format!("wavelength must be positive, got {nm} nm")))
    }
}

fn build_cell(
    file: CatalogFile,
    temperature_c: f64,
    length_m: f64,
    passes: u32,
    calibrate: bool,
) -> Result<*mut SlCell, SlStatus> {
    let density = if calibrate {
        Calibration::rubidium_plateau()
            .apply(&file.catalog, &file.density)
            .or_status()?
    } else {
        file.density
    };
    let inner = VaporCell::new(file.catalog, density, temperature_c, length_m, passes).or_status()?;
    Ok(Box::into_raw(Box::new(SlCell { inner })))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Cell with the bundled two-line rubidium catalog. With `calibrate` the
/// density is rescaled to the 10 ps reference delay.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_new_rubidium(
    temperature_c: f64,
    length_m: f64,
    passes: u32,
    calibrate: bool,
    out: *mut *mut SlCell,
) -> SlStatus {
    guard(|| {
        let cell = build_cell(CatalogFile::rubidium(), temperature_c, length_m, passes, calibrate)?;
        write(out, cell)
    })
}

/// Cell from a catalog file (TOML lines plus density model).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_load(
    path: *const c_char,
    temperature_c: f64,
    length_m: f64,
    passes: u32,
    calibrate: bool,
    out: *mut *mut SlCell,
) -> SlStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| invalid("path is not UTF-8"))?;
        let file = CatalogFile::load(path).or_status()?;
        let cell = build_cell(file, temperature_c, length_m, passes, calibrate)?;
        write(out, cell)
    })
}

/// Releases a cell. Null is ignored.
///
/// # Safety
/// `cell` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_free(cell: *mut SlCell) {
    if !cell.is_null() {
        drop(Box::from_raw(cell));
    }
}

/// Moves the cell to a new temperature, keeping catalog and geometry.
///
/// # Safety
/// `cell` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_set_temperature(cell: *mut SlCell, temperature_c: f64) -> SlStatus {
    guard(|| {
        let c = cell.as_mut().ok_or_else(|| null("cell"))?;
        c.inner = c.inner.at_temperature_c(temperature_c).or_status()?;
        Ok(())
    })
}

/// Atoms per m^3.
///
/// # Safety
/// `cell` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_number_density(cell: *const SlCell, out: *mut f64) -> SlStatus {
    guard(|| write(out, cell_ref(cell)?.number_density()))
}

/// Susceptibility at `wavelength_nm`; Im > 0 is absorption.
///
/// # Safety
/// `cell` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_susceptibility(
    cell: *const SlCell,
    wavelength_nm: f64,
    re: *mut f64,
    im: *mut f64,
) -> SlStatus {
    guard(|| {
        let chi = cell_ref(cell)?.susceptibility(omega(wavelength_nm)?);
        if im.is_null() {
            return Err(null("im"));
        }
        write(re, chi.re)?;
        write(im, chi.im)
    })
}

/// Group index at `wavelength_nm`.
///
/// # Safety
/// `cell` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_group_index(cell: *const SlCell, wavelength_nm: f64, out: *mut f64) -> SlStatus {
    guard(|| write(out, cell_ref(cell)?.group_index(omega(wavelength_nm)?)))
}

/// Group delay relative to vacuum over the full interaction length, s.
///
/// # Safety
/// `cell` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_group_delay(cell: *const SlCell, wavelength_nm: f64, out: *mut f64) -> SlStatus {
    guard(|| write(out, cell_ref(cell)?.group_delay(omega(wavelength_nm)?)))
}

/// Group velocity dispersion, s^2/m.
///
/// # Safety
/// `cell` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_gvd(cell: *const SlCell, wavelength_nm: f64, out: *mut f64) -> SlStatus {
    guard(|| write(out, cell_ref(cell)?.gvd(omega(wavelength_nm)?)))
}

/// Intensity transmission over the full interaction length.
///
/// # Safety
/// `cell` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_transmission(cell: *const SlCell, wavelength_nm: f64, out: *mut f64) -> SlStatus {
    guard(|| write(out, cell_ref(cell)?.transmission(omega(wavelength_nm)?)))
}

/// Wavelength of zero GVD between the lines of the widest gap, nm.
///
/// # Safety
/// `cell` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_cell_gvd_zero_nm(cell: *const SlCell, out: *mut f64) -> SlStatus {
    guard(|| {
        let w = cell_ref(cell)?.gvd_zero().or_status()?;
        write(out, omega_to_wavelength_nm(w))
    })
}

/// Propagates one pulse of intensity FWHM `t0_s` through the cell. A
/// `center_nm` of zero or NaN centers the pulse at the GVD zero. The grid
/// is sized automatically.
///
/// # Safety
/// `cell` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_propagate(
    cell: *const SlCell,
    shape: SlPulseShape,
    t0_s: f64,
    center_nm: f64,
    out: *mut SlReport,
) -> SlStatus {
    guard(|| {
        let cell = cell_ref(cell)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !(t0_s.is_finite() && t0_s > 0.0) {
            return Err(invalid(format!("t0 must be positive, got {t0_s} s")));
        }
        let center = if center_nm.is_nan() || center_nm == 0.0 {
            Center::GvdZero
        } else {
            omega(center_nm)?;
            Center::Wavelength(center_nm)
        };
        let shape = match shape {
            SlPulseShape::Gaussian => PulseShape::Gaussian,
            SlPulseShape::Sinc => PulseShape::Sinc,
        };
        let r = simulate(cell, &PulseRecipe::new(shape, t0_s, center), &SimOptions::default())
            .or_status()?
            .report;
        write(
            out,
            SlReport {
                delay_s: r.delay,
                fractional_delay: r.fractional_delay,
                fractional_broadening: r.fractional_broadening,
                input_fwhm_s: r.input_fwhm,
                output_fwhm_s: r.output_fwhm,
                amplitude_distortion: r.amplitude_distortion,
                phase_distortion: r.phase_distortion,
                leakage: r.leakage,
                absorbed: r.absorbed,
            },
        )
    })
}

/// Absorption-to-dispersion length ratio L_A/L_D for a symmetric pair of
/// lines. `regime` may be null.
///
/// # Safety
/// `ratio` must be valid for writes; `regime` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_regime_ratio(
    t0_s: f64,
    linewidth: f64,
    half_separation: f64,
    ratio: *mut f64,
    regime: *mut SlRegime,
) -> SlStatus {
    guard(|| {
        let result = RegimeQuery::new(t0_s, linewidth, half_separation)
            .and_then(|q| evaluate_regime(&q))
            .or_status()?;
        write(ratio, result.ratio)?;
        if !regime.is_null() {
            regime.write(match result.regime {
                Regime::DispersionDominated => SlRegime::DispersionDominated,
                Regime::AbsorptionDominated => SlRegime::AbsorptionDominated,
            });
        }
        Ok(())
    })
}
