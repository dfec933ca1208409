//! Physical constants and unit conversions. Everything internal is SI with
//! angular frequencies in rad/s.

use std::f64::consts::PI;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const PASCAL_PER_TORR: f64 = 101_325.0 / 760.0;
pub const ZERO_CELSIUS: f64 = 273.15;

pub fn celsius_to_kelvin(c: f64) -> f64 {
    c + ZERO_CELSIUS
}

pub fn kelvin_to_celsius(k: f64) -> f64 {
    k - ZERO_CELSIUS
}

/// Vacuum wavelength in nm to angular frequency.
pub fn wavelength_nm_to_omega(nm: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / (nm * 1e-9)
}

pub fn omega_to_wavelength_nm(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / omega * 1e9
}

/// Converts a bandwidth in Hz around `center_nm` to a wavelength span in nm.
pub fn bandwidth_hz_to_nm(bandwidth_hz: f64, center_nm: f64) -> f64 {
    let lambda = center_nm * 1e-9;
    lambda * lambda * bandwidth_hz / SPEED_OF_LIGHT * 1e9
}

pub fn bandwidth_nm_to_hz(bandwidth_nm: f64, center_nm: f64) -> f64 {
    let lambda = center_nm * 1e-9;
    bandwidth_nm * 1e-9 * SPEED_OF_LIGHT / (lambda * lambda)
}
