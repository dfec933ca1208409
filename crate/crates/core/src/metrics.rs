//! Pulse and transfer-function figures of merit.
//!
//! Times are measured on the intensity `|E|²`. Peak positions use a
//! three-point parabola through the largest sample; half-maximum crossings
//! use a parabola through the three samples around the crossing.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::{unwrap_phase, PulseEnvelope, TransferFunction};
use num_complex::Complex64;

/// Energy fraction inside the first nulls of a sinc² pulse, `(2/pi) Si(2 pi)`.
pub const SINC_MAIN_LOBE_FRACTION: f64 = 0.902_823_333_580_280_6;

/// A side lobe must rise this far (relative to the peak) above a minimum for
/// the minimum to count as a null.
const NULL_PROMINENCE: f64 = 1e-3;

/// Interpolated intensity peak: (time, intensity).
pub fn intensity_peak(pulse: &PulseEnvelope) -> (f64, f64) {
    let y = pulse.intensity();
    let k = argmax(&y);
    let grid = pulse.grid();
    if k == 0 || k + 1 == y.len() {
        return (grid.time(k), y[k]);
    }
    let (a, b, c) = (y[k - 1], y[k], y[k + 1]);
    let denom = a - 2.0 * b + c;
    if denom >= 0.0 {
        return (grid.time(k), b);
    }
    let offset = 0.5 * (a - c) / denom;
    let value = b - 0.25 * (a - c) * offset;
    (grid.time(k) + offset * grid.time_step(), value)
}

/// Full width at half maximum of the main intensity lobe.
pub fn intensity_fwhm(pulse: &PulseEnvelope) -> Result<f64> {
    let y = pulse.intensity();
    let k = argmax(&y);
    let (_, peak) = intensity_peak(pulse);
    let half = 0.5 * peak;
    let left = (0..k)
        .rev()
        .find(|&i| y[i] < half)
        .ok_or_else(|| Error::MetricUndefined("intensity never drops below half maximum before the peak".into()))?;
    let right = (k + 1..y.len())
        .find(|&i| y[i] < half)
        .ok_or_else(|| Error::MetricUndefined("intensity never drops below half maximum after the peak".into()))?;
    // crossings lie in [left, left+1] and [right-1, right]
    let t_left = crossing(&y, left, half);
    let t_right = crossing(&y, right - 1, half);
    Ok((t_right - t_left) * pulse.grid().time_step())
}

/// Fractional sample index where `y` crosses `level` inside `[i, i+1]`.
fn crossing(y: &[f64], i: usize, level: f64) -> f64 {
    let linear = i as f64 + (level - y[i]) / (y[i + 1] - y[i]);
    let base = if i + 2 < y.len() {
        i
    } else if i >= 1 {
        i - 1
    } else {
        return linear;
    };
    // Lagrange parabola through base, base+1, base+2, solved for level.
    let (p0, p1, p2) = (y[base], y[base + 1], y[base + 2]);
    let a = 0.5 * (p0 - 2.0 * p1 + p2);
    let b = 0.5 * (p2 - p0);
    let c = p1 - level;
    let roots = if a.abs() < 1e-14 * (p0.abs() + p1.abs() + p2.abs()) {
        vec![-c / b]
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return linear;
        }
        let s = disc.sqrt();
        vec![(-b + s) / (2.0 * a), (-b - s) / (2.0 * a)]
    };
    roots
        .into_iter()
        .map(|u| base as f64 + 1.0 + u)
        .find(|x| *x >= i as f64 - 1e-9 && *x <= i as f64 + 1.0 + 1e-9)
        .unwrap_or(linear)
}

fn argmax(y: &[f64]) -> usize {
    y.iter()
        .enumerate()
        .fold((0, f64::MIN), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
        .0
}

fn check_pair(input: &PulseEnvelope, output: &PulseEnvelope) -> Result<()> {
    if input.grid() != output.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Output peak time minus input peak time.
pub fn peak_delay(input: &PulseEnvelope, output: &PulseEnvelope) -> Result<f64> {
    check_pair(input, output)?;
    Ok(intensity_peak(output).0 - intensity_peak(input).0)
}

/// `t_D / T0` with `T0` the input's measured FWHM.
pub fn fractional_delay(input: &PulseEnvelope, output: &PulseEnvelope) -> Result<f64> {
    Ok(peak_delay(input, output)? / intensity_fwhm(input)?)
}

/// `(T - T0) / T0`.
pub fn fractional_broadening(input: &PulseEnvelope, output: &PulseEnvelope) -> Result<f64> {
    check_pair(input, output)?;
    let t0 = intensity_fwhm(input)?;
    Ok((intensity_fwhm(output)? - t0) / t0)
}

/// Amplitude and phase distortion of a transfer function over a band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distortion {
    /// RMS deviation of |H| from its band average, over that average.
    pub amplitude: f64,
    /// RMS deviation of the unwrapped phase from its least-squares line, over 2π.
    pub phase: f64,
}

impl Distortion {
    pub fn within(&self, budget: f64) -> bool {
        self.amplitude < budget && self.phase < budget
    }
}

/// Distortion of `tf` over the absolute angular-frequency band `[lo, hi]`.
pub fn distortion(tf: &TransferFunction, band: (f64, f64)) -> Result<Distortion> {
    let omegas = tf.absolute_omegas();
    let (lo, hi) = band;
    if !(lo < hi) || lo < omegas[0] || hi > omegas[omegas.len() - 1] {
        return Err(Error::invalid("band", "must be a non-empty interval inside the grid"));
    }
    let (w, h): (Vec<f64>, Vec<Complex64>) = omegas
        .iter()
        .zip(tf.values())
        .filter(|(w, _)| **w >= lo && **w <= hi)
        .map(|(w, h)| (*w, *h))
        .unzip();
    distortion_of_samples(&w, &h)
}

/// Distortion of ascending frequency samples `omegas` with values `h`.
pub fn distortion_of_samples(omegas: &[f64], h: &[Complex64]) -> Result<Distortion> {
    if omegas.len() != h.len() || omegas.len() < 3 {
        return Err(Error::invalid("band", "needs at least three frequency samples"));
    }
    let n = h.len() as f64;
    let mags: Vec<f64> = h.iter().map(|v| v.norm()).collect();
    let mean = mags.iter().sum::<f64>() / n;
    if !(mean > 0.0) {
        return Err(Error::MetricUndefined(
            "transfer function vanishes over the band".into(),
        ));
    }
    let amp_var = mags.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / n;

    let phase = unwrap_phase(h);
    let w_mean = omegas.iter().sum::<f64>() / n;
    let p_mean = phase.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (w, p) in omegas.iter().zip(&phase) {
        let x = w - w_mean;
        sxx += x * x;
        sxy += x * (p - p_mean);
    }
    let slope = sxy / sxx;
    let phase_var = omegas
        .iter()
        .zip(&phase)
        .map(|(w, p)| (p - p_mean - slope * (w - w_mean)).powi(2))
        .sum::<f64>()
        / n;
    Ok(Distortion {
        amplitude: amp_var.sqrt() / mean,
        phase: phase_var.sqrt() / TAU,
    })
}

/// Absolute frequency interval where the pulse's power spectrum is at least
/// half its maximum.
pub fn spectral_band(pulse: &PulseEnvelope) -> (f64, f64) {
    let power: Vec<f64> = pulse.spectrum().iter().map(|z| z.norm_sqr()).collect();
    let peak = power.iter().cloned().fold(0.0, f64::max);
    let first = power.iter().position(|&p| p >= 0.5 * peak).unwrap_or(0);
    let last = power.iter().rposition(|&p| p >= 0.5 * peak).unwrap_or(power.len() - 1);
    let grid = pulse.grid();
    (pulse.carrier() + grid.omega(first), pulse.carrier() + grid.omega(last))
}

/// How the channel window was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelWindow {
    /// Between the first intensity nulls around the main peak.
    Nulls,
    /// Symmetric window holding the sinc main-lobe energy fraction.
    EnergyFraction,
}

/// Fraction of output energy outside the best-placed channel window.
///
/// The window width comes from the input: the span between the first nulls
/// around its peak, or, when `allow_fallback` is set and the input has no
/// nulls, the symmetric span holding [`SINC_MAIN_LOBE_FRACTION`] of its
/// energy. The window is slid over the output in whole-sample steps to
/// capture the most energy.
pub fn power_leakage(
    input: &PulseEnvelope,
    output: &PulseEnvelope,
    allow_fallback: bool,
) -> Result<(f64, ChannelWindow)> {
    check_pair(input, output)?;
    let dt = input.grid().time_step();
    let y_in = input.intensity();
    let (start, width, kind) = match null_window(&y_in) {
        Some((l, r)) => (l, r - l, ChannelWindow::Nulls),
        None if allow_fallback => {
            let (l, r) = energy_window(&y_in, intensity_peak(input).0 / dt + (y_in.len() / 2) as f64);
            (l, r - l, ChannelWindow::EnergyFraction)
        }
        None => {
            return Err(Error::MetricUndefined(
                "input has no intensity nulls around its peak and the energy-fraction fallback is disabled".into(),
            ))
        }
    };
    let y_out = output.intensity();
    let cells = CellIntegral::new(&y_out);
    let total = cells.total();
    if !(total > 0.0) {
        return Err(Error::MetricUndefined("output carries no energy".into()));
    }
    let n = y_out.len() as f64;
    let frac = start - start.floor();
    let mut best = 0.0f64;
    let mut a = frac - 0.5;
    while a + width <= n - 0.5 {
        best = best.max(cells.between(a, a + width));
        a += 1.0;
    }
    Ok(((1.0 - best / total).clamp(0.0, 1.0), kind))
}

/// Fractional-index bounds of the nulls enclosing the main peak.
fn null_window(y: &[f64]) -> Option<(f64, f64)> {
    let k = argmax(y);
    let peak = y[k];
    let prominence = NULL_PROMINENCE * peak;
    let left = {
        let mut i = k;
        loop {
            if i == 0 {
                break None;
            }
            if y[i - 1] > y[i] {
                // local minimum at i; require a real side lobe beyond it
                let lobe = y[..i]
                    .iter()
                    .rev()
                    .take_while(|&&v| v >= y[i])
                    .cloned()
                    .fold(y[i], f64::max);
                if lobe - y[i] > prominence && y[i] < 0.5 * peak {
                    break Some(refine_min(y, i));
                }
            }
            i -= 1;
        }
    }?;
    let right = {
        let mut i = k;
        loop {
            if i + 1 >= y.len() {
                break None;
            }
            if y[i + 1] > y[i] {
                let lobe = y[i + 1..]
                    .iter()
                    .take_while(|&&v| v >= y[i])
                    .cloned()
                    .fold(y[i], f64::max);
                if lobe - y[i] > prominence && y[i] < 0.5 * peak {
                    break Some(refine_min(y, i));
                }
            }
            i += 1;
        }
    }?;
    Some((left, right))
}

fn refine_min(y: &[f64], i: usize) -> f64 {
    if i == 0 || i + 1 >= y.len() {
        return i as f64;
    }
    let (a, b, c) = (y[i - 1], y[i], y[i + 1]);
    let denom = a - 2.0 * b + c;
    if denom <= 0.0 {
        return i as f64;
    }
    i as f64 + (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
}

/// Symmetric window about fractional index `center` holding the sinc
/// main-lobe energy fraction.
fn energy_window(y: &[f64], center: f64) -> (f64, f64) {
    let cells = CellIntegral::new(y);
    let target = SINC_MAIN_LOBE_FRACTION * cells.total();
    let (mut lo, mut hi) = (0.0, y.len() as f64);
    for _ in 0..100 {
        let h = 0.5 * (lo + hi);
        if cells.between(center - h, center + h) < target {
            lo = h;
        } else {
            hi = h;
        }
    }
    (center - hi, center + hi)
}

/// Integral of a piecewise-constant intensity where sample `k` fills the
/// cell `[k - 1/2, k + 1/2]` (in index units, result in sample units).
struct CellIntegral {
    prefix: Vec<f64>,
}

impl CellIntegral {
    fn new(y: &[f64]) -> Self {
        let mut prefix = Vec::with_capacity(y.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for v in y {
            acc += v;
            prefix.push(acc);
        }
        Self { prefix }
    }

    fn total(&self) -> f64 {
        self.prefix[self.prefix.len() - 1]
    }

    /// Cumulative integral from -1/2 to `x` (index units).
    fn upto(&self, x: f64) -> f64 {
        let n = self.prefix.len() - 1;
        let u = (x + 0.5).clamp(0.0, n as f64);
        let whole = u.floor() as usize;
        if whole >= n {
            return self.total();
        }
        let part = u - whole as f64;
        self.prefix[whole] + part * (self.prefix[whole + 1] - self.prefix[whole])
    }

    fn between(&self, a: f64, b: f64) -> f64 {
        self.upto(b) - self.upto(a)
    }
}

/// Everything measured on one propagation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationReport {
    /// Peak delay, s.
    pub delay: f64,
    pub fractional_delay: f64,
    pub fractional_broadening: f64,
    /// Input intensity FWHM, s.
    pub input_fwhm: f64,
    /// Output intensity FWHM, s.
    pub output_fwhm: f64,
    pub amplitude_distortion: f64,
    pub phase_distortion: f64,
    pub leakage: f64,
    pub channel_window: ChannelWindow,
    /// Fraction of input energy absorbed.
    pub absorbed: f64,
    #[serde(skip)]
    pub output: Option<PulseEnvelope>,
}

impl PropagationReport {
    /// Scores `output` against `input`; distortion is evaluated over the
    /// input's half-power spectral band.
    pub fn analyze(input: &PulseEnvelope, output: PulseEnvelope, tf: &TransferFunction) -> Result<Self> {
        let input_fwhm = intensity_fwhm(input)?;
        let output_fwhm = intensity_fwhm(&output)?;
        let delay = peak_delay(input, &output)?;
        let d = distortion(tf, spectral_band(input))?;
        let (leakage, channel_window) = power_leakage(input, &output, true)?;
        let absorbed = (1.0 - output.energy() / input.energy()).clamp(0.0, 1.0);
        Ok(Self {
            delay,
            fractional_delay: delay / input_fwhm,
            fractional_broadening: (output_fwhm - input_fwhm) / input_fwhm,
            input_fwhm,
            output_fwhm,
            amplitude_distortion: d.amplitude,
            phase_distortion: d.phase,
            leakage,
            channel_window,
            absorbed,
            output: Some(output),
        })
    }

    /// Flat key/value record (the output envelope is omitted).
    pub fn to_record(&self) -> serde_json::Map<String, serde_json::Value> {
        match serde_json::to_value(self).expect("report serializes") {
            serde_json::Value::Object(map) => map,
            _ => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::SampledGrid;

    const CARRIER: f64 = 2.39e15;

    fn gaussian(t0: f64) -> PulseEnvelope {
        PulseEnvelope::gaussian(t0, CARRIER, SampledGrid::new(4096, 2e-15).unwrap()).unwrap()
    }

    fn delayed(p: &PulseEnvelope, tau: f64) -> (PulseEnvelope, TransferFunction) {
        let tf = TransferFunction::from_fn(*p.grid(), CARRIER, true, |w| {
            Complex64::from_polar(1.0, (w - CARRIER) * tau)
        });
        (crate::pulse::propagate(p, &tf, 1.0).unwrap(), tf)
    }

    #[test]
    fn identity_gives_zero_delay_and_broadening() {
        let p = gaussian(100e-15);
        assert_eq!(peak_delay(&p, &p).unwrap(), 0.0);
        assert_eq!(fractional_broadening(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn linear_phase_shifts_without_broadening() {
        let p = gaussian(100e-15);
        let (out, tf) = delayed(&p, 300e-15);
        assert!((fractional_delay(&p, &out).unwrap() - 3.0).abs() < 1e-3);
        assert!(fractional_broadening(&p, &out).unwrap().abs() < 1e-3);
        let band = spectral_band(&p);
        let d = distortion(&tf, band).unwrap();
        assert!(d.amplitude < 1e-12 && d.phase < 1e-12);
    }

    #[test]
    fn gaussian_fwhm_is_interpolated() {
        // T0 not a multiple of dt
        let p = gaussian(123.4e-15);
        assert!((intensity_fwhm(&p).unwrap() / 123.4e-15 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn quadratic_phase_residual_matches_closed_form() {
        let n = 1001usize;
        let (half, beta) = (1e13, 2e-26);
        let omegas: Vec<f64> = (0..n)
            .map(|k| CARRIER - half + 2.0 * half * k as f64 / (n - 1) as f64)
            .collect();
        let h: Vec<Complex64> = omegas
            .iter()
            .map(|w| Complex64::from_polar(1.0, beta * (w - CARRIER).powi(2)))
            .collect();
        let d = distortion_of_samples(&omegas, &h).unwrap();
        // symmetric grid x_k = 2k/(n-1) - 1: sums of x^2 and x^4 in closed form
        let nf = n as f64;
        let m2 = (nf + 1.0) / (3.0 * (nf - 1.0));
        let m4 = (nf + 1.0) * (3.0 * nf * nf - 7.0) / (15.0 * (nf - 1.0).powi(3));
        let expected = beta * half * half * (m4 - m2 * m2).sqrt() / TAU;
        assert!((d.phase / expected - 1.0).abs() < 1e-9, "{} vs {}", d.phase, expected);
        assert!(d.amplitude < 1e-15);
    }

    #[test]
    fn distortion_needs_band_inside_grid() {
        let p = gaussian(100e-15);
        let (_, tf) = delayed(&p, 0.0);
        assert!(distortion(&tf, (0.0, CARRIER)).is_err());
        assert!(distortion(&tf, (CARRIER, CARRIER)).is_err());
    }

    #[test]
    fn sinc_leakage_uses_nulls() {
        let grid = SampledGrid::new(1 << 16, 35e-15).unwrap();
        let p = PulseEnvelope::sinc(250e-15, CARRIER, grid, 1e-3).unwrap();
        let (leak, kind) = power_leakage(&p, &p, false).unwrap();
        assert_eq!(kind, ChannelWindow::Nulls);
        assert!((leak - (1.0 - SINC_MAIN_LOBE_FRACTION)).abs() < 1e-3, "{leak}");
    }

    #[test]
    fn gaussian_leakage_needs_fallback() {
        let p = gaussian(100e-15);
        assert!(matches!(power_leakage(&p, &p, false), Err(Error::MetricUndefined(_))));
        let (leak, kind) = power_leakage(&p, &p, true).unwrap();
        assert_eq!(kind, ChannelWindow::EnergyFraction);
        assert!((leak - (1.0 - SINC_MAIN_LOBE_FRACTION)).abs() < 1e-3, "{leak}");
    }

    #[test]
    fn cell_integral_interpolates() {
        let c = CellIntegral::new(&[1.0, 2.0, 3.0]);
        assert_eq!(c.total(), 6.0);
        assert_eq!(c.between(-0.5, 0.5), 1.0);
        assert_eq!(c.between(0.0, 1.0), 1.5);
        assert_eq!(c.between(-10.0, 10.0), 6.0);
    }

    #[test]
    fn report_record_is_flat() {
        let p = gaussian(100e-15);
        let (out, tf) = delayed(&p, 200e-15);
        let r = PropagationReport::analyze(&p, out, &tf).unwrap();
        let rec = r.to_record();
        assert!(!rec.contains_key("output"));
        assert!(rec.values().all(|v| v.is_number() || v.is_string()));
        assert!((r.fractional_delay - r.delay / r.input_fwhm).abs() < 1e-12);
        assert!((r.fractional_broadening - (r.output_fwhm - r.input_fwhm) / r.input_fwhm).abs() < 1e-12);
    }
}
