use super::envelope::PulseEnvelope;
use super::fourier;
use super::transfer::TransferFunction;
use crate::error::{Error, Result};

/// `E_out = F^-1( F(E_in) H )` on the shared grid.
///
/// Fails with [`Error::Wraparound`] when the output reaches the window edge
/// above `wrap_tolerance` of its peak.
pub fn propagate(pulse: &PulseEnvelope, tf: &TransferFunction, wrap_tolerance: f64) -> Result<PulseEnvelope> {
    if pulse.grid() != tf.grid() || pulse.carrier() != tf.carrier() {
        return Err(Error::GridMismatch);
    }
    let mut spectrum = fourier::to_spectrum(pulse.samples());
    for (z, h) in spectrum.iter_mut().zip(tf.values()) {
        *z *= h;
    }
    let out = PulseEnvelope::unchecked(*pulse.grid(), pulse.carrier(), fourier::from_spectrum(&spectrum))?;
    let ratio = out.edge_ratio();
    if !(ratio <= wrap_tolerance) {
        return Err(Error::Wraparound {
            ratio,
            limit: wrap_tolerance,
        });
    }
    Ok(out)
}
