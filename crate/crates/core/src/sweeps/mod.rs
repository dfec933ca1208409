//! Parameter studies built on the cell model and the propagation pipeline.
//! Every sweep evaluates its points in parallel and returns them in
//! parameter order.

mod design;
mod range;
mod regime;
mod spectrum;
mod temperature;

pub use design::{
    band_distortion, bandwidth_at, design_curve, max_fractional_delay, DesignLimit, DesignPoint, DesignSearch,
    BAND_SAMPLES,
};
pub use range::{SweepParameter, SweepRange};
pub use regime::{
    classify, evaluate as evaluate_regime, regime_ratio, regime_ratio_asymptotic, symmetric_idealization, Regime,
    RegimeQuery, RegimeResult,
};
pub use spectrum::{delay_spectrum, uniform_band, DelayRow, DelaySpectrum, UniformBand, UNIFORM_BAND_VARIATION};
pub use temperature::{
    fb_leakage_curves, recipe_sweep, sweep_grid, temperature_sweep, FbLeakageCurve, FbLeakageRow, TemperaturePoint,
};
