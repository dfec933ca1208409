//! Ratio of the absorptive to the dispersive broadening length for a pulse
//! centered between two identical Lorentzian lines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vapor::LineCatalog;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeQuery {
    /// Pulse duration, s.
    pub t0: f64,
    /// Line half-width, rad/s.
    pub linewidth: f64,
    /// Half the line separation, rad/s.
    pub half_separation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Absorption needs the longer path (L_A/L_D > 1).
    DispersionDominated,
    AbsorptionDominated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeResult {
    pub query: RegimeQuery,
    /// ω21/γ
    pub separation_ratio: f64,
    pub ratio: f64,
    pub asymptotic: f64,
    pub regime: Regime,
}

impl RegimeQuery {
    pub fn new(t0: f64, linewidth: f64, half_separation: f64) -> Result<Self> {
        let q = Self {
            t0,
            linewidth,
            half_separation,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("t0", self.t0),
            ("linewidth", self.linewidth),
            ("half_separation", self.half_separation),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Exact L_A/L_D. Singular where (ω21/γ)² = 1/3.
pub fn regime_ratio(q: &RegimeQuery) -> Result<f64> {
    q.validate()?;
    let r2 = (q.half_separation / q.linewidth).powi(2);
    let den = 2.0 * q.linewidth * q.t0 * (r2 + 1.0) * (6.0 * r2 - 2.0);
    let num = (-6.0 + 36.0 * r2 - 6.0 * r2 * r2).abs();
    if (6.0 * r2 - 2.0).abs() <= 1e-12 * (6.0 * r2 + 2.0) {
        return Err(Error::RegimeSingular { ratio: r2.sqrt() });
    }
    Ok(num / den.abs())
}

/// Large-separation limit 1/(2γT0).
pub fn regime_ratio_asymptotic(q: &RegimeQuery) -> Result<f64> {
    q.validate()?;
    Ok(1.0 / (2.0 * q.linewidth * q.t0))
}

pub fn classify(ratio: f64) -> Regime {
    if ratio > 1.0 {
        Regime::DispersionDominated
    } else {
        Regime::AbsorptionDominated
    }
}

pub fn evaluate(q: &RegimeQuery) -> Result<RegimeResult> {
    let ratio = regime_ratio(q)?;
    Ok(RegimeResult {
        query: *q,
        separation_ratio: q.half_separation / q.linewidth,
        ratio,
        asymptotic: regime_ratio_asymptotic(q)?,
        regime: classify(ratio),
    })
}

/// Symmetric stand-in for a real catalog: the two lines bounding its widest
/// gap, with their mean linewidth.
pub fn symmetric_idealization(catalog: &LineCatalog, t0: f64) -> Result<RegimeQuery> {
    let mut lines: Vec<_> = catalog.lines().to_vec();
    if lines.len() < 2 {
        return Err(Error::Catalog("need at least two lines".into()));
    }
    lines.sort_by(|a, b| a.center.total_cmp(&b.center));
    let (a, b) = lines
        .windows(2)
        .map(|w| (w[0], w[1]))
        .max_by(|x, y| (x.1.center - x.0.center).total_cmp(&(y.1.center - y.0.center)))
        .expect("two lines");
    RegimeQuery::new(t0, 0.5 * (a.linewidth + b.linewidth), 0.5 * (b.center - a.center))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vapor::CatalogFile;
    use proptest::prelude::*;

    #[test]
    fn unit_separation_matches_hand_value() {
        let q = RegimeQuery::new(2e-13, 3e7, 3e7).unwrap();
        let expected = 1.5 / (q.linewidth * q.t0);
        assert!((regime_ratio(&q).unwrap() / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_separation_is_rejected() {
        let g = 1e8;
        let q = RegimeQuery::new(1e-12, g, g / 3f64.sqrt()).unwrap();
        assert!(matches!(regime_ratio(&q), Err(Error::RegimeSingular { .. })));
    }

    #[test]
    fn rubidium_is_dispersion_dominated() {
        let q = symmetric_idealization(&CatalogFile::rubidium().catalog, 250e-15).unwrap();
        let r = evaluate(&q).unwrap();
        assert_eq!(r.regime, Regime::DispersionDominated);
        assert!(r.separation_ratio > 1e5);
    }

    #[test]
    fn rejects_non_positive_fields() {
        assert!(RegimeQuery::new(0.0, 1.0, 1.0).is_err());
        assert!(RegimeQuery::new(1.0, -1.0, 1.0).is_err());
    }

    proptest! {
        // the exact ratio approaches the asymptote as (γ/ω21)² with prefactor 20/3
        #[test]
        fn asymptotic_error_bound(log_r in 2.0f64..6.0, t0 in 1e-14f64..1e-11) {
            let g = 3.77e7;
            let q = RegimeQuery::new(t0, g, g * 10f64.powf(log_r)).unwrap();
            let rel = (regime_ratio(&q).unwrap() / regime_ratio_asymptotic(&q).unwrap() - 1.0).abs();
            prop_assert!(rel <= 7.0 * (g / q.half_separation).powi(2));
        }
    }
}
