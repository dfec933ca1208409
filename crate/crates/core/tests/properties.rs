use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use slowlight::metrics::{distortion_of_samples, power_leakage};
use slowlight::pulse::{propagate, PulseEnvelope, PulseShape, SampledGrid, TransferFunction};
use slowlight::scenario::{simulate, Center, PulseRecipe, SimOptions};
use slowlight::units::wavelength_nm_to_omega;
use slowlight::vapor::{Calibration, CatalogFile, VaporCell};

fn cell(temp_c: f64) -> VaporCell {
    let file = CatalogFile::rubidium();
    let model = Calibration::rubidium_plateau()
        .apply(&file.catalog, &file.density)
        .unwrap();
    VaporCell::new(file.catalog, model, temp_c, 0.07, 1).unwrap()
}

/// 100 fs Gaussian at 787 nm on an 8192 x 2 fs grid, and the cell response
/// on the same grid.
fn small_setup(temp_c: f64) -> (PulseEnvelope, TransferFunction) {
    let carrier = wavelength_nm_to_omega(787.0);
    let grid = SampledGrid::new(8192, 2e-15).unwrap();
    let p = PulseEnvelope::gaussian(100e-15, carrier, grid).unwrap();
    let tf = TransferFunction::for_cell(&cell(temp_c), grid, carrier, true).unwrap();
    (p, tf)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(r, i)| Complex64::new(r, i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn medium_is_passive(nm in 760.0f64..810.0, t in 20.0f64..370.0) {
        let c = cell(t);
        let w = wavelength_nm_to_omega(nm);
        prop_assert!(c.susceptibility(w).im >= 0.0);
        let tr = c.transmission(w);
        prop_assert!((0.0..=1.0).contains(&tr));
    }

    #[test]
    fn group_index_matches_finite_difference(nm in 783.0f64..793.0, t in 150.0f64..350.0) {
        let c = cell(t);
        let w = wavelength_nm_to_omega(nm);
        let h = w * 1e-6;
        let slope = (c.dispersion(w + h).index_excess - c.dispersion(w - h).index_excess) / (2.0 * h);
        let fd = c.dispersion(w).index_excess + w * slope;
        let analytic = c.group_index(w) - 1.0;
        prop_assert!(((analytic - fd) / analytic).abs() <= 1e-6);
    }

    #[test]
    fn gvd_zero_ignores_temperature(t in 20.0f64..370.0) {
        prop_assert_eq!(cell(t).gvd_zero().unwrap(), cell(280.0).gvd_zero().unwrap());
    }

    #[test]
    fn real_response_ignores_linewidth(nm in 784.0f64..792.0, factor in 0.2f64..5.0) {
        let c = cell(280.0);
        let broad = VaporCell::new(
            c.catalog().with_linewidth(3.77e7 * factor).unwrap(),
            c.density_model().clone(), 280.0, 0.07, 1,
        ).unwrap();
        let w = wavelength_nm_to_omega(nm);
        let (a, b) = (c.susceptibility(w), broad.susceptibility(w));
        // Re chi crosses zero between the lines; scale by its plateau size.
        let scale = a.norm() + c.susceptibility(c.gvd_zero().unwrap()).norm();
        prop_assert!((a.re - b.re).abs() / scale < 1e-8);
        prop_assert!(((c.group_index(w) - broad.group_index(w)) / (c.group_index(w) - 1.0)).abs() < 1e-8);
    }

    #[test]
    fn density_grows_with_temperature(t in 17.0f64..375.0, dt in 0.01f64..1.0) {
        let a = cell(t).number_density();
        let b = cell(t + dt).number_density();
        prop_assert!(b > a);
    }

    #[test]
    fn propagation_is_linear(a in complex(), b in complex(), k in 0isize..8192, t in 100.0f64..330.0) {
        let (p, tf) = small_setup(t);
        let q = p.shifted(k).map_samples(|z| z * Complex64::new(0.5, 0.25));
        let lhs = propagate(&p.combine(a, &q, b).unwrap(), &tf, 1.0).unwrap();
        let rhs = propagate(&p, &tf, 1.0).unwrap().combine(a, &propagate(&q, &tf, 1.0).unwrap(), b).unwrap();
        let scale = lhs.peak_magnitude().max(1e-300);
        prop_assert!(max_diff(lhs.samples(), rhs.samples()) / scale <= 1e-12);
    }

    #[test]
    fn propagation_commutes_with_shifts(k in -4096isize..4096, t in 100.0f64..330.0) {
        let (p, tf) = small_setup(t);
        let a = propagate(&p.shifted(k), &tf, 1.0).unwrap();
        let b = propagate(&p, &tf, 1.0).unwrap().shifted(k);
        prop_assert!(max_diff(a.samples(), b.samples()) / b.peak_magnitude() <= 1e-12);
    }

    #[test]
    fn phase_only_response_conserves_energy(c2 in -1e-25f64..1e-25, c3 in -1e-39f64..1e-39) {
        let (p, tf) = small_setup(280.0);
        let carrier = tf.carrier();
        let h = TransferFunction::from_fn(*tf.grid(), carrier, true, |w| {
            let d = w - carrier;
            Complex64::from_polar(1.0, c2 * d * d + c3 * d * d * d)
        });
        let out = propagate(&p, &h, 1.0).unwrap();
        prop_assert!((out.energy() / p.energy() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn distortion_ignores_scale_and_linear_phase(
        s in 1e-3f64..1e3, phase0 in 0.0f64..TAU, tau in -5e-12f64..5e-12, t in 150.0f64..330.0
    ) {
        let c = cell(t);
        let w0 = c.gvd_zero().unwrap();
        let omegas: Vec<f64> = (0..513).map(|i| w0 - 5e12 + 1e13 * i as f64 / 512.0).collect();
        let h: Vec<Complex64> = omegas
            .iter()
            .map(|&w| slowlight::pulse::cell_response(&c, w, c.interaction_length(), true))
            .collect();
        let g: Vec<Complex64> = h
            .iter()
            .zip(&omegas)
            .map(|(z, w)| z * Complex64::from_polar(s, phase0 + (w - w0) * tau))
            .collect();
        let a = distortion_of_samples(&omegas, &h).unwrap();
        let b = distortion_of_samples(&omegas, &g).unwrap();
        prop_assert!((a.amplitude - b.amplitude).abs() <= 1e-9 * a.amplitude.max(1e-12));
        prop_assert!((a.phase - b.phase).abs() <= 1e-9 * a.phase.max(1e-12));
    }

    #[test]
    fn leakage_ignores_amplitude_and_output_shift(s in 1e-6f64..1e6, k in -2000isize..2000) {
        let grid = SampledGrid::new(1 << 15, 35e-15).unwrap();
        let p = PulseEnvelope::sinc(250e-15, wavelength_nm_to_omega(787.0), grid, 1e-3).unwrap();
        let (base, _) = power_leakage(&p, &p, false).unwrap();
        let scaled = p.map_samples(|z| z * s);
        let (same, _) = power_leakage(&scaled, &scaled, false).unwrap();
        prop_assert!((same - base).abs() <= 1e-12);
        let (shifted, _) = power_leakage(&p, &p.shifted(k), false).unwrap();
        prop_assert!((shifted - base).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn report_fractions_are_bounded(t in 25.0f64..330.0, gaussian in any::<bool>()) {
        let shape = if gaussian { PulseShape::Gaussian } else { PulseShape::Sinc };
        let recipe = PulseRecipe::new(shape, 250e-15, Center::Wavelength(787.5));
        let r = simulate(&cell(t), &recipe, &SimOptions::default()).unwrap().report;
        prop_assert!((0.0..=1.0).contains(&r.leakage));
        prop_assert!((0.0..=1.0).contains(&r.absorbed));
        prop_assert!(r.fractional_broadening > -1.0);
        prop_assert!(r.amplitude_distortion >= 0.0 && r.phase_distortion >= 0.0);
    }
}
