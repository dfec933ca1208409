use slowlight::units::wavelength_nm_to_omega;
use slowlight::vapor::{Calibration, CatalogFile, VaporCell};
use slowlight::Error;

const HYPERFINE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/rb_hyperfine.toml");
const EFFECTIVE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/rb_effective.toml");

#[test]
fn bundled_catalog_matches_data_file() {
    assert_eq!(CatalogFile::load(EFFECTIVE).unwrap(), CatalogFile::rubidium());
}

#[test]
fn hyperfine_catalog_carries_the_same_total_strength() {
    let full = CatalogFile::load(HYPERFINE).unwrap();
    let eff = CatalogFile::rubidium();
    assert_eq!(full.catalog.lines().len(), 20);
    let total = |f: &CatalogFile| f.catalog.lines().iter().map(|l| l.strength).sum::<f64>();
    assert!((total(&full) / total(&eff) - 1.0).abs() < 1e-12);
}

#[test]
fn hyperfine_and_effective_agree_on_the_plateau() {
    let load = |f: CatalogFile| {
        let model = Calibration::rubidium_plateau().apply(&f.catalog, &f.density).unwrap();
        VaporCell::new(f.catalog, model, 280.0, 0.07, 3).unwrap()
    };
    let full = load(CatalogFile::load(HYPERFINE).unwrap());
    let eff = load(CatalogFile::rubidium());
    for nm in [786.0, 787.0, 788.0, 789.0] {
        let w = wavelength_nm_to_omega(nm);
        assert!((full.group_delay(w) / eff.group_delay(w) - 1.0).abs() < 1e-2, "{nm} nm");
    }
}

#[test]
fn missing_catalog_names_the_path() {
    let err = CatalogFile::load("/nonexistent/lines.toml").unwrap_err();
    assert!(matches!(err, Error::Read { .. }));
    assert!(err.to_string().contains("/nonexistent/lines.toml"));
}

#[test]
fn malformed_catalogs_are_rejected() {
    let base = std::fs::read_to_string(EFFECTIVE).unwrap();
    let cases = [
        base.replacen("wavelength_nm", "angular_frequency = 2.4e15\nwavelength_nm", 1),
        base.replacen("linewidth", "colour = 1\nlinewidth", 1),
        base.replacen("strength = ", "strength = -", 1),
    ];
    for text in cases {
        assert!(CatalogFile::parse(&text).is_err(), "{text}");
    }
}

#[test]
fn out_of_range_temperature_is_an_error() {
    let file = CatalogFile::rubidium();
    let err = VaporCell::new(file.catalog, file.density, 500.0, 0.07, 1).unwrap_err();
    assert!(matches!(err, Error::TemperatureOutOfRange { .. }));
}
