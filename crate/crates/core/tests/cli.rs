use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_slowlight");

fn preset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("presets")
        .join(format!("{name}.toml"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("SLOWLIGHT_CATALOG_DIR")
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Header and numeric rows of a CSV table, comments skipped.
fn table(o: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    assert!(o.status.success(), "{}", stderr(o));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(o.stdout.as_slice());
    let header = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|f| f.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, rows)
}

fn column(t: &(Vec<String>, Vec<Vec<f64>>), name: &str) -> Vec<f64> {
    let i =
        t.0.iter()
            .position(|c| c == name)
            .unwrap_or_else(|| panic!("no column {name}"));
    t.1.iter().map(|r| r[i]).collect()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn fig2_preset_shows_plateau_and_resonances() {
    let t = table(&run(&["spectrum", "--config", preset("fig2").to_str().unwrap()]));
    let nm = column(&t, "wavelength_nm");
    let delay = column(&t, "group_delay_s");
    let at = |x: f64| delay[nm.iter().position(|&v| (v - x).abs() < 1e-9).unwrap()];
    assert!((at(788.44) * 1e12 - 10.0).abs() < 1.5);
    assert!(at(780.24) > 1e3 * at(788.44));
    assert!(at(794.98) > 1e3 * at(788.44));
}

#[test]
fn propagate_reports_a_delayed_pulse() {
    let t = table(&run(&["propagate", "--config", preset("fig3a").to_str().unwrap()]));
    let fd = column(&t, "fractional_delay")[0];
    assert!(fd > 10.0 && fd < 25.0, "{fd}");
}

#[test]
fn every_preset_runs() {
    let dir = tempfile::tempdir().unwrap();
    for (name, cmd) in [
        ("fig2", "spectrum"),
        ("fig3a", "propagate"),
        ("fig3b", "propagate"),
        ("fig4", "sweep"),
        ("fig5", "design"),
        ("fig6", "sweep"),
    ] {
        let out = dir.path().join(format!("{name}.csv"));
        let o = run(&[
            cmd,
            "--config",
            preset(name).to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        assert!(std::fs::metadata(&out).unwrap().len() > 0);
    }
    assert!(dir.path().join("fig3a.input.csv").exists());
    assert!(dir.path().join("fig3a.output.csv").exists());
}

#[test]
fn output_is_reproducible() {
    let cfg = preset("fig3b");
    let args = ["propagate", "--config", cfg.to_str().unwrap()];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_output_parses() {
    let o = run(&[
        "propagate",
        "--config",
        preset("fig3a").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["cell"]["temperature_c"], 326.0);
    assert!(v["rows"][0]["fractional_delay"].as_f64().unwrap() > 10.0);
}

#[test]
fn overrides_take_precedence() {
    let t = table(&run(&[
        "propagate",
        "--config",
        preset("fig3a").to_str().unwrap(),
        "--temp-c",
        "150",
    ]));
    assert!(column(&t, "fractional_delay")[0] < 1.0);
}

#[test]
fn vacuum_leaves_the_pulse_alone() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[cell]\nnumber_density = 0.0\n[pulse]\nt0_fs = 250.0\n");
    let t = table(&run(&["propagate", "--config", cfg.to_str().unwrap()]));
    assert!(column(&t, "fractional_delay")[0].abs() < 1e-9);
    assert!(column(&t, "fractional_broadening")[0].abs() < 1e-9);
    assert!(column(&t, "absorbed")[0].abs() < 1e-12);

    let t = table(&run(&["spectrum", "--config", cfg.to_str().unwrap()]));
    assert!(column(&t, "group_delay_s").iter().all(|&d| d == 0.0));
}

#[test]
fn missing_catalog_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "catalog = \"nowhere/lines.toml\"\n");
    let o = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nowhere/lines.toml"), "{}", stderr(&o));
}

#[test]
fn catalog_found_through_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "catalog = \"rb_hyperfine.toml\"\n[calibration]\n");
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let o = Command::new(BIN)
        .args(["spectrum", "--config", cfg.to_str().unwrap()])
        .env("SLOWLIGHT_CATALOG_DIR", &data)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn unknown_field_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[cell]\ntemperatur_c = 280.0\n");
    let o = run(&["propagate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("temperatur_c"), "{}", stderr(&o));
}

#[test]
fn out_of_range_temperature_is_a_config_error() {
    let o = run(&[
        "propagate",
        "--config",
        preset("fig3a").to_str().unwrap(),
        "--temp-c",
        "900",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("valid range"), "{}", stderr(&o));
}

#[test]
fn undersized_grid_is_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[pulse]\nt0_fs = 250.0\n[grid]\npoints = 64\ntime_step_fs = 1.0\n",
    );
    let o = run(&["propagate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("enlarge the time window"), "{}", stderr(&o));
}

#[test]
fn bad_usage_exits_with_two() {
    assert_eq!(run(&["propagate", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn regime_matches_the_asymptote_for_well_separated_lines() {
    let t = table(&run(&["regime", "--linewidth", "3.77e7", "--separation-ratio", "1000"]));
    let ratio = column(&t, "ratio")[0];
    let asym = column(&t, "asymptotic")[0];
    assert!((ratio / asym - 1.0).abs() < 0.01);
    assert!(ratio > 1.0);
}

#[test]
fn regime_singularity_is_numerical() {
    let r = (1.0f64 / 3.0).sqrt().to_string();
    let o = run(&["regime", "--linewidth", "1e9", "--separation-ratio", &r]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}
