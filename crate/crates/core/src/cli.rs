//! The `slowlight` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::config::{PulseConfig, Resolved, RunConfig};
use crate::error::{Error, Result};
use crate::io::{self, num, Format, Table};
use crate::metrics::PropagationReport;
use crate::pulse::{propagate, TransferFunction, SINC_TIME_BANDWIDTH};
use crate::scenario::{simulate, Center, PulseRecipe};
use crate::sweeps::{
    delay_spectrum, design_curve, evaluate_regime, recipe_sweep, symmetric_idealization, temperature_sweep,
    RegimeQuery, SweepParameter,
};
use crate::units::{bandwidth_nm_to_hz, omega_to_wavelength_nm};
use crate::vapor::CatalogFile;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "slowlight", version, about = "Broadband slow light in warm alkali vapor")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group delay, group index and transmission against wavelength.
    Spectrum(RunArgs),
    /// Propagate one pulse and score the output.
    Propagate(RunArgs),
    /// Propagate over a range of temperature, center wavelength or bandwidth.
    Sweep(RunArgs),
    /// Best fractional delay against bandwidth under a distortion budget.
    Design(RunArgs),
    /// Absorptive over dispersive broadening length for a symmetric line pair.
    Regime(RegimeArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Cell temperature, °C.
    #[arg(long, allow_negative_numbers = true)]
    pub temp_c: Option<f64>,
    /// Single-pass cell length, m.
    #[arg(long)]
    pub length_m: Option<f64>,
    /// Passes through the cell.
    #[arg(long)]
    pub passes: Option<u32>,
    /// Pulse intensity FWHM, fs.
    #[arg(long)]
    pub t0_fs: Option<f64>,
    /// Pulse center wavelength, nm.
    #[arg(long)]
    pub center_nm: Option<f64>,
    /// Output file (standard output when absent).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct RegimeArgs {
    /// Catalog source for the symmetric idealization when line parameters
    /// are not given.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Pulse duration, fs.
    #[arg(long, default_value_t = 250.0)]
    pub t0_fs: f64,
    /// Line half-width γ, rad/s.
    #[arg(long)]
    pub linewidth: Option<f64>,
    /// Half line separation ω21, rad/s.
    #[arg(long, conflicts_with = "separation_ratio")]
    pub half_separation: Option<f64>,
    /// ω21/γ, used with `--linewidth`.
    #[arg(long)]
    pub separation_ratio: Option<f64>,
    /// Output file (standard output when absent).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    pub format: Option<String>,
}

/// Parses `args` (including the program name), runs, and returns the exit
/// code. Errors are reported on standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        // Reader went away (e.g. `| head`); nothing left to report.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let mut msg = format!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                msg.push_str(&format!("\n  caused by: {s}"));
                source = s.source();
            }
            eprintln!("{msg}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical_guard() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Spectrum(a) => cmd_spectrum(&prepare(a)?),
        Command::Propagate(a) => cmd_propagate(&prepare(a)?),
        Command::Sweep(a) => cmd_sweep(&prepare(a)?),
        Command::Design(a) => cmd_design(&prepare(a)?),
        Command::Regime(a) => cmd_regime(a),
    }
}

/// Loads the config, applies flag overrides and resolves it.
pub fn prepare(args: &RunArgs) -> Result<Resolved> {
    let (mut config, base) = match &args.config {
        Some(p) => (
            RunConfig::load(p)?,
            p.parent().map(Path::to_path_buf).unwrap_or_default(),
        ),
        None => (RunConfig::default(), PathBuf::from(".")),
    };
    if let Some(t) = args.temp_c {
        config.cell.temperature_c = t;
    }
    if let Some(l) = args.length_m {
        config.cell.length_m = l;
    }
    if let Some(p) = args.passes {
        config.cell.passes = p;
    }
    if let Some(t0) = args.t0_fs {
        config.pulse.t0_fs = Some(t0);
        config.pulse.bandwidth_nm = None;
    }
    if let Some(c) = args.center_nm {
        config.pulse.center_nm = Some(c);
    }
    if let Some(out) = &args.out {
        config.output.path = Some(out.display().to_string());
    }
    if let Some(f) = &args.format {
        config.output.format = f.parse()?;
    }
    let mut resolved = config.resolve(&base)?;
    if let Some(file) = &resolved.config.pulse.file {
        let p = Path::new(file);
        if p.is_relative() {
            resolved.config.pulse.file = Some(base.join(p).display().to_string());
        }
    }
    Ok(resolved)
}

fn metadata(r: &Resolved) -> Value {
    serde_json::to_value(&r.config).expect("config serializes")
}

fn header(r: &Resolved, table: &mut Table) {
    table.comment(format!("density_scale = {}", io::format_number(r.density_scale)));
}

fn emit(r: &Resolved, table: Table) -> Result<()> {
    let format = r.config.output.format;
    match &r.config.output.path {
        Some(p) => table.write(Path::new(p), format),
        None => {
            let text = table.render(format)?;
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// `dir/stem.suffix.ext` next to the main output.
fn sibling(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}.{ext}"))
}

pub fn cmd_spectrum(r: &Resolved) -> Result<()> {
    let range = r.config.spectrum.clone().unwrap_or_default().range()?;
    let s = delay_spectrum(&r.cell, &range)?;
    let mut t =
        Table::new(["wavelength_nm", "group_delay_s", "group_index", "transmission"]).with_metadata(metadata(r));
    header(r, &mut t);
    t.comment(format!("max_group_delay_s = {}", io::format_number(s.max_delay())));
    if let Some(b) = s.uniform_band {
        t.comment(format!("uniform_band_center_nm = {}", io::format_number(b.center_nm)));
        t.comment(format!(
            "uniform_band_reference_delay_s = {}",
            io::format_number(b.reference_delay)
        ));
        t.comment(format!(
            "uniform_band_short_edge_nm = {}",
            io::format_number(b.short_edge_nm)
        ));
        t.comment(format!(
            "uniform_band_long_edge_nm = {}",
            io::format_number(b.long_edge_nm)
        ));
        t.comment(format!("uniform_band_width_nm = {}", io::format_number(b.width_nm)));
        t.comment(format!("uniform_band_width_hz = {}", io::format_number(b.width_hz)));
    }
    for row in &s.rows {
        t.push_numbers(&[row.wavelength_nm, row.group_delay, row.group_index, row.transmission]);
    }
    emit(r, t)
}

const REPORT_COLUMNS: [&str; 10] = [
    "delay_s",
    "fractional_delay",
    "fractional_broadening",
    "input_fwhm_s",
    "output_fwhm_s",
    "amplitude_distortion",
    "phase_distortion",
    "leakage",
    "channel_window",
    "absorbed",
];

fn report_values(r: &PropagationReport) -> Vec<Value> {
    let window = serde_json::to_value(r.channel_window).expect("enum serializes");
    vec![
        num(r.delay),
        num(r.fractional_delay),
        num(r.fractional_broadening),
        num(r.input_fwhm),
        num(r.output_fwhm),
        num(r.amplitude_distortion),
        num(r.phase_distortion),
        num(r.leakage),
        window,
        num(r.absorbed),
    ]
}

fn report_table(lead: &[&str]) -> Table {
    Table::new(lead.iter().copied().chain(REPORT_COLUMNS))
}

pub fn cmd_propagate(r: &Resolved) -> Result<()> {
    let opts = &r.options;
    let (center_nm, input, transfer, report) = match &r.config.pulse.file {
        Some(file) => {
            let carrier = match r.config.pulse.center_nm {
                Some(nm) => Some(Center::Wavelength(nm).omega(&r.cell)?),
                None => None,
            };
            let input = io::read_pulse(Path::new(file), carrier)?;
            let tf = TransferFunction::for_cell(&r.cell, *input.grid(), input.carrier(), true)?;
            let output = propagate(&input, &tf, opts.grid.wrap_tolerance)?;
            let report = PropagationReport::analyze(&input, output, &tf)?;
            (
                r.config
                    .pulse
                    .center_nm
                    .unwrap_or(omega_to_wavelength_nm(input.carrier())),
                input,
                tf,
                report,
            )
        }
        None => {
            let recipe = r.config.pulse.recipe(&r.cell)?;
            let sim = simulate(&r.cell, &recipe, opts)?;
            (
                recipe.center.wavelength_nm(&r.cell)?,
                sim.input,
                sim.transfer,
                sim.report,
            )
        }
    };
    let mut t = report_table(&["center_nm", "points", "time_step_s"]).with_metadata(metadata(r));
    header(r, &mut t);
    let grid = input.grid();
    let mut row = vec![num(center_nm), Value::from(grid.len()), num(grid.time_step())];
    row.extend(report_values(&report));
    t.push(row);
    if let Some(path) = &r.config.output.path {
        let path = Path::new(path);
        io::write_pulse(&sibling(path, "input", "csv"), &input)?;
        if let Some(out) = &report.output {
            io::write_pulse(&sibling(path, "output", "csv"), out)?;
        }
        if r.config.output.transfer {
            let format = r.config.output.format;
            io::transfer_table(&transfer).write(&sibling(path, "transfer", format.extension()), format)?;
        }
    }
    emit(r, t)
}

pub fn cmd_sweep(r: &Resolved) -> Result<()> {
    let sweep = r
        .config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::invalid("sweep", "the config has no [sweep] block"))?;
    let values = sweep.range()?.values();
    let cell = &r.cell;
    let mut t;
    match sweep.parameter {
        SweepParameter::Temperature => {
            let pulses: Vec<PulseConfig> = if sweep.recipes.is_empty() {
                vec![r.config.pulse.clone()]
            } else {
                sweep.recipes.clone()
            };
            t = report_table(&["recipe", "shape", "t0_s", "center_nm", "temperature_c"]);
            for (i, p) in pulses.iter().enumerate() {
                let recipe = p.recipe(cell)?;
                let center_nm = recipe.center.wavelength_nm(cell)?;
                let shape = serde_json::to_value(recipe.shape).expect("enum serializes");
                for point in temperature_sweep(cell, &recipe, &values, &r.options)? {
                    let mut row = vec![
                        Value::from(i),
                        shape.clone(),
                        num(recipe.t0),
                        num(center_nm),
                        num(point.temperature_c),
                    ];
                    row.extend(report_values(&point.report));
                    t.push(row);
                }
            }
        }
        SweepParameter::Wavelength => {
            let base = r.config.pulse.recipe(cell)?;
            let recipes: Vec<PulseRecipe> = values
                .iter()
                .map(|&nm| PulseRecipe::new(base.shape, base.t0, Center::Wavelength(nm)))
                .collect();
            t = report_table(&["center_nm", "t0_s"]);
            for (nm, rep) in values.iter().zip(recipe_sweep(cell, &recipes, &r.options)?) {
                let mut row = vec![num(*nm), num(base.t0)];
                row.extend(report_values(&rep));
                t.push(row);
            }
        }
        SweepParameter::Bandwidth => {
            let center = r.config.pulse.center();
            let center_nm = center.wavelength_nm(cell)?;
            let recipes: Vec<PulseRecipe> = values
                .iter()
                .map(|&nm| {
                    let t0 = SINC_TIME_BANDWIDTH / bandwidth_nm_to_hz(nm, center_nm);
                    PulseRecipe::new(r.config.pulse.shape, t0, center)
                })
                .collect();
            t = report_table(&["bandwidth_nm", "t0_s", "center_nm"]);
            for ((nm, recipe), rep) in values
                .iter()
                .zip(&recipes)
                .zip(recipe_sweep(cell, &recipes, &r.options)?)
            {
                let mut row = vec![num(*nm), num(recipe.t0), num(center_nm)];
                row.extend(report_values(&rep));
                t.push(row);
            }
        }
    }
    t = t.with_metadata(metadata(r));
    header(r, &mut t);
    emit(r, t)
}

pub fn cmd_design(r: &Resolved) -> Result<()> {
    let design = r.config.design.clone().unwrap_or_default();
    let search = design.search(&r.cell)?;
    let center = r.config.pulse.center();
    let center_nm = center.wavelength_nm(&r.cell)?;
    let widths = design.bandwidths_nm()?.values();
    let bandwidths: Vec<f64> = widths.iter().map(|&nm| bandwidth_nm_to_hz(nm, center_nm)).collect();
    let points = design_curve(&r.cell, center, &bandwidths, &search)?;
    let mut t = Table::new([
        "bandwidth_nm",
        "bandwidth_hz",
        "t0_s",
        "center_nm",
        "fractional_delay",
        "temperature_c",
        "delay_s",
        "amplitude_distortion",
        "phase_distortion",
        "limit",
    ])
    .with_metadata(metadata(r));
    header(r, &mut t);
    for (nm, p) in widths.iter().zip(&points) {
        let mut row: Vec<Value> = [
            *nm,
            p.bandwidth_hz,
            p.t0,
            p.center_nm,
            p.fractional_delay,
            p.temperature_c,
            p.delay,
        ]
        .iter()
        .map(|&x| num(x))
        .collect();
        row.push(num(p.amplitude_distortion));
        row.push(num(p.phase_distortion));
        row.push(serde_json::to_value(p.limit).expect("enum serializes"));
        t.push(row);
    }
    emit(r, t)
}

pub fn cmd_regime(a: &RegimeArgs) -> Result<()> {
    let t0 = a.t0_fs * 1e-15;
    let query = match (a.linewidth, a.half_separation, a.separation_ratio) {
        (Some(g), Some(w), None) => RegimeQuery::new(t0, g, w)?,
        (Some(g), None, Some(r)) => RegimeQuery::new(t0, g, g * r)?,
        (None, None, None) => {
            let catalog = match &a.config {
                Some(p) => {
                    let cfg = RunConfig::load(p)?;
                    match cfg.catalog_path(p.parent().unwrap_or(Path::new("."))) {
                        Some(path) => CatalogFile::load(path)?.catalog,
                        None => CatalogFile::rubidium().catalog,
                    }
                }
                None => CatalogFile::rubidium().catalog,
            };
            symmetric_idealization(&catalog, t0)?
        }
        _ => {
            return Err(Error::invalid(
                "regime",
                "give --linewidth with --half-separation or --separation-ratio, or neither",
            ))
        }
    };
    let res = evaluate_regime(&query)?;
    let mut t = Table::new([
        "t0_s",
        "linewidth_rad_s",
        "half_separation_rad_s",
        "separation_ratio",
        "ratio",
        "asymptotic",
        "regime",
    ]);
    let mut row: Vec<Value> = [
        query.t0,
        query.linewidth,
        query.half_separation,
        res.separation_ratio,
        res.ratio,
        res.asymptotic,
    ]
    .iter()
    .map(|&x| num(x))
    .collect();
    row.push(serde_json::to_value(res.regime).expect("enum serializes"));
    t.push(row);
    let format = match &a.format {
        Some(f) => f.parse()?,
        None => Format::Csv,
    };
    match &a.out {
        Some(p) => t.write(p, format),
        None => {
            std::io::stdout().lock().write_all(t.render(format)?.as_bytes())?;
            Ok(())
        }
    }
}
