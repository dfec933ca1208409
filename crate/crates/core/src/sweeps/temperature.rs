use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::metrics::PropagationReport;
use crate::pulse::SampledGrid;
use crate::scenario::{delay_budget, simulate, simulate_on, PulseRecipe, SimOptions};
use crate::vapor::VaporCell;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperaturePoint {
    pub temperature_c: f64,
    pub report: PropagationReport,
}

/// Grid shared by every point of a sweep: sized for the largest delay
/// budget among `temperatures_c`.
pub fn sweep_grid(
    template: &VaporCell,
    recipe: &PulseRecipe,
    temperatures_c: &[f64],
    options: &SimOptions,
) -> Result<SampledGrid> {
    let mut budget: f64 = 0.0;
    for &t in temperatures_c {
        let cell = template.at_temperature_c(t)?;
        budget = budget.max(delay_budget(&cell, recipe.center.omega(&cell)?));
    }
    options.resolve_grid(recipe, budget)
}

/// Propagates `recipe` through `template` at each temperature. Points are
/// evaluated in parallel and returned in input order.
pub fn temperature_sweep(
    template: &VaporCell,
    recipe: &PulseRecipe,
    temperatures_c: &[f64],
    options: &SimOptions,
) -> Result<Vec<TemperaturePoint>> {
    let grid = sweep_grid(template, recipe, temperatures_c, options)?;
    temperatures_c
        .par_iter()
        .map(|&t| {
            let cell = template.at_temperature_c(t)?;
            let sim = simulate_on(&cell, recipe, grid, &options.grid)?;
            Ok(TemperaturePoint {
                temperature_c: t,
                report: sim.report,
            })
        })
        .collect()
}

/// Propagates each recipe through the same cell, each on its own grid, in
/// parallel; results keep the input order.
pub fn recipe_sweep(cell: &VaporCell, recipes: &[PulseRecipe], options: &SimOptions) -> Result<Vec<PropagationReport>> {
    recipes
        .par_iter()
        .map(|r| simulate(cell, r, options).map(|s| s.report))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FbLeakageRow {
    pub temperature_c: f64,
    pub fractional_delay: f64,
    pub fractional_broadening: f64,
    pub leakage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FbLeakageCurve {
    pub recipe: PulseRecipe,
    pub rows: Vec<FbLeakageRow>,
}

/// Broadening and leakage against temperature, one curve per recipe.
pub fn fb_leakage_curves(
    template: &VaporCell,
    recipes: &[PulseRecipe],
    temperatures_c: &[f64],
    options: &SimOptions,
) -> Result<Vec<FbLeakageCurve>> {
    recipes
        .iter()
        .map(|recipe| {
            let rows = temperature_sweep(template, recipe, temperatures_c, options)?
                .into_iter()
                .map(|p| FbLeakageRow {
                    temperature_c: p.temperature_c,
                    fractional_delay: p.report.fractional_delay,
                    fractional_broadening: p.report.fractional_broadening,
                    leakage: p.report.leakage,
                })
                .collect();
            Ok(FbLeakageCurve { recipe: *recipe, rows })
        })
        .collect()
}
