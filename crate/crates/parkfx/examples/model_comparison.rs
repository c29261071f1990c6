//! Refit the nested subset models (park-only, personnel-only, single
//! covariate) on the same corpus and compare them by game-level residual
//! variance and AIC.
//!
//! Run with `cargo run --example model_comparison`.

use parkfx::diagnostics::comparison_row;
use parkfx::glmm::{build_design, fit, FitOptions, ModelSpec};
use parkfx::pipeline::SUBSET_MODELS;
use parkfx::simulate::{simulate_corpus, SimConfig};

fn main() -> parkfx::Result<()> {
    let mut config = SimConfig::published(42);
    let keep = ["WAS", "NYA", "COL", "BOS", "SFN", "CIN"];
    config.park_effects.retain(|park, _| keep.contains(&park.as_str()));
    config.n_seasons = 4;
    config.games_per_park_season = 60;

    let (observations, _) = simulate_corpus(&config)?;

    println!("{:<18} {:>4} {:>8} {:>12}", "model", "df", "s2", "aic");
    for name in SUBSET_MODELS {
        let spec = ModelSpec::subset(name)?;
        let design = build_design(&observations, &spec)?;
        let model = fit(&design, &FitOptions::default())?;
        let row = comparison_row(name, &model, &observations)?;
        println!("{:<18} {:>4} {:>8.4} {:>12.2}", row.model, row.df, row.s2, row.aic);
    }
    Ok(())
}
