//! Decompose the rank shifts caused by personnel adjustment across
//! divisions: a one-way ANOVA of |rank movement| grouped by division,
//! per matchup.
//!
//! Run with `cargo run --example division_anova`.

use parkfx::division_anova::division_anova;
use parkfx::glmm::{build_design, fit, FitOptions, ModelSpec};
use parkfx::park_effects::{matchup_averages, rank_report};
use parkfx::parks::DivisionMap;
use parkfx::simulate::{simulate_corpus, SimConfig};

fn main() -> parkfx::Result<()> {
    let mut config = SimConfig::published(42);
    let keep = ["WAS", "NYA", "COL", "BOS", "SFN", "CIN"];
    config.park_effects.retain(|park, _| keep.contains(&park.as_str()));
    config.n_seasons = 4;
    config.games_per_park_season = 60;

    let (observations, _) = simulate_corpus(&config)?;
    let design = build_design(&observations, &ModelSpec::full())?;
    let model = fit(&design, &FitOptions::default())?;

    let averages = matchup_averages(&observations)?;
    let report = rank_report(&model, &observations, &averages, 0.085)?;
    let rows = division_anova(&report, &DivisionMap::standard())?;

    println!(
        "{:<8} {:>12} {:>10} {:>6} {:>4}/{:<4}",
        "matchup", "ss_division", "ss_total", "r2", "df1", "df2"
    );
    for row in &rows {
        let r2 = row
            .r2
            .map(|v| format!("{v:.3}"))
            .unwrap_or_else(|| "-".to_string());
        println!(
            "{:<8} {:>12.3} {:>10.3} {:>6} {:>4}/{:<4}",
            row.matchup.to_string(), row.ss_division, row.ss_total, r2,
            row.df_division, row.df_error
        );
        for (division, mean) in &row.group_means {
            println!("    {division:?}: mean |shift| {mean:.2}");
        }
    }
    Ok(())
}
