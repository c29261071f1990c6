//! Generate a synthetic corpus from known parameters, refit the model, and
//! score how many generating values fall within two standard errors of
//! their estimates.
//!
//! Run with `cargo run --example simulate_recover`.

use parkfx::glmm::{build_design, fit, FitOptions, ModelSpec};
use parkfx::simulate::{recovery_report, simulate_corpus, SimConfig};

fn main() -> parkfx::Result<()> {
    let mut config = SimConfig::published(7);
    let keep = ["WAS", "NYA", "COL", "BOS", "SFN", "CIN", "SEA", "TEX"];
    config.park_effects.retain(|park, _| keep.contains(&park.as_str()));
    config.n_seasons = 5;
    config.games_per_park_season = 60;

    let (observations, truth) = simulate_corpus(&config)?;
    println!(
        "simulated {} observations from {} parks x {} seasons",
        observations.len(),
        truth.park_effects.len(),
        truth.season_effects.len()
    );

    let design = build_design(&observations, &ModelSpec::full())?;
    let model = fit(&design, &FitOptions::default())?;
    let report = recovery_report(&truth, &model)?;

    println!(
        "{} effects scored; {:.1}% within 2 se, {:.1}% within 3 se",
        report.rows.len(),
        100.0 * report.fraction_within_2se,
        100.0 * report.fraction_within_3se
    );
    println!("\nworst-recovered effects by |z|:");
    let mut rows = report.rows.clone();
    rows.sort_by(|a, b| b.z.abs().partial_cmp(&a.z.abs()).unwrap());
    println!("{:<14} {:>8} {:>9} {:>7} {:>6}", "effect", "truth", "estimate", "se", "z");
    for row in rows.iter().take(8) {
        println!(
            "{:<14} {:>8.3} {:>9.3} {:>7.3} {:>6.2}",
            row.name, row.truth, row.estimate, row.se, row.z
        );
    }
    Ok(())
}
