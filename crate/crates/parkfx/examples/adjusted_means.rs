//! Compute personnel-adjusted park means: each park's expected HR per game
//! for a matchup, evaluated at the league-average personnel covariates, so
//! parks are compared on equal rosters. Prints the per-matchup rankings and
//! the clustered marginal table.
//!
//! Run with `cargo run --example adjusted_means`.

use parkfx::glmm::{build_design, fit, FitOptions, ModelSpec};
use parkfx::park_effects::{matchup_averages, rank_report};
use parkfx::simulate::{simulate_corpus, SimConfig};
use parkfx::Matchup;

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

    for m in Matchup::ALL {
        println!("matchup {m} (rank 1 = most HR-friendly):");
        println!(
            "  {:<5} {:>8} {:>6} {:>8} {:>6} {:>6}",
            "park", "lambda", "rank", "hr/g", "rank", "shift"
        );
        for row in &report.matchup_tables[m.index()] {
            println!(
                "  {:<5} {:>8.3} {:>6} {:>8.3} {:>6} {:>+6}",
                row.park, row.lambda, row.lambda_rank,
                row.hr_per_game, row.empirical_rank, row.delta_rank
            );
        }
    }

    println!("\nmarginal adjusted means (weighted over matchups):");
    for row in &report.marginal {
        println!(
            "  cluster {} {:<5} {:>8.3} rank {} (empirical rank {}, shift {:+})",
            row.cluster, row.park, row.lambda, row.lambda_rank,
            row.empirical_rank, row.delta_rank
        );
    }
    Ok(())
}
