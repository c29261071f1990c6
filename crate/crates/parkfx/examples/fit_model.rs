//! Fit the Poisson mixed model on a small simulated corpus and print the
//! estimated coefficients with their standard errors.
//!
//! Run with `cargo run --example fit_model`.

use parkfx::glmm::{build_design, fit, FitOptions, ModelSpec};
use parkfx::simulate::{simulate_corpus, SimConfig};

fn main() -> parkfx::Result<()> {
    // shrink the published scenario so the example runs in seconds
    let mut config = SimConfig::published(42);
    let keep = ["WAS", "NYA", "COL", "BOS", "SFN", "CIN"];
    config.park_effects.retain(|park, _| keep.contains(&park.as_str()));
    config.n_seasons = 4;
    config.games_per_park_season = 60;

    let (observations, _) = simulate_corpus(&config)?;
    println!("simulated {} observations", observations.len());

    let design = build_design(&observations, &ModelSpec::full())?;
    let model = fit(&design, &FitOptions::default())?;

    println!(
        "converged in {} iterations, log-likelihood {:.3}",
        model.iterations, model.loglik
    );
    println!(
        "intercept {:.4} (se {:.4})",
        model.beta0, model.beta0_se
    );
    if let (Some(b), Some(se)) = (model.beta_b, model.beta_b_se) {
        println!("batter slope {b:.4} (se {se:.4}), truth {:.2}", config.beta_b);
    }
    if let (Some(b), Some(se)) = (model.beta_p, model.beta_p_se) {
        println!("pitcher slope {b:.4} (se {se:.4}), truth {:.2}", config.beta_p);
    }
    println!("season variance {:.5}", model.sigma2_season);

    println!("\npark-matchup effects (reference WAS RR pinned at 0):");
    for effect in &model.park_effects {
        println!(
            "  {:<4} {:<3} {:>7.3} (se {:.3})",
            effect.park,
            effect.matchup.to_string(),
            effect.estimate,
            effect.se
        );
    }
    Ok(())
}
