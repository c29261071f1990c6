//! Poissonness diagnostics: bin observations by fitted rate, compute the
//! count-metameter ordinates phi(k) = ln(k! n_k / N) within each bin, and
//! compare them to the straight line a Poisson sample would follow.
//!
//! Run with `cargo run --example poissonness`.

use parkfx::diagnostics::{game_residual_variance, poissonness_bins, poissonness_line};
use parkfx::glmm::{build_design, fit, FitOptions, ModelSpec};
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

    let bins = poissonness_bins(&observations, &model.fitted, 0.2)?;
    for bin in bins.iter().filter(|b| b.n >= 30) {
        let (intercept, slope) = poissonness_line(bin.lambda)?;
        println!("bin lambda {:.1} (n = {}):", bin.lambda, bin.n);
        println!("  {:>2} {:>6} {:>9} {:>9}", "k", "n_k", "phi", "line");
        for (k, (nk, phi)) in bin.n_k.iter().zip(&bin.phi).enumerate() {
            let line = intercept + slope * k as f64;
            match phi {
                Some(phi) => println!("  {k:>2} {nk:>6} {phi:>9.3} {line:>9.3}"),
                None => println!("  {k:>2} {nk:>6} {:>9} {line:>9.3}", "-"),
            }
        }
    }

    let s2 = game_residual_variance(&observations, &model.fitted)?;
    println!("\ngame-level residual variance: {s2:.4}");
    Ok(())
}
