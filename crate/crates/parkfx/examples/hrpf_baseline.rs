//! The classical home run park factor: home HR-per-game (hit plus allowed)
//! over road HR-per-game, the baseline the model-based adjusted means are
//! compared against.
//!
//! Run with `cargo run --example hrpf_baseline`.

use parkfx::park_effects::{hrpf, TeamGameCounts};

fn main() -> parkfx::Result<()> {
    let teams = [
        ("COL", TeamGameCounts {
            hr_hit_home: 120, hr_allowed_home: 115, games_home: 81,
            hr_hit_road: 85, hr_allowed_road: 95, games_road: 81,
        }),
        ("NYA", TeamGameCounts {
            hr_hit_home: 130, hr_allowed_home: 100, games_home: 81,
            hr_hit_road: 110, hr_allowed_road: 98, games_road: 81,
        }),
        ("SFN", TeamGameCounts {
            hr_hit_home: 70, hr_allowed_home: 75, games_home: 81,
            hr_hit_road: 95, hr_allowed_road: 92, games_road: 81,
        }),
    ];

    println!("{:<5} {:>8}", "team", "HRPF");
    for (team, counts) in &teams {
        println!("{:<5} {:>8.3}", team, hrpf(counts)?);
    }
    println!("\nvalues above 1 mean the home park inflates home runs.");
    Ok(())
}
