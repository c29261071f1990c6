//! Build leak-free "elsewhere" personnel covariates from a parsed corpus
//! and aggregate them into the game-matchup observation table.
//!
//! Each batter's covariate is his HR-per-PA rate in the same matchup at
//! every park other than the one being modeled, so a park's own scoring
//! never feeds back into its covariates.
//!
//! Run with `cargo run --example build_observations`.

use std::path::Path;

use parkfx::covariates::{
    build_observations, matchup_frequency_table, ElsewhereIndex, StudyConfig,
};
use parkfx::ingest::{parse_directory, UnknownPlayerPolicy};
use parkfx::Matchup;

fn main() -> parkfx::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let parsed = parse_directory(
        &data.join("events"),
        &data.join("rosters"),
        UnknownPlayerPolicy::Strict,
    )?;
    let pas: Vec<_> = parsed
        .games
        .iter()
        .flat_map(|(_, game_pas)| game_pas.iter().cloned())
        .collect();

    let freq = matchup_frequency_table(&pas);
    println!("matchup frequencies:");
    for m in Matchup::ALL {
        println!(
            "  {}: {} PA, {} HR, rate {:.4}",
            m,
            freq.pa[m.index()],
            freq.hr[m.index()],
            freq.rate(m)
        );
    }

    let index = ElsewhereIndex::build(&pas);
    let observations = build_observations(&pas, &index, &StudyConfig::default())?;

    println!("\n{} game-matchup observations:", observations.len());
    println!(
        "{:<14} {:<5} {:<8} {:>3} {:>3} {:>8} {:>8}",
        "game", "park", "matchup", "pa", "hr", "zB", "zP"
    );
    for o in &observations {
        println!(
            "{:<14} {:<5} {:<8} {:>3} {:>3} {:>8.4} {:>8.4}",
            o.game_id, o.park, o.matchup.to_string(), o.pa, o.hrsum, o.zb, o.zp
        );
    }
    Ok(())
}
