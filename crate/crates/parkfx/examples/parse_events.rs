//! Parse a directory of Retrosheet event and roster files and print the
//! resulting plate-appearance table.
//!
//! Run with `cargo run --example parse_events`.

use std::path::Path;

use parkfx::ingest::{parse_directory, UnknownPlayerPolicy};

fn main() -> parkfx::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let parsed = parse_directory(
        &data.join("events"),
        &data.join("rosters"),
        UnknownPlayerPolicy::Strict,
    )?;

    println!("parsed {} games ({} events skipped)", parsed.games.len(), parsed.skipped);
    for (header, pas) in &parsed.games {
        println!(
            "\n{} {} at {} ({}), {} plate appearances",
            header.date, header.visiting_team, header.home_team, header.site,
            pas.len()
        );
        println!("{:<4} {:<10} {:<10} {:<8} {:<3}", "seq", "batter", "pitcher", "matchup", "hr");
        for pa in pas {
            println!(
                "{:<4} {:<10} {:<10} {:<8} {:<3}",
                pa.event_seq,
                pa.batter_id,
                pa.pitcher_id,
                pa.matchup().to_string(),
                if pa.is_home_run { "HR" } else { "" }
            );
        }
    }
    Ok(())
}
