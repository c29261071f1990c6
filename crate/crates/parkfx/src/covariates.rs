//! Elsewhere measures of batter and pitcher quality and the game-matchup
//! observation table.
//!
//! For a plate appearance at park `p`, a batter's quality measure is his
//! HR-per-PA rate for the matchup over every park except `p`, so the data
//! that rank parks never leak into the covariates built for them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::PlateAppearance;
use crate::matchup::{Hand, Matchup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Batter,
    Pitcher,
}

/// Fallback when a player has too few plate appearances away from the park.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FallbackRatePolicy {
    /// League-wide HR/PA for the matchup, computed excluding the park.
    #[default]
    LeagueMatchupMean,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub seasons: BTreeSet<i32>,
    pub parks: BTreeSet<String>,
    pub fallback_rate_policy: FallbackRatePolicy,
    pub min_elsewhere_pa: u64,
}

impl Default for StudyConfig {
    fn default() -> StudyConfig {
        StudyConfig {
            seasons: (2010..=2023).filter(|y| *y != 2020).collect(),
            parks: crate::parks::PARKS.iter().map(|s| s.to_string()).collect(),
            fallback_rate_policy: FallbackRatePolicy::LeagueMatchupMean,
            min_elsewhere_pa: 1,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.parks.len() != 30 {
            return Err(Error::InvalidConfig(format!(
                "park set has {} entries, expected 30",
                self.parks.len()
            )));
        }
        if self.seasons.is_empty() {
            return Err(Error::InvalidConfig("season set is empty".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub hr: u64,
    pub pa: u64,
}

/// Per-(player, role, matchup, park) tallies plus cross-park totals, so
/// leave-this-park-out rates are O(1) lookups.
#[derive(Debug, Default)]
pub struct ElsewhereIndex {
    at_park: HashMap<(String, Role, Matchup, String), Tally>,
    totals: HashMap<(String, Role, Matchup), Tally>,
    league_at_park: HashMap<(Matchup, String), Tally>,
    league_totals: [Tally; 4],
}

impl ElsewhereIndex {
    pub fn build(pas: &[PlateAppearance]) -> ElsewhereIndex {
        let mut idx = ElsewhereIndex::default();
        for pa in pas {
            let m = pa.matchup();
            let hr = u64::from(pa.is_home_run);
            for (player, role) in [
                (pa.batter_id.clone(), Role::Batter),
                (pa.pitcher_id.clone(), Role::Pitcher),
            ] {
                let t = idx
                    .at_park
                    .entry((player.clone(), role, m, pa.park.clone()))
                    .or_default();
                t.hr += hr;
                t.pa += 1;
                let t = idx.totals.entry((player, role, m)).or_default();
                t.hr += hr;
                t.pa += 1;
            }
            let t = idx
                .league_at_park
                .entry((m, pa.park.clone()))
                .or_default();
            t.hr += hr;
            t.pa += 1;
            idx.league_totals[m.index()].hr += hr;
            idx.league_totals[m.index()].pa += 1;
        }
        idx
    }

    pub fn total(&self, player: &str, role: Role, matchup: Matchup) -> Option<Tally> {
        self.totals
            .get(&(player.to_string(), role, matchup))
            .copied()
    }

    /// HR and PA counts for the player/matchup over every park except `park`.
    pub fn elsewhere_counts(
        &self,
        player: &str,
        role: Role,
        matchup: Matchup,
        park: &str,
    ) -> Option<Tally> {
        let total = self.total(player, role, matchup)?;
        let here = self
            .at_park
            .get(&(player.to_string(), role, matchup, park.to_string()))
            .copied()
            .unwrap_or_default();
        Some(Tally {
            hr: total.hr - here.hr,
            pa: total.pa - here.pa,
        })
    }

    /// League HR/PA for the matchup excluding `park`, the default fallback.
    pub fn league_rate_excluding(&self, matchup: Matchup, park: &str) -> f64 {
        let total = self.league_totals[matchup.index()];
        let here = self
            .league_at_park
            .get(&(matchup, park.to_string()))
            .copied()
            .unwrap_or_default();
        let pa = total.pa - here.pa;
        if pa == 0 {
            0.0
        } else {
            (total.hr - here.hr) as f64 / pa as f64
        }
    }
}

/// Leave-this-park-out HR rate for one player, with the configured fallback
/// when elsewhere data are too thin.
pub fn elsewhere_rate(
    index: &ElsewhereIndex,
    player: &str,
    role: Role,
    matchup: Matchup,
    park: &str,
    config: &StudyConfig,
) -> Result<f64> {
    let counts = index
        .elsewhere_counts(player, role, matchup, park)
        .ok_or_else(|| Error::UnknownPlayer(player.to_string()))?;
    if counts.pa >= config.min_elsewhere_pa && counts.pa > 0 {
        Ok(counts.hr as f64 / counts.pa as f64)
    } else {
        match config.fallback_rate_policy {
            FallbackRatePolicy::LeagueMatchupMean => Ok(index.league_rate_excluding(matchup, park)),
            FallbackRatePolicy::Zero => Ok(0.0),
        }
    }
}

/// One game-matchup row: the model's unit of analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameMatchupObservation {
    pub game_id: String,
    pub season: i32,
    pub park: String,
    pub matchup: Matchup,
    pub hrsum: u64,
    pub zb: f64,
    pub zp: f64,
    pub pa: u64,
}

/// Aggregate per-PA elsewhere rates into one observation per (game, matchup).
/// Matchups with zero plate appearances in a game emit no row.
pub fn build_observations(
    pas: &[PlateAppearance],
    index: &ElsewhereIndex,
    config: &StudyConfig,
) -> Result<Vec<GameMatchupObservation>> {
    let mut groups: BTreeMap<(String, Matchup), GameMatchupObservation> = BTreeMap::new();
    for pa in pas {
        let m = pa.matchup();
        let qb = elsewhere_rate(index, &pa.batter_id, Role::Batter, m, &pa.park, config)?;
        let qp = elsewhere_rate(index, &pa.pitcher_id, Role::Pitcher, m, &pa.park, config)?;
        let obs = groups
            .entry((pa.game_id.clone(), m))
            .or_insert_with(|| GameMatchupObservation {
                game_id: pa.game_id.clone(),
                season: pa.season,
                park: pa.park.clone(),
                matchup: m,
                hrsum: 0,
                zb: 0.0,
                zp: 0.0,
                pa: 0,
            });
        obs.hrsum += u64::from(pa.is_home_run);
        obs.zb += qb;
        obs.zp += qp;
        obs.pa += 1;
    }
    Ok(groups.into_values().collect())
}

/// 2x2 PA counts and HR rates by matchup.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchupFrequencyTable {
    pub pa: [u64; 4],
    pub hr: [u64; 4],
}

impl MatchupFrequencyTable {
    pub fn rate(&self, m: Matchup) -> f64 {
        let i = m.index();
        if self.pa[i] == 0 {
            0.0
        } else {
            self.hr[i] as f64 / self.pa[i] as f64
        }
    }

    pub fn total_pa(&self) -> u64 {
        self.pa.iter().sum()
    }

    pub fn total_hr(&self) -> u64 {
        self.hr.iter().sum()
    }

    pub fn row_total_pa(&self, batter: Hand) -> u64 {
        Matchup::ALL
            .iter()
            .filter(|m| m.batter() == batter)
            .map(|m| self.pa[m.index()])
            .sum()
    }

    pub fn col_total_pa(&self, pitcher: Hand) -> u64 {
        Matchup::ALL
            .iter()
            .filter(|m| m.pitcher() == pitcher)
            .map(|m| self.pa[m.index()])
            .sum()
    }
}

pub fn matchup_frequency_table(pas: &[PlateAppearance]) -> MatchupFrequencyTable {
    let mut t = MatchupFrequencyTable::default();
    for pa in pas {
        let i = pa.matchup().index();
        t.pa[i] += 1;
        t.hr[i] += u64::from(pa.is_home_run);
    }
    t
}

pub const OBS_CSV_HEADER: &str = "GAME_ID,hrsum,zB,zP,park,bh,ph,pa,season";

/// Covariates are carried at full precision internally; the CSV rounds to 4
/// decimals, the display precision of the data-frame layout.
pub fn write_obs_csv(obs: &[GameMatchupObservation]) -> String {
    let mut out = String::from(OBS_CSV_HEADER);
    out.push('\n');
    for o in obs {
        let _ = writeln!(
            out,
            "{},{},{:.4},{:.4},{},{},{},{},{}",
            o.game_id,
            o.hrsum,
            o.zb,
            o.zp,
            o.park,
            o.matchup.batter(),
            o.matchup.pitcher(),
            o.pa,
            o.season
        );
    }
    out
}

pub fn read_obs_csv(text: &str, file: &str) -> Result<Vec<GameMatchupObservation>> {
    let mut obs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            if line.trim() != OBS_CSV_HEADER {
                return Err(Error::Parse {
                    file: file.to_string(),
                    line: 1,
                    msg: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(Error::Parse {
                file: file.to_string(),
                line: lineno + 1,
                msg: format!("expected 9 fields, got {}", f.len()),
            });
        }
        let err = |field: &str, val: &str| Error::Parse {
            file: file.to_string(),
            line: lineno + 1,
            msg: format!("bad {field} {val:?}"),
        };
        let bh: Hand = f[5].parse()?;
        let ph: Hand = f[6].parse()?;
        obs.push(GameMatchupObservation {
            game_id: f[0].to_string(),
            hrsum: f[1].parse().map_err(|_| err("hrsum", f[1]))?,
            zb: f[2].parse().map_err(|_| err("zB", f[2]))?,
            zp: f[3].parse().map_err(|_| err("zP", f[3]))?,
            park: f[4].to_string(),
            matchup: Matchup::new(bh, ph),
            pa: f[7].parse().map_err(|_| err("pa", f[7]))?,
            season: f[8].parse().map_err(|_| err("season", f[8]))?,
        });
    }
    Ok(obs)
}
