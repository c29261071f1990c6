//! Retrosheet-style event and roster file parsing.
//!
//! Only plate-appearance boundaries and home-run detection are modeled;
//! baserunner advancement, fielding credits and pitch strings are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matchup::{Bats, Hand, Matchup};
use crate::parks::resolve_park;

/// One batter-pitcher event with resolved handedness.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlateAppearance {
    pub game_id: String,
    pub season: i32,
    pub park: String,
    pub batter_id: String,
    pub pitcher_id: String,
    pub batter_hand: Hand,
    pub pitcher_hand: Hand,
    pub is_home_run: bool,
    /// Order of this plate appearance within its game, starting at 1.
    pub event_seq: u32,
}

impl PlateAppearance {
    pub fn matchup(&self) -> Matchup {
        Matchup::new(self.batter_hand, self.pitcher_hand)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RosterEntry {
    pub player_id: String,
    pub bats: Bats,
    /// `Bats::B` here means an ambidextrous pitcher; resolving his hand for
    /// a matchup requires a `padj` record.
    pub throws: Bats,
    pub team: String,
    pub season: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameHeader {
    pub game_id: String,
    pub site: String,
    pub date: String,
    pub home_team: String,
    pub visiting_team: String,
}

/// What to do when a play references a player missing from the rosters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum UnknownPlayerPolicy {
    /// Fail the parse naming the id.
    #[default]
    Strict,
    /// Drop the plate appearance and count it.
    Skip,
}

/// Event codes whose play records do not complete a plate appearance.
const NO_PA_EVENTS: [&str; 10] = ["NP", "BK", "CS", "DI", "OA", "PB", "PO", "POCS", "SB", "WP"];

#[derive(Debug, Default)]
pub struct RosterSet {
    by_id: HashMap<String, RosterEntry>,
}

impl RosterSet {
    pub fn new() -> RosterSet {
        RosterSet::default()
    }

    pub fn insert(&mut self, entry: RosterEntry) {
        self.by_id.insert(entry.player_id.clone(), entry);
    }

    pub fn get(&self, player_id: &str) -> Option<&RosterEntry> {
        self.by_id.get(player_id)
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    /// Parse a `.ROS` file: `id,last,first,bats,throws[,team[,pos]]`.
    pub fn add_roster_file(&mut self, text: &str, file: &str, season: i32) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() < 5 {
                return Err(Error::Parse {
                    file: file.to_string(),
                    line: lineno + 1,
                    msg: format!("roster line has {} fields, expected at least 5", fields.len()),
                });
            }
            let bats = Bats::from_str(fields[3].trim()).map_err(|_| Error::Parse {
                file: file.to_string(),
                line: lineno + 1,
                msg: format!("bad bats code {:?}", fields[3]),
            })?;
            let throws = Bats::from_str(fields[4].trim()).map_err(|_| Error::Parse {
                file: file.to_string(),
                line: lineno + 1,
                msg: format!("bad throws code {:?}", fields[4]),
            })?;
            self.insert(RosterEntry {
                player_id: fields[0].trim().to_string(),
                bats,
                throws,
                team: fields.get(5).map(|s| s.trim().to_string()).unwrap_or_default(),
                season,
            });
        }
        Ok(())
    }
}

/// Result of parsing one event file.
#[derive(Debug, Default)]
pub struct ParseOutput {
    pub games: Vec<(GameHeader, Vec<PlateAppearance>)>,
    /// Plate appearances dropped under [`UnknownPlayerPolicy::Skip`].
    pub skipped: usize,
}

struct GameState {
    game_id: String,
    site: Option<String>,
    date: Option<String>,
    home_team: String,
    visiting_team: String,
    /// Current pitcher for each fielding side, indexed by team code 0/1.
    pitchers: [Option<String>; 2],
    pas: Vec<PlateAppearance>,
    seq: u32,
    badj: HashMap<String, Hand>,
    padj: HashMap<String, Hand>,
}

impl GameState {
    fn new(game_id: String) -> GameState {
        GameState {
            game_id,
            site: None,
            date: None,
            home_team: String::new(),
            visiting_team: String::new(),
            pitchers: [None, None],
            pas: Vec::new(),
            seq: 0,
            badj: HashMap::new(),
            padj: HashMap::new(),
        }
    }

    fn season(&self) -> i32 {
        if let Some(date) = &self.date {
            if let Ok(y) = date[..4.min(date.len())].parse() {
                return y;
            }
        }
        // game ids look like COL202104010: team code then yyyymmdd then game number
        self.game_id
            .get(3..7)
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    }

    fn finish(mut self) -> Result<(GameHeader, Vec<PlateAppearance>)> {
        let header = GameHeader {
            game_id: self.game_id.clone(),
            site: self.site.clone().unwrap_or_default(),
            date: self.date.clone().unwrap_or_default(),
            home_team: self.home_team.clone(),
            visiting_team: self.visiting_team.clone(),
        };
        if !header.date.is_empty() {
            let compact: String = header.date.chars().filter(|c| c.is_ascii_digit()).collect();
            let from_id = self.game_id.get(3..11).unwrap_or("");
            if compact.len() == 8 && !from_id.is_empty() && compact != from_id {
                return Err(Error::Degenerate(format!(
                    "game id {} disagrees with info,date {}",
                    self.game_id, header.date
                )));
            }
        }
        let park = resolve_park(self.site.as_deref(), &self.game_id);
        let season = self.season();
        for pa in &mut self.pas {
            pa.park = park.clone();
            pa.season = season;
        }
        Ok((header, self.pas))
    }
}

/// Extract the primary event token: everything before the first `/` or `.`.
fn primary_event(event: &str) -> &str {
    let end = event
        .find(|c| c == '/' || c == '.')
        .unwrap_or(event.len());
    &event[..end]
}

/// Leading run of uppercase letters, used to classify the event code.
fn event_code(primary: &str) -> &str {
    let end = primary
        .find(|c: char| !c.is_ascii_uppercase())
        .unwrap_or(primary.len());
    &primary[..end]
}

fn completes_pa(event: &str) -> bool {
    !NO_PA_EVENTS.contains(&event_code(primary_event(event)))
}

/// A home run is `HR` or bare `H`, optionally followed by fielder digits.
fn is_home_run(event: &str) -> bool {
    let prim = primary_event(event);
    for prefix in ["HR", "H"] {
        if let Some(rest) = prim.strip_prefix(prefix) {
            if rest.chars().all(|c| c.is_ascii_digit()) {
                return true;
            }
        }
    }
    false
}

/// Parse one Retrosheet event file against a roster set.
///
/// Each `id` record opens a game; `play` records that complete a plate
/// appearance emit one [`PlateAppearance`]. Handedness comes from the
/// rosters (switch hitters bat opposite the pitcher's hand) unless
/// overridden by a preceding `badj`/`padj` record.
pub fn parse_event_file(
    text: &str,
    rosters: &RosterSet,
    policy: UnknownPlayerPolicy,
    file: &str,
) -> Result<ParseOutput> {
    let mut out = ParseOutput::default();
    let mut game: Option<GameState> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        let parse_err = |msg: String| Error::Parse {
            file: file.to_string(),
            line: lineno,
            msg,
        };
        let fields: Vec<&str> = line.split(',').collect();
        match fields[0] {
            "id" => {
                if let Some(g) = game.take() {
                    out.games.push(g.finish()?);
                }
                let gid = fields
                    .get(1)
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| parse_err("id record missing game id".to_string()))?;
                game = Some(GameState::new(gid.to_string()));
            }
            "version" | "com" | "data" => {}
            "info" => {
                let g = game
                    .as_mut()
                    .ok_or_else(|| parse_err("info record before id".to_string()))?;
                match (fields.get(1).copied(), fields.get(2).copied()) {
                    (Some("site"), Some(v)) => g.site = Some(v.to_string()),
                    (Some("date"), Some(v)) => g.date = Some(v.to_string()),
                    (Some("hometeam"), Some(v)) => g.home_team = v.to_string(),
                    (Some("visteam"), Some(v)) => g.visiting_team = v.to_string(),
                    _ => {}
                }
            }
            "start" | "sub" => {
                let g = game
                    .as_mut()
                    .ok_or_else(|| parse_err("lineup record before id".to_string()))?;
                if fields.len() < 6 {
                    return Err(parse_err(format!(
                        "{} record has {} fields, expected 6",
                        fields[0],
                        fields.len()
                    )));
                }
                let team: usize = fields[3]
                    .parse()
                    .map_err(|_| parse_err(format!("bad team flag {:?}", fields[3])))?;
                if team > 1 {
                    return Err(parse_err(format!("team flag must be 0 or 1, got {team}")));
                }
                let fieldpos = fields[5].trim_matches('"');
                if fieldpos == "1" {
                    g.pitchers[team] = Some(fields[1].to_string());
                }
            }
            "badj" => {
                let g = game
                    .as_mut()
                    .ok_or_else(|| parse_err("badj record before id".to_string()))?;
                let player = fields
                    .get(1)
                    .ok_or_else(|| parse_err("badj missing player".to_string()))?;
                let hand = fields
                    .get(2)
                    .and_then(|h| Hand::from_str(h).ok())
                    .ok_or_else(|| parse_err("badj missing or bad hand".to_string()))?;
                g.badj.insert(player.to_string(), hand);
            }
            "padj" => {
                let g = game
                    .as_mut()
                    .ok_or_else(|| parse_err("padj record before id".to_string()))?;
                let player = fields
                    .get(1)
                    .ok_or_else(|| parse_err("padj missing player".to_string()))?;
                let hand = fields
                    .get(2)
                    .and_then(|h| Hand::from_str(h).ok())
                    .ok_or_else(|| parse_err("padj missing or bad hand".to_string()))?;
                g.padj.insert(player.to_string(), hand);
            }
            "play" => {
                let g = game
                    .as_mut()
                    .ok_or_else(|| parse_err("play record before id".to_string()))?;
                if fields.len() < 7 {
                    return Err(parse_err(format!(
                        "play record has {} fields, expected 7",
                        fields.len()
                    )));
                }
                let batting_team: usize = fields[2]
                    .parse()
                    .map_err(|_| parse_err(format!("bad team flag {:?}", fields[2])))?;
                if batting_team > 1 {
                    return Err(parse_err(format!(
                        "team flag must be 0 or 1, got {batting_team}"
                    )));
                }
                let batter_id = fields[3].to_string();
                let event = fields[6];
                if event.is_empty() {
                    return Err(parse_err("empty event".to_string()));
                }
                if !completes_pa(event) {
                    continue;
                }
                let pitcher_id = match &g.pitchers[1 - batting_team] {
                    Some(p) => p.clone(),
                    None => {
                        return Err(parse_err(format!(
                            "no pitcher on record for team {}",
                            1 - batting_team
                        )))
                    }
                };

                // Pitcher hand first; a switch hitter bats opposite to it.
                let pitcher_hand = match g.padj.get(&pitcher_id) {
                    Some(h) => *h,
                    None => match rosters.get(&pitcher_id) {
                        Some(e) => match e.throws {
                            Bats::L => Hand::L,
                            Bats::R => Hand::R,
                            Bats::B => {
                                return Err(Error::UnresolvedPitcherHand(pitcher_id));
                            }
                        },
                        None => match policy {
                            UnknownPlayerPolicy::Strict => {
                                return Err(Error::UnknownPlayer(pitcher_id))
                            }
                            UnknownPlayerPolicy::Skip => {
                                out.skipped += 1;
                                continue;
                            }
                        },
                    },
                };
                let batter_hand = match g.badj.get(&batter_id) {
                    Some(h) => *h,
                    None => match rosters.get(&batter_id) {
                        Some(e) => match e.bats {
                            Bats::L => Hand::L,
                            Bats::R => Hand::R,
                            Bats::B => pitcher_hand.opposite(),
                        },
                        None => match policy {
                            UnknownPlayerPolicy::Strict => {
                                return Err(Error::UnknownPlayer(batter_id))
                            }
                            UnknownPlayerPolicy::Skip => {
                                out.skipped += 1;
                                continue;
                            }
                        },
                    },
                };

                g.seq += 1;
                g.pas.push(PlateAppearance {
                    game_id: g.game_id.clone(),
                    season: 0,    // filled in by finish()
                    park: String::new(),
                    batter_id: batter_id.clone(),
                    pitcher_id: pitcher_id.clone(),
                    batter_hand,
                    pitcher_hand,
                    is_home_run: is_home_run(event),
                    event_seq: g.seq,
                });
                // Hand adjustments apply to the plate appearance they precede.
                g.badj.remove(&batter_id);
                g.padj.remove(&pitcher_id);
            }
            other => {
                return Err(parse_err(format!("unknown record keyword {other:?}")));
            }
        }
    }
    if let Some(g) = game.take() {
        out.games.push(g.finish()?);
    }
    Ok(out)
}

/// Which seasons and parks belong to the study window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StudyWindow {
    pub seasons: Vec<i32>,
    pub parks: Vec<String>,
}

impl StudyWindow {
    /// The 2010-2023 window minus the partial 2020 season, over the 30
    /// canonical parks.
    pub fn standard() -> StudyWindow {
        StudyWindow {
            seasons: (2010..=2023).filter(|y| *y != 2020).collect(),
            parks: crate::parks::PARKS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Drop plate appearances outside the study window, preserving order.
pub fn filter_study_window(
    pas: impl IntoIterator<Item = PlateAppearance>,
    window: &StudyWindow,
) -> Vec<PlateAppearance> {
    pas.into_iter()
        .filter(|pa| window.seasons.contains(&pa.season) && window.parks.contains(&pa.park))
        .collect()
}

pub const PA_CSV_HEADER: &str = "game_id,season,park,batter_id,pitcher_id,bh,ph,hr,seq";

pub fn write_pa_csv(pas: &[PlateAppearance]) -> String {
    let mut out = String::from(PA_CSV_HEADER);
    out.push('\n');
    for pa in pas {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            pa.game_id,
            pa.season,
            pa.park,
            pa.batter_id,
            pa.pitcher_id,
            pa.batter_hand,
            pa.pitcher_hand,
            u8::from(pa.is_home_run),
            pa.event_seq
        );
    }
    out
}

pub fn read_pa_csv(text: &str, file: &str) -> Result<Vec<PlateAppearance>> {
    let mut pas = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            if line.trim() != PA_CSV_HEADER {
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
        let err = |msg: String| Error::Parse {
            file: file.to_string(),
            line: lineno + 1,
            msg,
        };
        pas.push(PlateAppearance {
            game_id: f[0].to_string(),
            season: f[1].parse().map_err(|_| err(format!("bad season {:?}", f[1])))?,
            park: f[2].to_string(),
            batter_id: f[3].to_string(),
            pitcher_id: f[4].to_string(),
            batter_hand: Hand::from_str(f[5])?,
            pitcher_hand: Hand::from_str(f[6])?,
            is_home_run: match f[7] {
                "0" => false,
                "1" => true,
                other => return Err(err(format!("bad hr flag {other:?}"))),
            },
            event_seq: f[8].parse().map_err(|_| err(format!("bad seq {:?}", f[8])))?,
        });
    }
    Ok(pas)
}

/// Parse every `.EV*` file in a directory against every `.ROS` file there.
pub fn parse_directory(
    event_dir: &Path,
    roster_dir: &Path,
    policy: UnknownPlayerPolicy,
) -> Result<ParseOutput> {
    let mut rosters = RosterSet::new();
    let mut roster_files: Vec<_> = std::fs::read_dir(roster_dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.extension()
                .map(|e| e.eq_ignore_ascii_case("ros"))
                .unwrap_or(false)
        })
        .collect();
    roster_files.sort();
    for path in &roster_files {
        let season = roster_season_from_name(path);
        let text = std::fs::read_to_string(path)?;
        rosters.add_roster_file(&text, &path.display().to_string(), season)?;
    }

    let mut event_files: Vec<_> = std::fs::read_dir(event_dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.extension()
                .map(|e| {
                    let e = e.to_string_lossy().to_ascii_uppercase();
                    e == "EVN" || e == "EVA" || e == "EVE"
                })
                .unwrap_or(false)
        })
        .collect();
    event_files.sort();
    let mut out = ParseOutput::default();
    for path in &event_files {
        let text = std::fs::read_to_string(path)?;
        let part = parse_event_file(&text, &rosters, policy, &path.display().to_string())?;
        out.games.extend(part.games);
        out.skipped += part.skipped;
    }
    Ok(out)
}

/// Roster files are conventionally named `TTTYYYY.ROS`.
fn roster_season_from_name(path: &Path) -> i32 {
    path.file_stem()
        .and_then(|s| s.to_str())
        .and_then(|s| {
            let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
            digits.get(digits.len().saturating_sub(4)..)?.parse().ok()
        })
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roster() -> RosterSet {
        let mut r = RosterSet::new();
        r.add_roster_file(
            "storr001,Story,Trevor,R,R,COL,6\n\
             kersc001,Kershaw,Clayton,L,L,LAN,1\n\
             switb001,Switch,Bob,B,R,COL,8\n\
             ventp001,Venditte,Pat,B,B,OAK,1\n",
            "TEST2021.ROS",
            2021,
        )
        .unwrap();
        r
    }

    const SIMPLE_GAME: &str = "id,COL202104010\n\
        version,2\n\
        info,site,DEN02\n\
        info,date,2021/04/01\n\
        info,hometeam,COL\n\
        info,visteam,LAN\n\
        start,kersc001,\"Clayton Kershaw\",0,9,1\n\
        start,storr001,\"Trevor Story\",1,1,6\n\
        start,switb001,\"Bob Switch\",1,2,8\n\
        play,1,1,storr001,12,CBX,HR/F\n";

    #[test]
    fn single_hr_play_builds_rl_pa() {
        let out = parse_event_file(SIMPLE_GAME, &roster(), UnknownPlayerPolicy::Strict, "t").unwrap();
        assert_eq!(out.games.len(), 1);
        let (header, pas) = &out.games[0];
        assert_eq!(header.game_id, "COL202104010");
        assert_eq!(pas.len(), 1);
        let pa = &pas[0];
        assert_eq!(pa.matchup(), Matchup::RL);
        assert!(pa.is_home_run);
        assert_eq!(pa.park, "COL");
        assert_eq!(pa.season, 2021);
    }

    #[test]
    fn strikeout_is_pa_without_hr() {
        let text = SIMPLE_GAME.replace("HR/F", "K");
        let out = parse_event_file(&text, &roster(), UnknownPlayerPolicy::Strict, "t").unwrap();
        let pa = &out.games[0].1[0];
        assert!(!pa.is_home_run);
    }

    #[test]
    fn stolen_base_emits_no_pa() {
        let text = SIMPLE_GAME.replace("HR/F", "SB2");
        let out = parse_event_file(&text, &roster(), UnknownPlayerPolicy::Strict, "t").unwrap();
        assert!(out.games[0].1.is_empty());
    }

    #[test]
    fn event_token_classification() {
        assert!(!completes_pa("SB2;SB3"));
        assert!(!completes_pa("POCS2(1E3)"));
        assert!(!completes_pa("WP.1-2"));
        assert!(!completes_pa("NP"));
        assert!(completes_pa("K+SB2"));
        assert!(completes_pa("S8/G"));
        assert!(completes_pa("E4/TH"));
        assert!(completes_pa("FC5"));
        assert!(is_home_run("HR/F.3-H;1-H"));
        assert!(is_home_run("HR9/F"));
        assert!(is_home_run("H/L"));
        assert!(is_home_run("H7"));
        assert!(!is_home_run("HP"));
        assert!(!is_home_run("S8"));
        assert!(!is_home_run("K"));
    }

    #[test]
    fn switch_hitter_takes_opposite_of_pitcher() {
        let text = SIMPLE_GAME.replace(
            "play,1,1,storr001,12,CBX,HR/F",
            "play,1,1,switb001,00,X,S8/G",
        );
        let out = parse_event_file(&text, &roster(), UnknownPlayerPolicy::Strict, "t").unwrap();
        // pitcher kersc001 throws L, so the switch hitter bats R
        assert_eq!(out.games[0].1[0].matchup(), Matchup::RL);
    }

    #[test]
    fn badj_overrides_roster() {
        let text = SIMPLE_GAME.replace(
            "play,1,1,storr001,12,CBX,HR/F",
            "badj,switb001,L\nplay,1,1,switb001,00,X,S8/G",
        );
        let out = parse_event_file(&text, &roster(), UnknownPlayerPolicy::Strict, "t").unwrap();
        assert_eq!(out.games[0].1[0].matchup(), Matchup::LL);
    }

    #[test]
    fn ambidextrous_pitcher_without_padj_errors() {
        let text = SIMPLE_GAME
            .replace("start,kersc001,\"Clayton Kershaw\",0,9,1", "start,ventp001,\"Pat Venditte\",0,9,1");
        let err = parse_event_file(&text, &roster(), UnknownPlayerPolicy::Strict, "t").unwrap_err();
        assert!(matches!(err, Error::UnresolvedPitcherHand(_)));
        let with_padj = text.replace(
            "play,1,1,storr001",
            "padj,ventp001,R\nplay,1,1,storr001",
        );
        let out =
            parse_event_file(&with_padj, &roster(), UnknownPlayerPolicy::Strict, "t").unwrap();
        assert_eq!(out.games[0].1[0].matchup(), Matchup::RR);
    }

    #[test]
    fn unknown_player_policies() {
        let text = SIMPLE_GAME.replace("storr001", "nobody01");
        let err = parse_event_file(&text, &roster(), UnknownPlayerPolicy::Strict, "t").unwrap_err();
        match err {
            Error::UnknownPlayer(id) => assert_eq!(id, "nobody01"),
            other => panic!("unexpected error {other}"),
        }
        let out = parse_event_file(&text, &roster(), UnknownPlayerPolicy::Skip, "t").unwrap();
        assert!(out.games[0].1.is_empty());
        assert_eq!(out.skipped, 1);
    }

    #[test]
    fn malformed_record_names_line() {
        let text = "id,COL202104010\nbogus,stuff\n";
        let err = parse_event_file(text, &roster(), UnknownPlayerPolicy::Strict, "f.EVN").unwrap_err();
        match err {
            Error::Parse { file, line, .. } => {
                assert_eq!(file, "f.EVN");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn study_window_filter() {
        let mk = |season, park: &str| PlateAppearance {
            game_id: format!("{park}{season}04010"),
            season,
            park: park.to_string(),
            batter_id: "b".into(),
            pitcher_id: "p".into(),
            batter_hand: Hand::L,
            pitcher_hand: Hand::R,
            is_home_run: false,
            event_seq: 1,
        };
        let window = StudyWindow::standard();
        let kept = filter_study_window(
            vec![mk(2020, "COL"), mk(2021, "COL"), mk(2011, "FLO"), mk(2019, "NYA")],
            &window,
        );
        let parks: Vec<&str> = kept.iter().map(|p| p.park.as_str()).collect();
        assert_eq!(parks, vec!["COL", "NYA"]);
        assert!(filter_study_window(vec![], &window).is_empty());
    }

    #[test]
    fn pa_csv_round_trip() {
        let out =
            parse_event_file(SIMPLE_GAME, &roster(), UnknownPlayerPolicy::Strict, "t").unwrap();
        let pas: Vec<PlateAppearance> = out.games.into_iter().flat_map(|(_, p)| p).collect();
        let csv = write_pa_csv(&pas);
        let back = read_pa_csv(&csv, "t.csv").unwrap();
        assert_eq!(pas, back);
    }
}
