//! The 30 canonical ballpark/team codes, the site-code lookup, and the
//! division map used by the ANOVA.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The 30 current ballparks, indexed by home-team code, in the canonical
/// (alphabetical) order used for design-matrix columns.
pub const PARKS: [&str; 30] = [
    "ANA", "ARI", "ATL", "BAL", "BOS", "CHA", "CHN", "CIN", "CLE", "COL", "DET", "HOU", "KCA",
    "LAN", "MIA", "MIL", "MIN", "NYA", "NYN", "OAK", "PHI", "PIT", "SDN", "SEA", "SFN", "SLN",
    "TBA", "TEX", "TOR", "WAS",
];

/// Retrosheet site codes for the current 30 parks, mapped to team codes.
/// Anything not listed here falls back to the game-id prefix.
const SITE_TO_PARK: [(&str, &str); 30] = [
    ("ANA01", "ANA"),
    ("ARL02", "TEX"),
    ("ARL03", "TEX"),
    ("ATL02", "ATL"),
    ("ATL03", "ATL"),
    ("BAL12", "BAL"),
    ("BOS07", "BOS"),
    ("CHI11", "CHN"),
    ("CHI12", "CHA"),
    ("CIN09", "CIN"),
    ("CLE08", "CLE"),
    ("DEN02", "COL"),
    ("DET05", "DET"),
    ("HOU03", "HOU"),
    ("KAN06", "KCA"),
    ("LOS03", "LAN"),
    ("MIA02", "MIA"),
    ("MIL06", "MIL"),
    ("MIN04", "MIN"),
    ("NYC20", "NYA"),
    ("NYC21", "NYN"),
    ("OAK01", "OAK"),
    ("PHI13", "PHI"),
    ("PHO01", "ARI"),
    ("PIT08", "PIT"),
    ("SAN02", "SDN"),
    ("SEA03", "SEA"),
    ("SFO03", "SFN"),
    ("STL10", "SLN"),
    ("WAS11", "WAS"),
];

pub fn is_canonical_park(code: &str) -> bool {
    PARKS.contains(&code)
}

pub fn park_index(code: &str) -> Option<usize> {
    PARKS.iter().position(|p| *p == code)
}

/// Resolve a park code from an `info,site` value, falling back to the
/// game-id prefix (the home-team code).
pub fn resolve_park(site: Option<&str>, game_id: &str) -> String {
    if let Some(site) = site {
        if let Some((_, park)) = SITE_TO_PARK.iter().find(|(s, _)| *s == site) {
            return (*park).to_string();
        }
    }
    game_id.chars().take(3).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Division {
    NlWest,
    NlCentral,
    NlEast,
    AlWest,
    AlCentral,
    AlEast,
}

impl Division {
    pub const ALL: [Division; 6] = [
        Division::NlWest,
        Division::NlCentral,
        Division::NlEast,
        Division::AlWest,
        Division::AlCentral,
        Division::AlEast,
    ];
}

impl fmt::Display for Division {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Division::NlWest => "NL-West",
            Division::NlCentral => "NL-Central",
            Division::NlEast => "NL-East",
            Division::AlWest => "AL-West",
            Division::AlCentral => "AL-Central",
            Division::AlEast => "AL-East",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Division {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "NL-West" => Ok(Division::NlWest),
            "NL-Central" => Ok(Division::NlCentral),
            "NL-East" => Ok(Division::NlEast),
            "AL-West" => Ok(Division::AlWest),
            "AL-Central" => Ok(Division::AlCentral),
            "AL-East" => Ok(Division::AlEast),
            other => Err(Error::InvalidConfig(format!("unknown division {other}"))),
        }
    }
}

/// Park code to MLB division, exactly 30 parks with 5 per division.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisionMap {
    map: BTreeMap<String, Division>,
}

impl DivisionMap {
    /// The 2010-2023 analysis frame (Houston counted in the AL West, the
    /// Angels under their ANA park code).
    pub fn standard() -> DivisionMap {
        let table: [(&str, Division); 30] = [
            ("ARI", Division::NlWest),
            ("COL", Division::NlWest),
            ("LAN", Division::NlWest),
            ("SDN", Division::NlWest),
            ("SFN", Division::NlWest),
            ("CHN", Division::NlCentral),
            ("CIN", Division::NlCentral),
            ("MIL", Division::NlCentral),
            ("PIT", Division::NlCentral),
            ("SLN", Division::NlCentral),
            ("ATL", Division::NlEast),
            ("MIA", Division::NlEast),
            ("NYN", Division::NlEast),
            ("PHI", Division::NlEast),
            ("WAS", Division::NlEast),
            ("HOU", Division::AlWest),
            ("ANA", Division::AlWest),
            ("OAK", Division::AlWest),
            ("SEA", Division::AlWest),
            ("TEX", Division::AlWest),
            ("DET", Division::AlCentral),
            ("CHA", Division::AlCentral),
            ("CLE", Division::AlCentral),
            ("KCA", Division::AlCentral),
            ("MIN", Division::AlCentral),
            ("BAL", Division::AlEast),
            ("BOS", Division::AlEast),
            ("NYA", Division::AlEast),
            ("TBA", Division::AlEast),
            ("TOR", Division::AlEast),
        ];
        DivisionMap {
            map: table
                .iter()
                .map(|(p, d)| ((*p).to_string(), *d))
                .collect(),
        }
    }

    /// Build from explicit assignments, enforcing 30 parks and 5 per division.
    pub fn new(assignments: BTreeMap<String, Division>) -> Result<DivisionMap> {
        if assignments.len() != 30 {
            return Err(Error::InvalidConfig(format!(
                "division map must cover exactly 30 parks, got {}",
                assignments.len()
            )));
        }
        for d in Division::ALL {
            let n = assignments.values().filter(|v| **v == d).count();
            if n != 5 {
                return Err(Error::InvalidConfig(format!(
                    "division {d} has {n} parks, expected 5"
                )));
            }
        }
        Ok(DivisionMap { map: assignments })
    }

    /// Load a `park,division` CSV (no header).
    pub fn from_file(path: &Path) -> Result<DivisionMap> {
        let text = std::fs::read_to_string(path)?;
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',');
            let park = parts.next().unwrap_or("").trim().to_string();
            let div = parts
                .next()
                .ok_or_else(|| Error::Parse {
                    file: path.display().to_string(),
                    line: lineno + 1,
                    msg: "expected park,division".to_string(),
                })?
                .trim()
                .parse::<Division>()?;
            map.insert(park, div);
        }
        DivisionMap::new(map)
    }

    pub fn division_of(&self, park: &str) -> Option<Division> {
        self.map.get(park).copied()
    }

    pub fn parks(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|s| s.as_str())
    }
}
