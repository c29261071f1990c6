//! Handedness and matchup domain types.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A resolved batting or throwing hand. Switch hitters are resolved to the
/// hand they batted with before this type is constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Hand {
    L,
    R,
}

impl Hand {
    pub fn opposite(self) -> Hand {
        match self {
            Hand::L => Hand::R,
            Hand::R => Hand::L,
        }
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hand::L => write!(f, "L"),
            Hand::R => write!(f, "R"),
        }
    }
}

impl FromStr for Hand {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "L" => Ok(Hand::L),
            "R" => Ok(Hand::R),
            other => Err(Error::UnknownMatchup(other.to_string())),
        }
    }
}

/// Roster batting hand, which may be `B` for switch hitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bats {
    L,
    R,
    B,
}

impl FromStr for Bats {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "L" => Ok(Bats::L),
            "R" => Ok(Bats::R),
            "B" => Ok(Bats::B),
            other => Err(Error::UnknownMatchup(other.to_string())),
        }
    }
}

/// Batter-pitcher handedness combination, the grouping key for every
/// observation in the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Matchup {
    LL,
    LR,
    RL,
    RR,
}

impl Matchup {
    pub const ALL: [Matchup; 4] = [Matchup::LL, Matchup::LR, Matchup::RL, Matchup::RR];

    pub fn new(batter: Hand, pitcher: Hand) -> Matchup {
        match (batter, pitcher) {
            (Hand::L, Hand::L) => Matchup::LL,
            (Hand::L, Hand::R) => Matchup::LR,
            (Hand::R, Hand::L) => Matchup::RL,
            (Hand::R, Hand::R) => Matchup::RR,
        }
    }

    pub fn batter(self) -> Hand {
        match self {
            Matchup::LL | Matchup::LR => Hand::L,
            Matchup::RL | Matchup::RR => Hand::R,
        }
    }

    pub fn pitcher(self) -> Hand {
        match self {
            Matchup::LL | Matchup::RL => Hand::L,
            Matchup::LR | Matchup::RR => Hand::R,
        }
    }

    /// Stable index in `ALL` order: LL=0, LR=1, RL=2, RR=3.
    pub fn index(self) -> usize {
        match self {
            Matchup::LL => 0,
            Matchup::LR => 1,
            Matchup::RL => 2,
            Matchup::RR => 3,
        }
    }
}

impl fmt::Display for Matchup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.batter(), self.pitcher())
    }
}

impl FromStr for Matchup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "LL" => Ok(Matchup::LL),
            "LR" => Ok(Matchup::LR),
            "RL" => Ok(Matchup::RL),
            "RR" => Ok(Matchup::RR),
            other => Err(Error::UnknownMatchup(other.to_string())),
        }
    }
}
