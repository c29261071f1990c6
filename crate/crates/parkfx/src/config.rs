//! Flat key=value pipeline configuration with printable defaults, so one
//! small text artifact captures every tolerance behind a set of outputs.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::covariates::{FallbackRatePolicy, StudyConfig};
use crate::error::{Error, Result};
use crate::glmm::FitOptions;
use crate::ingest::UnknownPlayerPolicy;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub event_dir: PathBuf,
    pub roster_dir: PathBuf,
    pub out_dir: PathBuf,
    pub division_map: Option<PathBuf>,
    pub study: StudyConfig,
    pub fit: FitOptions,
    pub unknown_players: UnknownPlayerPolicy,
    pub subset: String,
    pub cluster_gap: f64,
    pub bin_width: f64,
    pub min_bin_n: usize,
    pub seed: u64,
    pub sim_seasons: usize,
    pub sim_games_per_park_season: usize,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig {
            event_dir: PathBuf::from("events"),
            roster_dir: PathBuf::from("rosters"),
            out_dir: PathBuf::from("out"),
            division_map: None,
            study: StudyConfig::default(),
            fit: FitOptions::default(),
            unknown_players: UnknownPlayerPolicy::Strict,
            subset: "full".to_string(),
            cluster_gap: 0.085,
            bin_width: 0.2,
            min_bin_n: 30,
            seed: 20100401,
            sim_seasons: 13,
            sim_games_per_park_season: 81,
        }
    }
}

fn parse_seasons(value: &str) -> Result<BTreeSet<i32>> {
    let mut out = BTreeSet::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: i32 = lo.trim().parse().map_err(|_| bad_value("seasons", part))?;
            let hi: i32 = hi.trim().parse().map_err(|_| bad_value("seasons", part))?;
            if lo > hi {
                return Err(bad_value("seasons", part));
            }
            out.extend(lo..=hi);
        } else {
            out.insert(part.parse().map_err(|_| bad_value("seasons", part))?);
        }
    }
    Ok(out)
}

fn seasons_string(seasons: &BTreeSet<i32>) -> String {
    // compact back into ranges
    let mut parts: Vec<String> = Vec::new();
    let mut iter = seasons.iter().copied();
    let Some(mut start) = iter.next() else {
        return String::new();
    };
    let mut prev = start;
    let flush = |start: i32, prev: i32, parts: &mut Vec<String>| {
        if start == prev {
            parts.push(start.to_string());
        } else {
            parts.push(format!("{start}-{prev}"));
        }
    };
    for y in iter {
        if y != prev + 1 {
            flush(start, prev, &mut parts);
            start = y;
        }
        prev = y;
    }
    flush(start, prev, &mut parts);
    parts.join(",")
}

fn bad_value(key: &str, value: &str) -> Error {
    Error::InvalidConfig(format!("bad value for {key}: {value:?}"))
}

impl PipelineConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "event_dir" => self.event_dir = PathBuf::from(value),
            "roster_dir" => self.roster_dir = PathBuf::from(value),
            "out_dir" => self.out_dir = PathBuf::from(value),
            "division_map" => {
                self.division_map = (!value.is_empty()).then(|| PathBuf::from(value))
            }
            "seasons" => self.study.seasons = parse_seasons(value)?,
            "parks" => {
                self.study.parks = value
                    .split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(String::from)
                    .collect()
            }
            "fallback_rate_policy" => {
                self.study.fallback_rate_policy = match value {
                    "league" => FallbackRatePolicy::LeagueMatchupMean,
                    "zero" => FallbackRatePolicy::Zero,
                    _ => return Err(bad_value(key, value)),
                }
            }
            "min_elsewhere_pa" => {
                self.study.min_elsewhere_pa = value.parse().map_err(|_| bad_value(key, value))?
            }
            "tol" => self.fit.tol = value.parse().map_err(|_| bad_value(key, value))?,
            "max_iter" => self.fit.max_iter = value.parse().map_err(|_| bad_value(key, value))?,
            "ridge" => self.fit.ridge = value.parse().map_err(|_| bad_value(key, value))?,
            "unknown_players" => {
                self.unknown_players = match value {
                    "strict" => UnknownPlayerPolicy::Strict,
                    "skip" => UnknownPlayerPolicy::Skip,
                    _ => return Err(bad_value(key, value)),
                }
            }
            "subset" => {
                crate::glmm::ModelSpec::subset(value)?;
                self.subset = value.to_string();
            }
            "cluster_gap" => self.cluster_gap = value.parse().map_err(|_| bad_value(key, value))?,
            "bin_width" => self.bin_width = value.parse().map_err(|_| bad_value(key, value))?,
            "min_bin_n" => self.min_bin_n = value.parse().map_err(|_| bad_value(key, value))?,
            "seed" => self.seed = value.parse().map_err(|_| bad_value(key, value))?,
            "sim_seasons" => {
                self.sim_seasons = value.parse().map_err(|_| bad_value(key, value))?
            }
            "sim_games_per_park_season" => {
                self.sim_games_per_park_season =
                    value.parse().map_err(|_| bad_value(key, value))?
            }
            other => return Err(Error::InvalidConfig(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Parse `key=value` lines; `#` starts a comment, blank lines ignored.
    pub fn parse(text: &str, file: &str) -> Result<PipelineConfig> {
        let mut config = PipelineConfig::default();
        config.apply(text, file)?;
        Ok(config)
    }

    pub fn apply(&mut self, text: &str, file: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                file: file.to_string(),
                line: lineno + 1,
                msg: format!("expected key=value, got {line:?}"),
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| Error::Parse {
                file: file.to_string(),
                line: lineno + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path)?;
        PipelineConfig::parse(&text, &path.display().to_string())
    }

    /// Render every setting back out as parseable key=value text.
    pub fn print(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "event_dir = {}", self.event_dir.display());
        let _ = writeln!(out, "roster_dir = {}", self.roster_dir.display());
        let _ = writeln!(out, "out_dir = {}", self.out_dir.display());
        let _ = writeln!(
            out,
            "division_map = {}",
            self.division_map
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        );
        let _ = writeln!(out, "seasons = {}", seasons_string(&self.study.seasons));
        let parks: Vec<&str> = self.study.parks.iter().map(String::as_str).collect();
        let _ = writeln!(out, "parks = {}", parks.join(","));
        let _ = writeln!(
            out,
            "fallback_rate_policy = {}",
            match self.study.fallback_rate_policy {
                FallbackRatePolicy::LeagueMatchupMean => "league",
                FallbackRatePolicy::Zero => "zero",
            }
        );
        let _ = writeln!(out, "min_elsewhere_pa = {}", self.study.min_elsewhere_pa);
        let _ = writeln!(out, "tol = {:e}", self.fit.tol);
        let _ = writeln!(out, "max_iter = {}", self.fit.max_iter);
        let _ = writeln!(out, "ridge = {:e}", self.fit.ridge);
        let _ = writeln!(
            out,
            "unknown_players = {}",
            match self.unknown_players {
                UnknownPlayerPolicy::Strict => "strict",
                UnknownPlayerPolicy::Skip => "skip",
            }
        );
        let _ = writeln!(out, "subset = {}", self.subset);
        let _ = writeln!(out, "cluster_gap = {}", self.cluster_gap);
        let _ = writeln!(out, "bin_width = {}", self.bin_width);
        let _ = writeln!(out, "min_bin_n = {}", self.min_bin_n);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "sim_seasons = {}", self.sim_seasons);
        let _ = writeln!(
            out,
            "sim_games_per_park_season = {}",
            self.sim_games_per_park_season
        );
        out
    }
}
