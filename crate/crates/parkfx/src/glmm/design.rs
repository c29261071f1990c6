//! Design construction for the Poisson log-linear model: intercept,
//! personnel slopes, park-by-matchup indicators with a pinned reference
//! cell, and season effects (random, sum-to-zero fixed, or omitted).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::covariates::GameMatchupObservation;
use crate::error::{Error, Result};
use crate::matchup::Matchup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeasonMode {
    Random,
    Fixed,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub include_zb: bool,
    pub include_zp: bool,
    pub include_park_matchup: bool,
    pub season_mode: SeasonMode,
    pub reference_cell: (String, Matchup),
}

impl ModelSpec {
    /// The full model: personnel slopes, 120 park-matchup effects with the
    /// Washington RR cell pinned to zero, and random season effects.
    pub fn full() -> ModelSpec {
        ModelSpec {
            include_zb: true,
            include_zp: true,
            include_park_matchup: true,
            season_mode: SeasonMode::Random,
            reference_cell: ("WAS".to_string(), Matchup::RR),
        }
    }

    /// The subset-model menu used in the model-comparison table.
    pub fn subset(name: &str) -> Result<ModelSpec> {
        let full = ModelSpec::full();
        match name {
            "full" => Ok(full),
            "park,season" => Ok(ModelSpec {
                include_zb: false,
                include_zp: false,
                ..full
            }),
            "personnel,season" => Ok(ModelSpec {
                include_park_matchup: false,
                ..full
            }),
            "zb,season" => Ok(ModelSpec {
                include_zp: false,
                include_park_matchup: false,
                ..full
            }),
            "zp,season" => Ok(ModelSpec {
                include_zb: false,
                include_park_matchup: false,
                ..full
            }),
            other => Err(Error::InvalidConfig(format!("unknown subset model {other:?}"))),
        }
    }
}

/// Sparse per-observation design row. Every row has an intercept, at most
/// one park-matchup indicator, and one season index.
#[derive(Debug, Clone, Copy)]
pub struct DesignRow {
    pub zb: f64,
    pub zp: f64,
    /// Index into `Design::pm_cells`; `None` for the reference cell or when
    /// park-matchup effects are excluded.
    pub pm: Option<usize>,
    pub season: usize,
}

#[derive(Debug, Clone)]
pub struct Design {
    pub spec: ModelSpec,
    pub rows: Vec<DesignRow>,
    pub y: Vec<f64>,
    pub parks: Vec<String>,
    pub seasons: Vec<i32>,
    /// Observed non-reference park-matchup cells, in (park, matchup) order.
    pub pm_cells: Vec<(String, Matchup)>,
}

/// Deterministic column ordering of the fixed effects, reported so that
/// serialized covariance matrices can be interpreted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionReport {
    pub n_obs: usize,
    pub n_fixed: usize,
    pub n_random: usize,
    pub fixed_names: Vec<String>,
}

impl Design {
    pub fn n_obs(&self) -> usize {
        self.rows.len()
    }

    pub fn zb_col(&self) -> Option<usize> {
        self.spec.include_zb.then_some(1)
    }

    pub fn zp_col(&self) -> Option<usize> {
        self.spec
            .include_zp
            .then(|| 1 + usize::from(self.spec.include_zb))
    }

    pub fn pm_offset(&self) -> usize {
        1 + usize::from(self.spec.include_zb) + usize::from(self.spec.include_zp)
    }

    pub fn pm_col(&self, park: &str, matchup: Matchup) -> Option<usize> {
        self.pm_cells
            .iter()
            .position(|(p, m)| p == park && *m == matchup)
            .map(|i| self.pm_offset() + i)
    }

    /// Offset of the sum-to-zero season contrast block (fixed-season mode).
    pub fn season_fixed_offset(&self) -> usize {
        self.pm_offset() + self.pm_cells.len()
    }

    pub fn n_fixed(&self) -> usize {
        let mut p = self.pm_offset() + self.pm_cells.len();
        if self.spec.season_mode == SeasonMode::Fixed {
            p += self.seasons.len().saturating_sub(1);
        }
        p
    }

    pub fn n_random(&self) -> usize {
        match self.spec.season_mode {
            SeasonMode::Random => self.seasons.len(),
            _ => 0,
        }
    }

    /// Nonzero fixed-effect entries of row `i`, appended to `buf`.
    pub fn fixed_entries(&self, i: usize, buf: &mut Vec<(usize, f64)>) {
        let row = &self.rows[i];
        buf.push((0, 1.0));
        if let Some(c) = self.zb_col() {
            buf.push((c, row.zb));
        }
        if let Some(c) = self.zp_col() {
            buf.push((c, row.zp));
        }
        if let Some(pm) = row.pm {
            buf.push((self.pm_offset() + pm, 1.0));
        }
        if self.spec.season_mode == SeasonMode::Fixed {
            let off = self.season_fixed_offset();
            let q = self.seasons.len();
            if row.season + 1 < q {
                buf.push((off + row.season, 1.0));
            } else {
                // last season carries -1 in every contrast column
                for c in 0..q - 1 {
                    buf.push((off + c, -1.0));
                }
            }
        }
    }

    pub fn report(&self) -> DimensionReport {
        DimensionReport {
            n_obs: self.n_obs(),
            n_fixed: self.n_fixed(),
            n_random: self.n_random(),
            fixed_names: self.fixed_names(),
        }
    }

    pub fn fixed_names(&self) -> Vec<String> {
        let mut names = vec!["intercept".to_string()];
        if self.spec.include_zb {
            names.push("zB".to_string());
        }
        if self.spec.include_zp {
            names.push("zP".to_string());
        }
        for (park, m) in &self.pm_cells {
            names.push(format!("{park}:{m}"));
        }
        if self.spec.season_mode == SeasonMode::Fixed {
            for s in &self.seasons[..self.seasons.len() - 1] {
                names.push(format!("season:{s}"));
            }
        }
        names
    }
}

/// Build the design for a set of observations. The park and season domains
/// are the sorted distinct values observed; park-matchup columns exist for
/// every observed cell except the reference, which is pinned to zero.
pub fn build_design(observations: &[GameMatchupObservation], spec: &ModelSpec) -> Result<Design> {
    if observations.is_empty() {
        return Err(Error::Degenerate("no observations".to_string()));
    }
    let mut parks: BTreeSet<&str> = BTreeSet::new();
    let mut seasons: BTreeSet<i32> = BTreeSet::new();
    for o in observations {
        if o.park.is_empty() {
            return Err(Error::UnknownPark(String::from("<empty>")));
        }
        if o.season < 1871 || o.season > 2100 {
            return Err(Error::UnknownSeason(o.season));
        }
        parks.insert(&o.park);
        seasons.insert(o.season);
    }
    let parks: Vec<String> = parks.into_iter().map(String::from).collect();
    let seasons: Vec<i32> = seasons.into_iter().collect();

    let mut pm_cells = Vec::new();
    if spec.include_park_matchup {
        if !parks.iter().any(|p| *p == spec.reference_cell.0) {
            return Err(Error::UnknownPark(spec.reference_cell.0.clone()));
        }
        let mut observed: BTreeSet<(String, Matchup)> = BTreeSet::new();
        for o in observations {
            observed.insert((o.park.clone(), o.matchup));
        }
        for park in &parks {
            for m in Matchup::ALL {
                if (park.as_str(), m) == (spec.reference_cell.0.as_str(), spec.reference_cell.1) {
                    continue;
                }
                if observed.contains(&(park.clone(), m)) {
                    pm_cells.push((park.clone(), m));
                }
            }
        }
    }

    let design = Design {
        spec: spec.clone(),
        rows: Vec::with_capacity(observations.len()),
        y: Vec::with_capacity(observations.len()),
        parks,
        seasons,
        pm_cells,
    };
    let mut design = design;
    for o in observations {
        let pm = if spec.include_park_matchup {
            design
                .pm_cells
                .iter()
                .position(|(p, m)| *p == o.park && *m == o.matchup)
        } else {
            None
        };
        let season = design
            .seasons
            .binary_search(&o.season)
            .map_err(|_| Error::UnknownSeason(o.season))?;
        design.rows.push(DesignRow {
            zb: o.zb,
            zp: o.zp,
            pm,
            season,
        });
        design.y.push(o.hrsum as f64);
    }
    Ok(design)
}
