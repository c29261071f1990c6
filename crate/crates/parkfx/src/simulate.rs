//! Synthetic-corpus generator for estimator recovery: draw game-matchup
//! observations from the model with known parameters and compare refitted
//! estimates against the truth.
//!
//! RNG is ChaCha8 (counter-based): each (season, park) shard gets its own
//! stream derived from the master seed, so generation order never affects
//! the draws and shards could be produced independently.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Poisson};
use serde::{Deserialize, Serialize};

use crate::covariates::GameMatchupObservation;
use crate::error::{Error, Result};
use crate::glmm::FittedModel;
use crate::matchup::Matchup;

/// Per-matchup covariate generator: mean plate appearances per game and
/// lognormal (zB, zP) with the given means and coefficient of variation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovariateSpec {
    /// Mean PA per game by `Matchup::index()`.
    pub pa_per_game: [f64; 4],
    pub zb_mean: [f64; 4],
    pub zp_mean: [f64; 4],
    /// Coefficient of variation of the lognormal z draws.
    pub cv: f64,
}

impl CovariateSpec {
    /// League-average 2010-2023 frequencies and personnel means.
    pub fn league() -> CovariateSpec {
        CovariateSpec {
            pa_per_game: [6.6, 25.8, 16.3, 29.1],
            zb_mean: [0.14, 0.75, 0.50, 0.84],
            zp_mean: [0.15, 0.76, 0.50, 0.86],
            cv: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub beta0: f64,
    pub beta_b: f64,
    pub beta_p: f64,
    /// True park-matchup effects; missing cells are zero. The reference
    /// cell should be zero to match the fitted parameterization.
    pub park_effects: BTreeMap<String, [f64; 4]>,
    pub sigma2_season: f64,
    pub first_season: i32,
    pub n_seasons: usize,
    pub games_per_park_season: usize,
    pub covariates: CovariateSpec,
    pub seed: u64,
}

impl SimConfig {
    /// The published full-model estimates as simulation truth: slopes
    /// 1.01 (batter) and 0.38 (pitcher), intercept -1.37, and the 30x4
    /// park-effect table with Washington RR pinned at zero.
    pub fn published(seed: u64) -> SimConfig {
        let table: [(&str, [f64; 4]); 30] = [
            ("SFN", [-1.05, -0.45, -0.35, -0.34]),
            ("MIA", [-1.09, -0.33, -0.37, -0.40]),
            ("PIT", [-1.19, -0.14, -0.47, -0.39]),
            ("OAK", [-0.81, -0.30, -0.32, -0.33]),
            ("SLN", [-1.13, -0.19, -0.27, -0.36]),
            ("KCA", [-1.05, -0.23, -0.31, -0.27]),
            ("CLE", [-0.97, -0.11, -0.40, -0.18]),
            ("BOS", [-0.76, -0.27, -0.17, -0.16]),
            ("SDN", [-1.03, -0.23, -0.23, -0.11]),
            ("DET", [-1.03, -0.16, -0.20, -0.19]),
            ("TBA", [-0.81, -0.17, -0.26, -0.18]),
            ("MIN", [-1.05, -0.20, -0.17, -0.15]),
            ("ATL", [-0.91, -0.13, -0.29, -0.15]),
            ("NYN", [-0.85, -0.10, -0.23, -0.16]),
            ("SEA", [-0.59, -0.16, -0.18, -0.16]),
            ("ANA", [-0.66, -0.08, -0.25, -0.15]),
            ("HOU", [-0.77, -0.10, -0.18, -0.11]),
            ("CHN", [-0.84, -0.16, -0.13, -0.05]),
            ("ARI", [-0.86, -0.07, -0.12, -0.08]),
            ("WAS", [-0.88, -0.06, -0.25, 0.00]),
            ("TOR", [-0.70, 0.00, -0.07, -0.07]),
            ("CHA", [-0.98, 0.05, -0.09, 0.04]),
            ("LAN", [-0.50, 0.01, -0.13, 0.02]),
            ("TEX", [-0.38, 0.04, -0.15, 0.01]),
            ("MIL", [-0.72, 0.12, -0.06, 0.03]),
            ("BAL", [-0.67, 0.16, -0.13, 0.02]),
            ("PHI", [-0.60, 0.09, -0.08, 0.08]),
            ("NYA", [-0.52, 0.18, -0.15, 0.00]),
            ("COL", [-0.39, 0.08, 0.00, 0.11]),
            ("CIN", [-0.62, 0.24, -0.04, 0.14]),
        ];
        SimConfig {
            beta0: -1.37,
            beta_b: 1.01,
            beta_p: 0.38,
            park_effects: table
                .iter()
                .map(|(p, e)| (p.to_string(), *e))
                .collect(),
            sigma2_season: 0.01,
            first_season: 2010,
            n_seasons: 13,
            games_per_park_season: 81,
            covariates: CovariateSpec::league(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_seasons == 0 || self.games_per_park_season == 0 {
            return Err(Error::InvalidConfig(
                "season and game counts must be positive".to_string(),
            ));
        }
        if self.park_effects.is_empty() {
            return Err(Error::InvalidConfig("no parks configured".to_string()));
        }
        if self.sigma2_season < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sigma2_season must be nonnegative, got {}",
                self.sigma2_season
            )));
        }
        if !(self.covariates.cv >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "covariate cv must be nonnegative, got {}",
                self.covariates.cv
            )));
        }
        Ok(())
    }

    /// Seasons skip 2020 when it falls inside the simulated window, to
    /// mirror the study window.
    pub fn seasons(&self) -> Vec<i32> {
        (self.first_season..)
            .filter(|y| *y != 2020)
            .take(self.n_seasons)
            .collect()
    }
}

/// All parameters used to generate a corpus, written alongside it so a
/// refit can be scored against the generating values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truth {
    pub beta0: f64,
    pub beta_b: f64,
    pub beta_p: f64,
    pub park_effects: BTreeMap<String, [f64; 4]>,
    pub sigma2_season: f64,
    pub season_effects: Vec<(i32, f64)>,
    pub seed: u64,
}

fn lognormal(mean: f64, cv: f64) -> Result<LogNormal<f64>> {
    if mean <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "lognormal mean must be positive, got {mean}"
        )));
    }
    let s2 = (1.0 + cv * cv).ln();
    LogNormal::new(mean.ln() - s2 / 2.0, s2.sqrt())
        .map_err(|e| Error::InvalidConfig(format!("lognormal: {e}")))
}

pub fn simulate_corpus(config: &SimConfig) -> Result<(Vec<GameMatchupObservation>, Truth)> {
    config.validate()?;
    let seasons = config.seasons();
    let parks: Vec<&String> = config.park_effects.keys().collect();

    // stream 0: season effects; streams 1..: one per (season, park) shard
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    master.set_stream(0);
    let season_effects: Vec<(i32, f64)> = seasons
        .iter()
        .map(|s| {
            let draw: f64 = master.sample(rand_distr::StandardNormal);
            (*s, draw * config.sigma2_season.sqrt())
        })
        .collect();

    let mut observations = Vec::new();
    for (si, (season, s_eff)) in season_effects.iter().enumerate() {
        for (pi, park) in parks.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(1 + (si * parks.len() + pi) as u64);
            let effects = &config.park_effects[*park];
            for g in 0..config.games_per_park_season {
                let game_id = format!("{park}{season}{g:04}");
                for m in Matchup::ALL {
                    let i = m.index();
                    let pa_mean = config.covariates.pa_per_game[i];
                    let mut pa = if pa_mean > 0.0 {
                        Poisson::new(pa_mean)
                            .map_err(|e| Error::InvalidConfig(format!("pa draw: {e}")))?
                            .sample(&mut rng) as u64
                    } else {
                        0
                    };
                    if pa == 0 {
                        continue; // matchup absent from this game
                    }
                    let zb = lognormal(config.covariates.zb_mean[i], config.covariates.cv)?
                        .sample(&mut rng);
                    let zp = lognormal(config.covariates.zp_mean[i], config.covariates.cv)?
                        .sample(&mut rng);
                    let eta = config.beta0
                        + config.beta_b * zb
                        + config.beta_p * zp
                        + effects[i]
                        + s_eff;
                    let y = Poisson::new(eta.exp())
                        .map_err(|e| Error::InvalidConfig(format!("y draw: {e}")))?
                        .sample(&mut rng) as u64;
                    pa = pa.max(y);
                    observations.push(GameMatchupObservation {
                        game_id: game_id.clone(),
                        season: *season,
                        park: (*park).clone(),
                        matchup: m,
                        hrsum: y,
                        zb,
                        zp,
                        pa,
                    });
                }
            }
        }
    }

    let truth = Truth {
        beta0: config.beta0,
        beta_b: config.beta_b,
        beta_p: config.beta_p,
        park_effects: config.park_effects.clone(),
        sigma2_season: config.sigma2_season,
        season_effects,
        seed: config.seed,
    };
    Ok((observations, truth))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryRow {
    pub name: String,
    pub truth: f64,
    pub estimate: f64,
    pub se: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub rows: Vec<RecoveryRow>,
    pub fraction_within_2se: f64,
    pub fraction_within_3se: f64,
}

fn truth_value(truth: &Truth, name: &str) -> Result<f64> {
    match name {
        "intercept" => Ok(truth.beta0),
        "zB" => Ok(truth.beta_b),
        "zP" => Ok(truth.beta_p),
        other => {
            let (park, m) = other
                .split_once(':')
                .ok_or_else(|| Error::DimensionMismatch(format!("unexpected effect {other}")))?;
            let effects = truth
                .park_effects
                .get(park)
                .ok_or_else(|| Error::UnknownPark(park.to_string()))?;
            let matchup: Matchup = m.parse()?;
            Ok(effects[matchup.index()])
        }
    }
}

/// Score every free fixed effect of a refit against the generating truth:
/// z = (estimate - truth) / SE, plus coverage fractions at 2 and 3 SEs.
pub fn recovery_report(truth: &Truth, fitted: &FittedModel) -> Result<RecoveryReport> {
    if fitted.fixed_names.len() != fitted.fixed_estimates.len()
        || fitted.fixed_names.len() != fitted.fixed_ses.len()
    {
        return Err(Error::DimensionMismatch(format!(
            "{} names vs {} estimates vs {} SEs",
            fitted.fixed_names.len(),
            fitted.fixed_estimates.len(),
            fitted.fixed_ses.len()
        )));
    }
    let mut rows = Vec::new();
    for (i, name) in fitted.fixed_names.iter().enumerate() {
        if name.starts_with("season:") {
            continue; // fixed-season contrasts have no single truth value
        }
        let t = truth_value(truth, name)?;
        let estimate = fitted.fixed_estimates[i];
        let se = fitted.fixed_ses[i];
        if !(se > 0.0) {
            return Err(Error::Degenerate(format!(
                "nonpositive SE for {name}: {se}"
            )));
        }
        rows.push(RecoveryRow {
            name: name.clone(),
            truth: t,
            estimate,
            se,
            z: (estimate - t) / se,
        });
    }
    if rows.is_empty() {
        return Err(Error::Degenerate("no comparable fixed effects".to_string()));
    }
    let n = rows.len() as f64;
    let within = |c: f64| rows.iter().filter(|r| r.z.abs() < c).count() as f64 / n;
    Ok(RecoveryReport {
        fraction_within_2se: within(2.0),
        fraction_within_3se: within(3.0),
        rows,
    })
}

pub const RECOVERY_CSV_HEADER: &str = "effect,truth,estimate,se,z";

pub fn write_recovery_csv(report: &RecoveryReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::from(RECOVERY_CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{:.4},{:.4},{:.4},{:.3}",
            r.name, r.truth, r.estimate, r.se, r.z
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tiny_config(seed: u64) -> SimConfig {
        let mut config = SimConfig::published(seed);
        config.n_seasons = 2;
        config.games_per_park_season = 3;
        config
    }

    #[test]
    fn flat_config_rates_are_constant() {
        let mut config = tiny_config(7);
        config.sigma2_season = 0.0;
        for e in config.park_effects.values_mut() {
            *e = [0.0; 4];
        }
        config.covariates.cv = 0.0;
        config.covariates.zb_mean = [1e-12; 4];
        config.covariates.zp_mean = [1e-12; 4];
        config.beta_b = 0.0;
        config.beta_p = 0.0;
        let (observations, truth) = simulate_corpus(&config).unwrap();
        assert!(!observations.is_empty());
        // every eta equals beta0, so the sample HR/game mean approaches
        // exp(beta0); loose bound for a small corpus
        let mean =
            observations.iter().map(|o| o.hrsum as f64).sum::<f64>() / observations.len() as f64;
        assert!((mean - config.beta0.exp()).abs() < 0.15, "mean={mean}");
        assert_eq!(truth.season_effects.len(), 2);
        assert!(truth.season_effects.iter().all(|(_, e)| *e == 0.0));
    }

    #[test]
    fn same_seed_bit_identical() {
        let (a, ta) = simulate_corpus(&tiny_config(42)).unwrap();
        let (b, tb) = simulate_corpus(&tiny_config(42)).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta, tb);
        let (c, _) = simulate_corpus(&tiny_config(43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn seasons_skip_2020() {
        let mut config = tiny_config(1);
        config.first_season = 2018;
        config.n_seasons = 4;
        assert_eq!(config.seasons(), vec![2018, 2019, 2021, 2022]);
    }

    #[test]
    fn counts_respect_pa_bound() {
        let (observations, _) = simulate_corpus(&tiny_config(9)).unwrap();
        assert!(observations.iter().all(|o| o.hrsum <= o.pa && o.pa > 0));
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut config = tiny_config(1);
        config.n_seasons = 0;
        assert!(simulate_corpus(&config).is_err());
        let mut config = tiny_config(1);
        config.sigma2_season = -0.5;
        assert!(simulate_corpus(&config).is_err());
    }

    #[test]
    fn perfect_fit_scores_zero() {
        use crate::glmm::{build_design, fit, FitOptions, ModelSpec, SeasonMode};
        let mut config = tiny_config(5);
        config.games_per_park_season = 8;
        let (observations, truth) = simulate_corpus(&config).unwrap();
        let spec = ModelSpec {
            season_mode: SeasonMode::None,
            ..ModelSpec::full()
        };
        let d = build_design(&observations, &spec).unwrap();
        let model = fit(&d, &FitOptions::default()).unwrap();
        // score the fit against itself: every z must be exactly 0
        let mut self_truth = truth.clone();
        self_truth.beta0 = model.beta0;
        self_truth.beta_b = model.beta_b.unwrap();
        self_truth.beta_p = model.beta_p.unwrap();
        for e in &model.park_effects {
            self_truth.park_effects.get_mut(&e.park).unwrap()[e.matchup.index()] = e.estimate;
        }
        let report = recovery_report(&self_truth, &model).unwrap();
        assert!(report.rows.iter().all(|r| r.z == 0.0));
        assert_relative_eq!(report.fraction_within_2se, 1.0);
    }

    #[test]
    fn stratum_mean_tracks_lambda() {
        // fixed-lambda stratum: mean of Poisson draws approaches lambda
        use rand::SeedableRng;
        let lam = 0.8;
        for &n in &[1_000usize, 100_000] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let d = Poisson::new(lam).unwrap();
            let draws: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
            let mean = draws.iter().sum::<f64>() / n as f64;
            let tol = 4.0 * (lam / n as f64).sqrt();
            assert!((mean - lam).abs() < tol, "n={n} mean={mean}");
            if n >= 10_000 {
                let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                assert!((var / mean) > 0.9 && (var / mean) < 1.1);
            }
        }
    }
}
