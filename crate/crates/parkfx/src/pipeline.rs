//! File-level orchestration shared by the command-line interface: each
//! step reads its predecessor's artifacts from the output directory and
//! writes its own, deterministically for a given config and seed.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::PipelineConfig;
use crate::covariates::{self, build_observations, ElsewhereIndex, GameMatchupObservation};
use crate::diagnostics;
use crate::division_anova;
use crate::error::{Error, Result};
use crate::glmm::{build_design, fit, FittedModel, ModelSpec};
use crate::ingest::{self, filter_study_window, parse_directory, StudyWindow};
use crate::matchup::Matchup;
use crate::park_effects::{self, matchup_averages, TeamGameCounts};
use crate::parks::DivisionMap;
use crate::simulate::{recovery_report, simulate_corpus, SimConfig, Truth};

pub const PA_FILE: &str = "pa.csv";
pub const OBS_FILE: &str = "observations.csv";
pub const FREQ_FILE: &str = "matchup_frequency.csv";
pub const MODEL_FILE: &str = "model.json";
pub const AVERAGES_FILE: &str = "averages.json";
pub const MARGINAL_FILE: &str = "marginal.csv";
pub const ECDF_FILE: &str = "ecdf.svg";
pub const POISSONNESS_CSV: &str = "poissonness.csv";
pub const POISSONNESS_SVG: &str = "poissonness.svg";
pub const COMPARISON_FILE: &str = "model_comparison.csv";
pub const ANOVA_FILE: &str = "anova.csv";
pub const TRUTH_FILE: &str = "truth.json";
pub const RECOVERY_FILE: &str = "recovery.csv";
pub const RECOVERY_SUMMARY_FILE: &str = "recovery_summary.json";
pub const HRPF_FILE: &str = "hrpf.csv";

pub fn matchup_table_file(m: Matchup) -> String {
    format!("table_{}.csv", m.to_string().to_lowercase())
}

fn write(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, content)?;
    Ok(())
}

fn out(config: &PipelineConfig, name: &str) -> PathBuf {
    config.out_dir.join(name)
}

fn read_observations(config: &PipelineConfig) -> Result<Vec<GameMatchupObservation>> {
    let path = out(config, OBS_FILE);
    let text = fs::read_to_string(&path)?;
    covariates::read_obs_csv(&text, &path.display().to_string())
}

fn read_model(config: &PipelineConfig) -> Result<FittedModel> {
    let text = fs::read_to_string(out(config, MODEL_FILE))?;
    FittedModel::from_json(&text)
}

/// Parse event and roster directories into the canonical plate-appearance
/// table, filtered to the configured study window.
pub fn run_ingest(config: &PipelineConfig) -> Result<usize> {
    let parsed = parse_directory(&config.event_dir, &config.roster_dir, config.unknown_players)?;
    let mut pas = Vec::new();
    for (_, game_pas) in &parsed.games {
        pas.extend(game_pas.iter().cloned());
    }
    let window = StudyWindow {
        seasons: config.study.seasons.iter().copied().collect(),
        parks: config.study.parks.iter().cloned().collect(),
    };
    let pas = filter_study_window(pas, &window);
    write(&out(config, PA_FILE), &ingest::write_pa_csv(&pas))?;
    Ok(pas.len())
}

/// Build leak-free elsewhere covariates and the game-matchup observation
/// table from the plate-appearance table.
pub fn run_build(config: &PipelineConfig) -> Result<usize> {
    let path = out(config, PA_FILE);
    let text = fs::read_to_string(&path)?;
    let pas = ingest::read_pa_csv(&text, &path.display().to_string())?;
    let index = ElsewhereIndex::build(&pas);
    let observations = build_observations(&pas, &index, &config.study)?;
    write(&out(config, OBS_FILE), &covariates::write_obs_csv(&observations))?;

    let freq = covariates::matchup_frequency_table(&pas);
    let mut table = String::from("matchup,pa,hr,hr_per_pa\n");
    for m in Matchup::ALL {
        let i = m.index();
        table.push_str(&format!(
            "{},{},{},{:.4}\n",
            m,
            freq.pa[i],
            freq.hr[i],
            freq.rate(m)
        ));
    }
    write(&out(config, FREQ_FILE), &table)?;
    Ok(observations.len())
}

/// Fit the configured subset model to the observation table.
pub fn run_fit(config: &PipelineConfig) -> Result<FittedModel> {
    let observations = read_observations(config)?;
    let spec = ModelSpec::subset(&config.subset)?;
    let design = build_design(&observations, &spec)?;
    let model = fit(&design, &config.fit)?;
    write(&out(config, MODEL_FILE), &model.to_json()?)?;
    Ok(model)
}

/// Produce the four matchup tables, the marginal table, and the ECDF plot.
pub fn run_adjust(config: &PipelineConfig) -> Result<()> {
    let observations = read_observations(config)?;
    let model = read_model(config)?;
    let averages = matchup_averages(&observations)?;
    write(
        &out(config, AVERAGES_FILE),
        &serde_json::to_string_pretty(&averages).map_err(Error::from)?,
    )?;
    let report = park_effects::rank_report(&model, &observations, &averages, config.cluster_gap)?;
    for m in Matchup::ALL {
        write(
            &out(config, &matchup_table_file(m)),
            &park_effects::write_matchup_table_csv(&report.matchup_tables[m.index()]),
        )?;
    }
    write(
        &out(config, MARGINAL_FILE),
        &park_effects::write_marginal_table_csv(&report.marginal),
    )?;
    write(
        &out(config, ECDF_FILE),
        &park_effects::render_ecdf_svg(&report.marginal),
    )?;
    Ok(())
}

/// Subset models compared in the diagnostics table, in menu order.
pub const SUBSET_MODELS: [&str; 5] = [
    "full",
    "park,season",
    "personnel,season",
    "zb,season",
    "zp,season",
];

/// Poissonness artifacts for the fitted model plus the subset-model
/// residual-variance and AIC comparison (each subset refit in-process).
pub fn run_diagnose(config: &PipelineConfig) -> Result<()> {
    let observations = read_observations(config)?;
    let model = read_model(config)?;
    let bins = diagnostics::poissonness_bins(&observations, &model.fitted, config.bin_width)?;
    write(
        &out(config, POISSONNESS_CSV),
        &diagnostics::write_poissonness_csv(&bins),
    )?;
    write(
        &out(config, POISSONNESS_SVG),
        &diagnostics::render_poissonness_svg(&bins, config.min_bin_n),
    )?;

    let mut rows = Vec::new();
    for name in SUBSET_MODELS {
        let spec = ModelSpec::subset(name)?;
        let design = build_design(&observations, &spec)?;
        let fitted = fit(&design, &config.fit)?;
        rows.push(diagnostics::comparison_row(name, &fitted, &observations)?);
    }
    write(
        &out(config, COMPARISON_FILE),
        &diagnostics::write_comparison_csv(&rows),
    )?;
    Ok(())
}

/// Division ANOVA of |delta rank| per matchup.
pub fn run_anova(config: &PipelineConfig) -> Result<()> {
    let observations = read_observations(config)?;
    let model = read_model(config)?;
    let averages = matchup_averages(&observations)?;
    let report = park_effects::rank_report(&model, &observations, &averages, config.cluster_gap)?;
    let divisions = match &config.division_map {
        Some(path) => DivisionMap::from_file(path)?,
        None => DivisionMap::standard(),
    };
    let rows = division_anova::division_anova(&report, &divisions)?;
    write(&out(config, ANOVA_FILE), &division_anova::write_anova_csv(&rows))?;
    Ok(())
}

/// Generate a synthetic corpus from the published parameters and the
/// configured scale, writing the observation table and the truth record.
pub fn run_simulate(config: &PipelineConfig) -> Result<usize> {
    let mut sim = SimConfig::published(config.seed);
    sim.n_seasons = config.sim_seasons;
    sim.games_per_park_season = config.sim_games_per_park_season;
    let (observations, truth) = simulate_corpus(&sim)?;
    write(&out(config, OBS_FILE), &covariates::write_obs_csv(&observations))?;
    write(
        &out(config, TRUTH_FILE),
        &serde_json::to_string_pretty(&truth).map_err(Error::from)?,
    )?;
    Ok(observations.len())
}

/// Score the fitted model in the output directory against the simulation
/// truth record.
pub fn run_recover(config: &PipelineConfig) -> Result<f64> {
    let truth: Truth =
        serde_json::from_str(&fs::read_to_string(out(config, TRUTH_FILE))?).map_err(Error::from)?;
    let model = read_model(config)?;
    let report = recovery_report(&truth, &model)?;
    write(
        &out(config, RECOVERY_FILE),
        &crate::simulate::write_recovery_csv(&report),
    )?;
    let summary = serde_json::json!({
        "n_effects": report.rows.len(),
        "fraction_within_2se": report.fraction_within_2se,
        "fraction_within_3se": report.fraction_within_3se,
        "seed": truth.seed,
    });
    write(
        &out(config, RECOVERY_SUMMARY_FILE),
        &serde_json::to_string_pretty(&summary).map_err(Error::from)?,
    )?;
    Ok(report.fraction_within_2se)
}

/// Compute classical home-run park factors from a per-team counts CSV:
/// `team,hr_hit_home,hr_allowed_home,games_home,hr_hit_road,hr_allowed_road,games_road`.
pub fn run_hrpf(config: &PipelineConfig, counts_path: &Path) -> Result<()> {
    let text = fs::read_to_string(counts_path)?;
    let file = counts_path.display().to_string();
    let mut out_csv = String::from("team,hrpf\n");
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 && line.starts_with("team,") {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let err = |msg: String| Error::Parse {
            file: file.clone(),
            line: lineno + 1,
            msg,
        };
        if f.len() != 7 {
            return Err(err(format!("expected 7 fields, got {}", f.len())));
        }
        let num = |s: &str| -> Result<u64> {
            s.trim()
                .parse()
                .map_err(|_| err(format!("bad count {s:?}")))
        };
        let counts = TeamGameCounts {
            hr_hit_home: num(f[1])?,
            hr_allowed_home: num(f[2])?,
            games_home: num(f[3])?,
            hr_hit_road: num(f[4])?,
            hr_allowed_road: num(f[5])?,
            games_road: num(f[6])?,
        };
        out_csv.push_str(&format!("{},{:.3}\n", f[0], park_effects::hrpf(&counts)?));
    }
    write(&out(config, HRPF_FILE), &out_csv)?;
    Ok(())
}

/// The artifacts whose bytes define pipeline determinism.
pub fn determinism_artifacts(config: &PipelineConfig) -> Vec<PathBuf> {
    let mut files = vec![
        out(config, OBS_FILE),
        out(config, TRUTH_FILE),
        out(config, MODEL_FILE),
        out(config, AVERAGES_FILE),
        out(config, MARGINAL_FILE),
        out(config, ECDF_FILE),
        out(config, POISSONNESS_CSV),
        out(config, POISSONNESS_SVG),
        out(config, COMPARISON_FILE),
    ];
    for m in Matchup::ALL {
        files.push(out(config, &matchup_table_file(m)));
    }
    files
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(dir: &Path) -> PipelineConfig {
        let mut config = PipelineConfig::default();
        config.out_dir = dir.to_path_buf();
        config.sim_seasons = 2;
        config.sim_games_per_park_season = 4;
        config.seed = 99;
        config
    }

    #[test]
    fn simulate_fit_adjust_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let config = small_config(dir.path());
        let n = run_simulate(&config).unwrap();
        assert!(n > 0);
        let model = run_fit(&config).unwrap();
        assert!(model.converged);
        run_adjust(&config).unwrap();
        run_anova(&config).unwrap();
        let coverage = run_recover(&config).unwrap();
        assert!(coverage > 0.5);
        for m in Matchup::ALL {
            assert!(out(&config, &matchup_table_file(m)).exists());
        }
        assert!(out(&config, MARGINAL_FILE).exists());
        assert!(out(&config, ANOVA_FILE).exists());
    }

    #[test]
    fn hrpf_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let config = small_config(dir.path());
        let counts = dir.path().join("counts.csv");
        fs::write(
            &counts,
            "team,hr_hit_home,hr_allowed_home,games_home,hr_hit_road,hr_allowed_road,games_road\nNYA,50,50,81,40,40,81\n",
        )
        .unwrap();
        run_hrpf(&config, &counts).unwrap();
        let out_text = fs::read_to_string(out(&config, HRPF_FILE)).unwrap();
        assert!(out_text.contains("NYA,1.250"));
    }
}
