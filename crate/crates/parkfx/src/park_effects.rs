//! Adjusted park means, ranks, marginal means, ECDF clustering, and the
//! classical home-run park factor baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::covariates::GameMatchupObservation;
use crate::error::{Error, Result};
use crate::glmm::FittedModel;
use crate::matchup::Matchup;

/// League-wide per-matchup summaries: PA frequency per game and mean
/// personnel covariates, the evaluation point for adjusted means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchupAverages {
    /// Indexed by `Matchup::index()`.
    pub frequency: [f64; 4],
    pub zb_mean: [f64; 4],
    pub zp_mean: [f64; 4],
}

impl MatchupAverages {
    /// The published 2010-2023 league averages (frequency, mean zB, mean zP
    /// per matchup), handy for evaluating a model without its corpus.
    pub fn published() -> MatchupAverages {
        MatchupAverages {
            frequency: [6.6, 25.8, 16.3, 29.1],
            zb_mean: [0.14, 0.75, 0.50, 0.84],
            zp_mean: [0.15, 0.76, 0.50, 0.86],
        }
    }
}

pub fn matchup_averages(observations: &[GameMatchupObservation]) -> Result<MatchupAverages> {
    if observations.is_empty() {
        return Err(Error::Degenerate("no observations".to_string()));
    }
    let games: BTreeSet<&str> = observations.iter().map(|o| o.game_id.as_str()).collect();
    let n_games = games.len() as f64;
    let mut pa_total = [0u64; 4];
    let mut zb_sum = [0.0; 4];
    let mut zp_sum = [0.0; 4];
    let mut count = [0usize; 4];
    for o in observations {
        let i = o.matchup.index();
        pa_total[i] += o.pa;
        zb_sum[i] += o.zb;
        zp_sum[i] += o.zp;
        count[i] += 1;
    }
    let mut avg = MatchupAverages {
        frequency: [0.0; 4],
        zb_mean: [0.0; 4],
        zp_mean: [0.0; 4],
    };
    for i in 0..4 {
        avg.frequency[i] = pa_total[i] as f64 / n_games;
        if count[i] > 0 {
            avg.zb_mean[i] = zb_sum[i] / count[i] as f64;
            avg.zp_mean[i] = zp_sum[i] / count[i] as f64;
        }
    }
    Ok(avg)
}

/// Adjusted mean HR per game for a park and matchup at league-average
/// personnel, with a delta-method standard error from the fixed-effect
/// covariance (season effects held at their zero prior mean).
pub fn adjusted_mean(
    model: &FittedModel,
    park: &str,
    matchup: Matchup,
    averages: &MatchupAverages,
) -> Result<(f64, f64)> {
    let i = matchup.index();
    let effect = model.park_effect(park, matchup)?;
    let eta = model.beta0
        + model.beta_b.unwrap_or(0.0) * averages.zb_mean[i]
        + model.beta_p.unwrap_or(0.0) * averages.zp_mean[i]
        + effect;
    let lambda = eta.exp();

    // gradient of eta over the free fixed columns
    let mut grad: Vec<(usize, f64)> = vec![(0, 1.0)];
    if let Some(c) = model.fixed_index("zB") {
        grad.push((c, averages.zb_mean[i]));
    }
    if let Some(c) = model.fixed_index("zP") {
        grad.push((c, averages.zp_mean[i]));
    }
    if let Some(c) = model.fixed_index(&format!("{park}:{matchup}")) {
        grad.push((c, 1.0));
    }
    let mut var_eta = 0.0;
    for &(a, va) in &grad {
        for &(b, vb) in &grad {
            var_eta += va * vb * model.cov(a, b);
        }
    }
    let se = lambda * var_eta.max(0.0).sqrt();
    Ok((lambda, se))
}

/// Sum of the four matchup-specific adjusted means.
pub fn marginal_adjusted_mean(
    model: &FittedModel,
    park: &str,
    averages: &MatchupAverages,
) -> Result<f64> {
    let mut total = 0.0;
    for m in Matchup::ALL {
        total += adjusted_mean(model, park, m, averages)?.0;
    }
    Ok(total)
}

/// Weighted personnel sum: the fitted slopes applied to observed covariates.
pub fn personnel_summary(model: &FittedModel, zb: f64, zp: f64) -> f64 {
    model.beta_b.unwrap_or(0.0) * zb + model.beta_p.unwrap_or(0.0) * zp
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchupRow {
    pub park: String,
    pub zb_mean: f64,
    pub zp_mean: f64,
    pub z: f64,
    pub z_rank: usize,
    pub lambda: f64,
    pub lambda_rank: usize,
    pub se_lambda: f64,
    pub hr_per_game: f64,
    pub empirical_rank: usize,
    /// empirical_rank - lambda_rank; negative means adjustment moved the
    /// park down the friendliness order.
    pub delta_rank: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalRow {
    pub park: String,
    pub matchup_lambda: [f64; 4],
    pub lambda: f64,
    pub lambda_rank: usize,
    pub hr_per_game: f64,
    pub empirical_rank: usize,
    pub delta_rank: i64,
    pub cluster: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustedMeansReport {
    /// Per-matchup tables ordered by ascending adjusted mean, indexed by
    /// `Matchup::index()`.
    pub matchup_tables: [Vec<MatchupRow>; 4],
    /// Marginal table ordered by ascending marginal adjusted mean.
    pub marginal: Vec<MarginalRow>,
}

/// Rank 1 is the most HR-friendly (largest value); ties break by park code.
fn ranks_desc(values: &[(String, f64)]) -> BTreeMap<String, usize> {
    let mut sorted: Vec<&(String, f64)> = values.iter().collect();
    sorted.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, (park, _))| (park.clone(), i + 1))
        .collect()
}

/// Produce the full per-matchup and marginal report for a fitted model.
pub fn rank_report(
    model: &FittedModel,
    observations: &[GameMatchupObservation],
    averages: &MatchupAverages,
    gap_threshold: f64,
) -> Result<AdjustedMeansReport> {
    let parks: Vec<String> = model.parks.clone();

    // observed per-(park, matchup) covariate means and empirical HR/g
    let mut zb_sum: BTreeMap<(String, Matchup), (f64, f64, f64, usize)> = BTreeMap::new();
    let mut games_per_park: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
    let mut hr_per_park: BTreeMap<String, u64> = BTreeMap::new();
    for o in observations {
        let e = zb_sum
            .entry((o.park.clone(), o.matchup))
            .or_insert((0.0, 0.0, 0.0, 0));
        e.0 += o.zb;
        e.1 += o.zp;
        e.2 += o.hrsum as f64;
        e.3 += 1;
        games_per_park
            .entry(o.park.clone())
            .or_default()
            .insert(o.game_id.as_str());
        *hr_per_park.entry(o.park.clone()).or_default() += o.hrsum;
    }

    let mut matchup_tables: [Vec<MatchupRow>; 4] = Default::default();
    for m in Matchup::ALL {
        let mut rows = Vec::new();
        for park in &parks {
            let (zb_mean, zp_mean, hr_per_game) =
                match zb_sum.get(&(park.clone(), m)) {
                    Some((zb, zp, hr, n)) if *n > 0 => {
                        (zb / *n as f64, zp / *n as f64, hr / *n as f64)
                    }
                    _ => (0.0, 0.0, 0.0),
                };
            let (lambda, se_lambda) = adjusted_mean(model, park, m, averages)?;
            rows.push(MatchupRow {
                park: park.clone(),
                zb_mean,
                zp_mean,
                z: personnel_summary(model, zb_mean, zp_mean),
                z_rank: 0,
                lambda,
                lambda_rank: 0,
                se_lambda,
                hr_per_game,
                empirical_rank: 0,
                delta_rank: 0,
            });
        }
        let z_ranks = ranks_desc(&rows.iter().map(|r| (r.park.clone(), r.z)).collect::<Vec<_>>());
        let l_ranks =
            ranks_desc(&rows.iter().map(|r| (r.park.clone(), r.lambda)).collect::<Vec<_>>());
        let e_ranks = ranks_desc(
            &rows
                .iter()
                .map(|r| (r.park.clone(), r.hr_per_game))
                .collect::<Vec<_>>(),
        );
        for r in &mut rows {
            r.z_rank = z_ranks[&r.park];
            r.lambda_rank = l_ranks[&r.park];
            r.empirical_rank = e_ranks[&r.park];
            r.delta_rank = r.empirical_rank as i64 - r.lambda_rank as i64;
        }
        rows.sort_by(|a, b| b.lambda_rank.cmp(&a.lambda_rank));
        matchup_tables[m.index()] = rows;
    }

    // marginal table
    let mut marginal = Vec::new();
    for park in &parks {
        let mut matchup_lambda = [0.0; 4];
        for m in Matchup::ALL {
            matchup_lambda[m.index()] = adjusted_mean(model, park, m, averages)?.0;
        }
        let lambda: f64 = matchup_lambda.iter().sum();
        let n_games = games_per_park
            .get(park)
            .map(|g| g.len())
            .unwrap_or(0);
        let hr_per_game = if n_games > 0 {
            hr_per_park.get(park).copied().unwrap_or(0) as f64 / n_games as f64
        } else {
            0.0
        };
        marginal.push(MarginalRow {
            park: park.clone(),
            matchup_lambda,
            lambda,
            lambda_rank: 0,
            hr_per_game,
            empirical_rank: 0,
            delta_rank: 0,
            cluster: 0,
        });
    }
    let l_ranks = ranks_desc(
        &marginal
            .iter()
            .map(|r| (r.park.clone(), r.lambda))
            .collect::<Vec<_>>(),
    );
    let e_ranks = ranks_desc(
        &marginal
            .iter()
            .map(|r| (r.park.clone(), r.hr_per_game))
            .collect::<Vec<_>>(),
    );
    let clusters = cluster_marginals(
        &marginal
            .iter()
            .map(|r| (r.park.clone(), r.lambda))
            .collect::<Vec<_>>(),
        gap_threshold,
    );
    for r in &mut marginal {
        r.lambda_rank = l_ranks[&r.park];
        r.empirical_rank = e_ranks[&r.park];
        r.delta_rank = r.empirical_rank as i64 - r.lambda_rank as i64;
        r.cluster = clusters[&r.park];
    }
    marginal.sort_by(|a, b| b.lambda_rank.cmp(&a.lambda_rank));

    Ok(AdjustedMeansReport {
        matchup_tables,
        marginal,
    })
}

/// Cluster sorted marginal means wherever the gap between consecutive
/// values exceeds the threshold. Labels 1..K in increasing mean order.
pub fn cluster_marginals(
    marginals: &[(String, f64)],
    gap_threshold: f64,
) -> BTreeMap<String, usize> {
    let mut sorted: Vec<&(String, f64)> = marginals.iter().collect();
    sorted.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    let mut labels = BTreeMap::new();
    let mut cluster = 1usize;
    let mut prev: Option<f64> = None;
    for (park, value) in sorted {
        if let Some(p) = prev {
            if value - p > gap_threshold {
                cluster += 1;
            }
        }
        labels.insert(park.clone(), cluster);
        prev = Some(*value);
    }
    labels
}

/// Per-team home/road HR and game counts for the classical baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeamGameCounts {
    pub hr_hit_home: u64,
    pub hr_allowed_home: u64,
    pub games_home: u64,
    pub hr_hit_road: u64,
    pub hr_allowed_road: u64,
    pub games_road: u64,
}

/// Classical home run park factor: ratio of home HR-per-game (hit plus
/// allowed) to the same quantity on the road.
pub fn hrpf(counts: &TeamGameCounts) -> Result<f64> {
    if counts.games_road == 0 || counts.hr_hit_road + counts.hr_allowed_road == 0 {
        return Err(Error::Degenerate(
            "road HR rate is zero; HRPF undefined".to_string(),
        ));
    }
    if counts.games_home == 0 {
        return Err(Error::Degenerate("no home games".to_string()));
    }
    let home = (counts.hr_hit_home + counts.hr_allowed_home) as f64 / counts.games_home as f64;
    let road = (counts.hr_hit_road + counts.hr_allowed_road) as f64 / counts.games_road as f64;
    Ok(home / road)
}

pub const MATCHUP_TABLE_HEADER: &str =
    "park,zB,zP,z,rank_z,lambda,rank_lambda,hr_g,rank_hr_g,delta_rank";

pub fn write_matchup_table_csv(rows: &[MatchupRow]) -> String {
    let mut out = String::from(MATCHUP_TABLE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.3},{:.3},{:.3},{},{:.3},{},{:.3},{},{}",
            r.park,
            r.zb_mean,
            r.zp_mean,
            r.z,
            r.z_rank,
            r.lambda,
            r.lambda_rank,
            r.hr_per_game,
            r.empirical_rank,
            r.delta_rank
        );
    }
    out
}

pub const MARGINAL_TABLE_HEADER: &str =
    "cluster,park,ll,lr,rl,rr,lambda,rank_lambda,hr_g,rank_hr_g,delta_rank";

pub fn write_marginal_table_csv(rows: &[MarginalRow]) -> String {
    let mut out = String::from(MARGINAL_TABLE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:.2},{:.2},{:.2},{:.2},{:.2},{},{:.2},{},{}",
            r.cluster,
            r.park,
            r.matchup_lambda[0],
            r.matchup_lambda[1],
            r.matchup_lambda[2],
            r.matchup_lambda[3],
            r.lambda,
            r.lambda_rank,
            r.hr_per_game,
            r.empirical_rank,
            r.delta_rank
        );
    }
    out
}

/// ECDF of marginal adjusted means as a standalone SVG, parks annotated.
pub fn render_ecdf_svg(marginal: &[MarginalRow]) -> String {
    let mut rows: Vec<&MarginalRow> = marginal.iter().collect();
    rows.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap());
    let n = rows.len().max(1);
    let (width, height, margin) = (640.0, 420.0, 50.0);
    let (xmin, xmax) = rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.lambda), hi.max(r.lambda))
        });
    let span = (xmax - xmin).max(1e-9);
    let sx = |x: f64| margin + (x - xmin) / span * (width - 2.0 * margin);
    let sy = |f: f64| height - margin - f * (height - 2.0 * margin);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        margin,
        height - margin,
        width - margin,
        height - margin
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        margin,
        margin,
        margin,
        height - margin
    );
    for (i, r) in rows.iter().enumerate() {
        let f = (i + 1) as f64 / n as f64;
        let (x, y) = (sx(r.lambda), sy(f));
        let _ = writeln!(
            svg,
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"steelblue\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"9\" font-family=\"monospace\">{}</text>",
            x + 5.0,
            y - 3.0,
            r.park
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">marginal adjusted HR/g</text>",
        width / 2.0 - 70.0,
        height - 12.0
    );
    svg.push_str("</svg>\n");
    svg
}
