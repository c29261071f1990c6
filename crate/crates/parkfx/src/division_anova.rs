//! One-way ANOVA of adjustment magnitude by division: does how much a
//! park's rank moves under adjustment cluster geographically?

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matchup::Matchup;
use crate::park_effects::AdjustedMeansReport;
use crate::parks::{Division, DivisionMap};

/// |delta rank|: the size of the rank movement, sign discarded.
pub fn adjustment_magnitude(delta_rank: i64) -> u64 {
    delta_rank.unsigned_abs()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnovaRow {
    pub matchup: Matchup,
    pub ss_division: f64,
    pub ss_total: f64,
    /// Between-division share of the variation; `None` when the response is
    /// constant (SS_total = 0).
    pub r2: Option<f64>,
    pub df_division: usize,
    pub df_error: usize,
    pub group_means: Vec<(Division, f64)>,
}

/// One-way ANOVA of a per-park response grouped by division. With 30 parks
/// in 6 divisions of 5: df_division = 5, df_error = 24.
pub fn one_way_anova(
    responses: &[(String, f64)],
    divisions: &DivisionMap,
) -> Result<(f64, f64, Option<f64>, Vec<(Division, f64)>)> {
    if responses.is_empty() {
        return Err(Error::Degenerate("no responses for ANOVA".to_string()));
    }
    let n = responses.len() as f64;
    let grand = responses.iter().map(|(_, v)| v).sum::<f64>() / n;

    let mut groups: Vec<(Division, f64, usize)> = Vec::new();
    for (park, value) in responses {
        let division = divisions
            .division_of(park)
            .ok_or_else(|| Error::UnknownPark(park.clone()))?;
        match groups.iter_mut().find(|(d, _, _)| *d == division) {
            Some(g) => {
                g.1 += value;
                g.2 += 1;
            }
            None => groups.push((division, *value, 1)),
        }
    }

    let ss_total: f64 = responses.iter().map(|(_, v)| (v - grand).powi(2)).sum();
    let mut ss_division = 0.0;
    let mut group_means = Vec::new();
    for (division, sum, count) in &groups {
        let mean = sum / *count as f64;
        ss_division += *count as f64 * (mean - grand).powi(2);
        group_means.push((*division, mean));
    }
    group_means.sort_by_key(|(d, _)| *d);

    let r2 = if ss_total > 0.0 {
        Some(ss_division / ss_total)
    } else {
        None
    };
    Ok((ss_division, ss_total, r2, group_means))
}

/// Run the division ANOVA on |delta rank| for each matchup table of a
/// ranked report.
pub fn division_anova(
    report: &AdjustedMeansReport,
    divisions: &DivisionMap,
) -> Result<Vec<AnovaRow>> {
    let mut rows = Vec::new();
    for m in Matchup::ALL {
        let table = &report.matchup_tables[m.index()];
        let responses: Vec<(String, f64)> = table
            .iter()
            .map(|r| (r.park.clone(), adjustment_magnitude(r.delta_rank) as f64))
            .collect();
        let (ss_division, ss_total, r2, group_means) = one_way_anova(&responses, divisions)?;
        let k = group_means.len();
        rows.push(AnovaRow {
            matchup: m,
            ss_division,
            ss_total,
            r2,
            df_division: k.saturating_sub(1),
            df_error: responses.len().saturating_sub(k),
            group_means,
        });
    }
    Ok(rows)
}

pub const ANOVA_CSV_HEADER: &str = "matchup,ss_division,ss_total,r2";

pub fn write_anova_csv(rows: &[AnovaRow]) -> String {
    let mut out = String::from(ANOVA_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let r2 = r.r2.map(|v| format!("{v:.2}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{:.2},{:.2},{}",
            r.matchup, r.ss_division, r.ss_total, r2
        );
    }
    out
}
