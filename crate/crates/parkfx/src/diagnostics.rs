//! Model diagnostics: Poissonness plots of binned counts, game-level
//! residual variance, and the subset-model comparison table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::covariates::GameMatchupObservation;
use crate::error::{Error, Result};
use crate::glmm::{aic, FittedModel};

/// One fitted-rate bin of observations with its count frequencies and
/// Poissonness ordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonnessBin {
    /// Bin center: fitted rate rounded to the nearest multiple of the width.
    pub lambda: f64,
    pub n: usize,
    /// Frequency of each count k = 0..=k_max within the bin.
    pub n_k: Vec<usize>,
    /// phi(k) = ln(k! * n_k / N); `None` where n_k = 0.
    pub phi: Vec<Option<f64>>,
}

impl PoissonnessBin {
    pub fn k_max(&self) -> usize {
        self.n_k.len().saturating_sub(1)
    }
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// Group observations by fitted rate (rounded to `bin_width`) and compute
/// the Poissonness ordinates phi(k) = ln(k! n_k / N) for each bin.
pub fn poissonness_bins(
    observations: &[GameMatchupObservation],
    fitted: &[f64],
    bin_width: f64,
) -> Result<Vec<PoissonnessBin>> {
    if observations.len() != fitted.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} observations vs {} fitted values",
            observations.len(),
            fitted.len()
        )));
    }
    if !(bin_width > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    // key bins by integer multiple of the width for exact grouping
    let mut groups: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
    for (o, lam) in observations.iter().zip(fitted) {
        if !lam.is_finite() || *lam < 0.0 {
            return Err(Error::Degenerate(format!("invalid fitted rate {lam}")));
        }
        let key = (lam / bin_width).round() as i64;
        groups.entry(key).or_default().push(o.hrsum);
    }
    let mut bins = Vec::new();
    for (key, counts) in groups {
        let n = counts.len();
        let k_max = counts.iter().copied().max().unwrap_or(0) as usize;
        let mut n_k = vec![0usize; k_max + 1];
        for c in &counts {
            n_k[*c as usize] += 1;
        }
        let phi = n_k
            .iter()
            .enumerate()
            .map(|(k, nk)| {
                (*nk > 0).then(|| ln_factorial(k) + (*nk as f64 / n as f64).ln())
            })
            .collect();
        bins.push(PoissonnessBin {
            lambda: key as f64 * bin_width,
            n,
            n_k,
            phi,
        });
    }
    Ok(bins)
}

/// Theoretical Poissonness line for rate `lambda`: phi(k) = k ln(lambda)
/// - lambda, returned as (intercept, slope).
pub fn poissonness_line(lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0) {
        return Err(Error::Degenerate(format!(
            "Poissonness line requires a positive rate, got {lambda}"
        )));
    }
    Ok((-lambda, lambda.ln()))
}

/// Game-level residual variance: for each game, the residual between the
/// total observed HR count and the sum of fitted rates over the matchups
/// observed in that game. Returns the sample variance of those residuals.
pub fn game_residual_variance(
    observations: &[GameMatchupObservation],
    fitted: &[f64],
) -> Result<f64> {
    if observations.len() != fitted.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} observations vs {} fitted values",
            observations.len(),
            fitted.len()
        )));
    }
    let mut per_game: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    for (o, lam) in observations.iter().zip(fitted) {
        let e = per_game.entry(o.game_id.as_str()).or_insert((0.0, 0.0));
        e.0 += o.hrsum as f64;
        e.1 += lam;
    }
    let n = per_game.len();
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "residual variance needs at least 2 games, got {n}"
        )));
    }
    let residuals: Vec<f64> = per_game.values().map(|(y, f)| y - f).collect();
    let mean = residuals.iter().sum::<f64>() / n as f64;
    let ss = residuals.iter().map(|r| (r - mean).powi(2)).sum::<f64>();
    Ok(ss / (n - 1) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComparisonRow {
    pub model: String,
    /// Free fixed-effect parameters beyond the intercept.
    pub df: usize,
    pub s2: f64,
    pub aic: f64,
}

/// One row of the comparison table for a fitted subset model.
pub fn comparison_row(
    name: &str,
    model: &FittedModel,
    observations: &[GameMatchupObservation],
) -> Result<ModelComparisonRow> {
    Ok(ModelComparisonRow {
        model: name.to_string(),
        df: model.n_fixed - 1,
        s2: game_residual_variance(observations, &model.fitted)?,
        aic: aic(model),
    })
}

pub const POISSONNESS_CSV_HEADER: &str = "lambda,k,n_k,rel_freq,fitted,phi";

/// Long-format CSV of every bin: one row per (bin, k). `fitted` is the
/// theoretical line value at k; `phi` is blank where n_k = 0.
pub fn write_poissonness_csv(bins: &[PoissonnessBin]) -> String {
    let mut out = String::from(POISSONNESS_CSV_HEADER);
    out.push('\n');
    for bin in bins {
        let line = poissonness_line(bin.lambda.max(f64::MIN_POSITIVE)).ok();
        for (k, nk) in bin.n_k.iter().enumerate() {
            let fitted = line
                .map(|(a, b)| format!("{:.4}", a + b * k as f64))
                .unwrap_or_default();
            let phi = bin.phi[k]
                .map(|p| format!("{p:.4}"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{:.1},{},{},{:.4},{},{}",
                bin.lambda,
                k,
                nk,
                *nk as f64 / bin.n as f64,
                fitted,
                phi
            );
        }
    }
    out
}

pub const COMPARISON_CSV_HEADER: &str = "model,df,s2,aic";

pub fn write_comparison_csv(rows: &[ModelComparisonRow]) -> String {
    let mut out = String::from(COMPARISON_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{:.2},{:.1}", r.model, r.df, r.s2, r.aic);
    }
    out
}

/// Standalone SVG of phi(k) points against the theoretical line for each
/// bin with at least `min_n` observations (default intent: 30).
pub fn render_poissonness_svg(bins: &[PoissonnessBin], min_n: usize) -> String {
    let shown: Vec<&PoissonnessBin> = bins.iter().filter(|b| b.n >= min_n).collect();
    let (width, height, margin) = (640.0, 420.0, 50.0);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>"
    );
    if shown.is_empty() {
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">no bins with n >= {min_n}</text>",
            width / 2.0 - 80.0,
            height / 2.0
        );
        svg.push_str("</svg>\n");
        return svg;
    }
    let k_max = shown.iter().map(|b| b.k_max()).max().unwrap_or(1).max(1);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for b in &shown {
        for p in b.phi.iter().flatten() {
            ymin = ymin.min(*p);
            ymax = ymax.max(*p);
        }
        if let Ok((a, s)) = poissonness_line(b.lambda.max(1e-6)) {
            ymin = ymin.min(a).min(a + s * k_max as f64);
            ymax = ymax.max(a).max(a + s * k_max as f64);
        }
    }
    let yspan = (ymax - ymin).max(1e-9);
    let sx = |k: f64| margin + k / k_max as f64 * (width - 2.0 * margin);
    let sy = |p: f64| height - margin - (p - ymin) / yspan * (height - 2.0 * margin);
    let palette = ["steelblue", "firebrick", "seagreen", "darkorange", "purple", "teal"];
    for (i, b) in shown.iter().enumerate() {
        let color = palette[i % palette.len()];
        if let Ok((a, s)) = poissonness_line(b.lambda.max(1e-6)) {
            let _ = writeln!(
                svg,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{color}\" stroke-dasharray=\"4 3\"/>",
                sx(0.0),
                sy(a),
                sx(k_max as f64),
                sy(a + s * k_max as f64)
            );
        }
        for (k, phi) in b.phi.iter().enumerate() {
            if let Some(p) = phi {
                let _ = writeln!(
                    svg,
                    "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"{color}\"/>",
                    sx(k as f64),
                    sy(*p)
                );
            }
        }
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" fill=\"{color}\">lambda {:.1} (n={})</text>",
            width - margin - 130.0,
            margin + 14.0 * (i + 1) as f64,
            b.lambda,
            b.n
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">k</text>",
        width / 2.0,
        height - 12.0
    );
    svg.push_str("</svg>\n");
    svg
}
