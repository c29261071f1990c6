//! Personnel-adjusted home-run park effects from play-by-play data.
//!
//! The pipeline: parse Retrosheet-style event files into plate appearances,
//! summarize each batter's and pitcher's home-run rate *elsewhere* (away
//! from the park in question), aggregate to game-by-matchup counts, fit a
//! Poisson mixed model with park-by-matchup effects and random season
//! effects, then report adjusted park means, ranks, and diagnostics.

pub mod cli;
pub mod config;
pub mod covariates;
pub mod diagnostics;
pub mod division_anova;
pub mod error;
pub mod glmm;
pub mod ingest;
pub mod matchup;
pub mod park_effects;
pub mod parks;
pub mod pipeline;
pub mod simulate;

pub use error::{Error, Result};
pub use matchup::{Bats, Hand, Matchup};
