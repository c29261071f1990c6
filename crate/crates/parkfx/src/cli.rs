//! Command-line front end: one subcommand per pipeline stage, a flat
//! key=value config file, and flag overrides.
//!
//! Exit codes: 0 success, 2 usage error, 3 data/config error, 4 model
//! non-convergence.

use std::path::PathBuf;

use clap::{ArgAction, Parser, Subcommand};

use crate::config::PipelineConfig;
use crate::error::Result;
use crate::ingest::UnknownPlayerPolicy;
use crate::pipeline;

#[derive(Debug, Parser)]
#[command(
    name = "parkfx",
    about = "Personnel-adjusted home-run park effects from play-by-play data",
    version
)]
pub struct Cli {
    /// Key=value config file; flags below override its settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// RNG seed for simulation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Directory for all artifacts.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    /// Model to fit: full | park,season | personnel,season | zb,season | zp,season
    #[arg(long, global = true)]
    pub subset: Option<String>,

    /// Fail on plays referencing players missing from the rosters.
    #[arg(long, global = true, action = ArgAction::SetTrue, conflicts_with = "skip_unknown")]
    pub strict: bool,

    /// Skip plays referencing players missing from the rosters.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    pub skip_unknown: bool,

    /// Print the effective configuration and exit.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    pub print_config: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse event and roster files into the plate-appearance table.
    Ingest {
        /// Directory of Retrosheet .EV* event files.
        #[arg(long)]
        events: Option<PathBuf>,
        /// Directory of .ROS roster files.
        #[arg(long)]
        rosters: Option<PathBuf>,
    },
    /// Build elsewhere covariates and the game-matchup observation table.
    Build,
    /// Fit the model and write model.json.
    Fit,
    /// Write adjusted-mean tables, ranks, and the ECDF plot.
    Adjust,
    /// Write Poissonness artifacts and the subset-model comparison.
    Diagnose,
    /// Write the division ANOVA of |delta rank|.
    Anova,
    /// Generate a synthetic corpus and truth record.
    Simulate,
    /// Score the fitted model against the simulation truth.
    Recover,
    /// Classical home-run park factors from a per-team counts CSV.
    Hrpf {
        /// CSV: team,hr_hit_home,hr_allowed_home,games_home,hr_hit_road,hr_allowed_road,games_road
        counts: PathBuf,
    },
}

fn effective_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(dir) = &cli.out_dir {
        config.out_dir = dir.clone();
    }
    if let Some(subset) = &cli.subset {
        config.set("subset", subset)?;
    }
    if cli.strict {
        config.unknown_players = UnknownPlayerPolicy::Strict;
    }
    if cli.skip_unknown {
        config.unknown_players = UnknownPlayerPolicy::Skip;
    }
    Ok(config)
}

fn dispatch(cli: &Cli) -> Result<()> {
    let mut config = effective_config(cli)?;
    if cli.print_config {
        print!("{}", config.print());
        return Ok(());
    }
    let Some(command) = &cli.command else {
        unreachable!("run() rejects missing subcommands before dispatch");
    };
    match command {
        Command::Ingest { events, rosters } => {
            if let Some(dir) = events {
                config.event_dir = dir.clone();
            }
            if let Some(dir) = rosters {
                config.roster_dir = dir.clone();
            }
            let n = pipeline::run_ingest(&config)?;
            eprintln!("ingest: {n} plate appearances");
        }
        Command::Build => {
            let n = pipeline::run_build(&config)?;
            eprintln!("build: {n} game-matchup observations");
        }
        Command::Fit => {
            let model = pipeline::run_fit(&config)?;
            eprintln!(
                "fit: {} loglik {:.3} sigma2_season {:.5}",
                config.subset, model.loglik, model.sigma2_season
            );
            for w in &model.warnings {
                eprintln!("fit: warning: {w}");
            }
        }
        Command::Adjust => pipeline::run_adjust(&config)?,
        Command::Diagnose => pipeline::run_diagnose(&config)?,
        Command::Anova => pipeline::run_anova(&config)?,
        Command::Simulate => {
            let n = pipeline::run_simulate(&config)?;
            eprintln!("simulate: {n} observations (seed {})", config.seed);
        }
        Command::Recover => {
            let coverage = pipeline::run_recover(&config)?;
            eprintln!("recover: {:.1}% of effects within 2 SEs", coverage * 100.0);
        }
        Command::Hrpf { counts } => pipeline::run_hrpf(&config, counts)?,
    }
    Ok(())
}

/// Parse `args` (including the program name) and run; returns the process
/// exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap uses exit code 2 for usage errors and 0 for --help/--version
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.command.is_none() && !cli.print_config {
        use clap::CommandFactory;
        let _ = Cli::command().print_help();
        return 2;
    }
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
