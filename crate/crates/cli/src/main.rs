use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
mod error;
mod output;
mod overlay;
mod provenance;

use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "proxim", version, about = "Distance-decay statistics for social ties")]
pub struct Cli {
    /// JSON object of flag values; explicit command-line flags take precedence.
    #[arg(long, global = true, value_name = "JSON")]
    pub config: Option<PathBuf>,
    /// Seed for every random draw in the run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Suppress the stdout summary.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download the SSA national and per-state name archives.
    Fetch(FetchArgs),
    /// Fit power-law models to a link-distance sample.
    FitDistances(FitArgs),
    /// Run the gravity-model simulation and fit its link distances.
    SimulateGravity(GravityArgs),
    /// Compute the proximity-effect index over state name files.
    ComputePei(PeiArgs),
    /// Write a tile-grid map of one name's share of births per state.
    ExportMap(MapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dataset {
    National,
    States,
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct FetchArgs {
    /// Destination directory; archives unpack into `national/` and `states/`.
    #[arg(long, default_value = "data")]
    pub dest: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub dataset: Dataset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Synthetic {
    Zipf,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    /// Distance sample, one value per line.
    #[arg(long, conflicts_with_all = ["pairs", "synthetic"])]
    pub input: Option<PathBuf>,
    /// CSV of zip pairs (two columns, no header); needs --gazetteer.
    #[arg(long, requires = "gazetteer", conflicts_with = "synthetic")]
    pub pairs: Option<PathBuf>,
    /// CSV with zip, lat and lon columns.
    #[arg(long)]
    pub gazetteer: Option<PathBuf>,
    /// Generate the sample instead of reading one.
    #[arg(long, value_enum)]
    pub synthetic: Option<Synthetic>,
    #[arg(long, default_value_t = 1297)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub rmin: f64,
    #[arg(long, default_value_t = 5000.0)]
    pub rmax: f64,
    /// Fraction of synthetic draws replaced by zero distances.
    #[arg(long, default_value_t = 0.0)]
    pub zero_fraction: f64,
    /// Estimators to run (repeatable); all four by default.
    #[arg(long = "method", value_name = "METHOD")]
    pub methods: Vec<proxim_core::FitMethod>,
    /// Log bins per decade for the density fit.
    #[arg(long, default_value_t = 20.0)]
    pub bins_per_decade: f64,
    /// Lower cutoff for the MLE; the smallest positive value by default.
    #[arg(long)]
    pub mle_rmin: Option<f64>,
    /// Upper cutoff; switches the MLE to the truncated likelihood.
    #[arg(long)]
    pub mle_rmax: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct GravityArgs {
    /// Simulation config (JSON).
    pub config_file: PathBuf,
    /// Lower end of the fit window; defaults to max(r_floor, m·sqrt(G)).
    #[arg(long)]
    pub fit_rmin: Option<f64>,
    /// Upper end of the fit window; defaults to side/4 (torus) or radius/2 (disc).
    #[arg(long)]
    pub fit_rmax: Option<f64>,
    /// Skip writing the per-link CSV.
    #[arg(long)]
    pub no_links: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cohort {
    FirstInsideWindow,
    AllSeeded,
    FirstAfter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TTest {
    Medians,
    Pooled,
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct NameDataArgs {
    /// Directory of per-state files (`ST,Sex,Year,Name,Count`).
    #[arg(long)]
    pub states: PathBuf,
    /// Births per state-year (`state,year,births`), replacing the listed-name proxy.
    #[arg(long)]
    pub totals: Option<PathBuf>,
    /// Names kept per state, year and sex; 0 keeps all listed names.
    #[arg(long, default_value_t = 100)]
    pub top_k: usize,
    /// Skip malformed lines instead of failing.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct PeiArgs {
    #[command(flatten)]
    pub data: NameDataArgs,
    /// Directory of national files (`yobYYYY.txt`) for the coverage audit.
    #[arg(long)]
    pub national: Option<PathBuf>,
    #[arg(long, default_value_t = 1970)]
    pub start: i32,
    #[arg(long, default_value_t = 2005)]
    pub end: i32,
    /// First year loaded for seeding history; defaults to --start.
    #[arg(long)]
    pub history_start: Option<i32>,
    #[arg(long, default_value_t = 1995)]
    pub breakpoint: i32,
    #[arg(long, value_enum, default_value = "first-inside-window")]
    pub cohort: Cohort,
    /// Year for `--cohort first-after`.
    #[arg(long)]
    pub cohort_year: Option<i32>,
    /// Border pairs (`ST1,ST2`) replacing the builtin table.
    #[arg(long)]
    pub adjacency: Option<PathBuf>,
    /// Count the Four Corners point contacts as borders.
    #[arg(long)]
    pub corner_pairs: bool,
    #[arg(long, value_enum, default_value = "both")]
    pub t_test: TTest,
}

#[derive(Debug, Args, Serialize)]
pub struct MapArgs {
    #[command(flatten)]
    pub data: NameDataArgs,
    #[arg(long)]
    pub name: String,
    #[arg(long, value_parser = parse_sex)]
    pub sex: proxim_core::Sex,
    #[arg(long)]
    pub year: i32,
}

fn parse_sex(s: &str) -> Result<proxim_core::Sex, String> {
    s.parse().map_err(|e: proxim_core::Error| e.to_string())
}

fn run(args: Vec<OsString>) -> CliResult<()> {
    let args = overlay::apply(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            print!("{e}");
            return Ok(());
        }
        Err(e) => {
            let msg = e.to_string();
            let msg = msg.strip_prefix("error: ").unwrap_or(&msg).trim_end();
            return Err(CliError::Usage(msg.to_string()));
        }
    };
    commands::dispatch(&cli)
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
