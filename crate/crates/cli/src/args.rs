use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "resample",
    version,
    about = "Shuffle tests, bootstrap confidence distributions and tentative probabilities",
    long_about = "Every command that draws random numbers takes --seed (default 0, or \
                  RESAMPLE_SEED) and prints it with the result. Re-running with the same \
                  seed and replicate count gives byte-identical output. Trying seed after \
                  seed until a result looks good defeats the point of a p value; report \
                  the seed you started with."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalArgs {
    /// Seed for all random draws.
    #[arg(long, global = true, env = "RESAMPLE_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the histogram (as CSV) to this file instead of the report.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Run replicates on all cores. Results are identical to a serial run.
    #[arg(long, global = true)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shuffle (randomization) test of a difference between two groups, or of a correlation.
    ShuffleTest(ShuffleTestArgs),
    /// Bootstrap confidence distribution, percentile interval and tail probabilities.
    Bootstrap(BootstrapArgs),
    /// Tentative probabilities from a published confidence interval or p value.
    Clip(ClipArgs),
    /// Bayes' theorem with exact fractions, optionally drawn as possible worlds.
    Bayes(BayesArgs),
    /// Monte Carlo estimate of a probability for repeated yes/no trials.
    Montecarlo(MonteCarloArgs),
    /// Simulated opinion polls from a finite electorate.
    Poll(PollArgs),
    /// List the built-in datasets, or print one as CSV.
    Fixtures(FixturesArgs),
}

#[derive(Debug, Args, Clone)]
pub struct InputArgs {
    /// Built-in dataset (see `fixtures`).
    #[arg(long, conflicts_with = "csv")]
    pub fixture: Option<String>,

    /// CSV file with a header row.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Column holding the values.
    #[arg(long, default_value = "value")]
    pub value: String,

    /// Column holding the two group labels.
    #[arg(long)]
    pub group: Option<String>,

    /// For correlation: the x column.
    #[arg(long, requires = "y")]
    pub x: Option<String>,

    /// For correlation: the y column.
    #[arg(long, requires = "x")]
    pub y: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SidednessArg {
    TwoSided,
    Greater,
    Less,
}

#[derive(Debug, Args)]
pub struct ShuffleTestArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// mean-diff, prop-diff or correlation.
    #[arg(long, default_value = "mean-diff")]
    pub stat: String,

    /// Number of shuffles.
    #[arg(long = "n", default_value_t = 1000)]
    pub replicates: usize,

    #[arg(long, value_enum, default_value_t = SidednessArg::TwoSided)]
    pub sidedness: SidednessArg,

    /// Enumerate every group assignment instead of shuffling.
    #[arg(long)]
    pub exact: bool,

    /// Histogram bin width (default 2, or 0.05 for proportions and correlations).
    #[arg(long)]
    pub bin_width: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// mean, mean-diff, prop-diff or correlation (default: mean, or mean-diff for grouped data).
    #[arg(long)]
    pub stat: Option<String>,

    #[arg(long = "n", default_value_t = 1000)]
    pub replicates: usize,

    /// Level of the percentile interval.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    /// Report the fraction of resamples at or above this value (repeatable).
    #[arg(long = "tail", allow_hyphen_values = true)]
    pub tails: Vec<f64>,

    /// Count strictly above the --tail thresholds instead of at or above.
    #[arg(long)]
    pub strict: bool,

    /// Measurement scale bounds MIN,MAX for the impossible-value check.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub bounds: Option<(f64, f64)>,

    /// Histogram bin width (default 2, or 0.05 for proportions and correlations).
    #[arg(long)]
    pub bin_width: Option<f64>,

    /// Skewness above which the distribution is flagged as asymmetric.
    #[arg(long, default_value_t = resample_core::resampling::DEFAULT_SKEW_THRESHOLD)]
    pub skew_threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Normal,
    T,
}

#[derive(Debug, Args)]
pub struct ClipArgs {
    /// Confidence interval LOW,HIGH.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub ci: Option<(f64, f64)>,

    /// Confidence level of --ci.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    /// Two-sided p value.
    #[arg(long, requires = "estimate")]
    pub p: Option<f64>,

    /// Point estimate.
    #[arg(long, allow_hyphen_values = true)]
    pub estimate: Option<f64>,

    /// Baseline value: 0 for differences, 1 for ratios.
    #[arg(long = "null", default_value_t = 0.0, allow_hyphen_values = true)]
    pub null_value: f64,

    #[arg(long, value_enum, default_value_t = FamilyArg::Normal)]
    pub family: FamilyArg,

    /// Degrees of freedom for --family t.
    #[arg(long)]
    pub df: Option<u32>,

    /// Calibrate on the log scale (ratios).
    #[arg(long)]
    pub log_scale: bool,

    /// "gt X", "lt X", "between X1,X2" or "outside X1,X2" (repeatable).
    #[arg(long = "query", allow_hyphen_values = true)]
    pub queries: Vec<String>,

    /// Standard errors between estimate and interval midpoint before warning.
    #[arg(long, default_value_t = resample_core::clip::DEFAULT_ASYMMETRY_THRESHOLD)]
    pub asymmetry_threshold: f64,

    /// 2x2 counts A,B,C,D (group 1 events/non-events, group 2 events/non-events)
    /// for odds and risk ratios.
    #[arg(long, value_parser = parse_table)]
    pub table: Option<[u64; 4]>,
}

#[derive(Debug, Args)]
pub struct BayesArgs {
    /// NAME:PRIOR:LIKELIHOOD, with fractions or decimals (repeatable).
    #[arg(long = "hypothesis")]
    pub hypotheses: Vec<String>,

    /// Draw the possible-worlds tableau.
    #[arg(long)]
    pub worlds: bool,

    /// Use the simple (prior denominators x likelihood denominators) world count.
    #[arg(long)]
    pub full_worlds: bool,

    /// Likelihoods L1,L2,... for a further round of evidence (repeatable).
    #[arg(long = "update")]
    pub updates: Vec<String>,

    /// Two-stage grid P1,P2_GIVEN_1,P2_GIVEN_NOT_1 instead of hypotheses.
    #[arg(long, conflicts_with = "hypotheses")]
    pub two_stage: Option<String>,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    /// Trials per run.
    #[arg(long)]
    pub trials: u32,

    /// Success probability per trial (fraction or decimal).
    #[arg(long = "p", default_value = "1/2")]
    pub probability: String,

    /// "exactly K", "at-least K" or "at-most K".
    #[arg(long)]
    pub event: String,

    #[arg(long, default_value_t = 1000)]
    pub runs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    With,
    Without,
}

#[derive(Debug, Args)]
pub struct PollArgs {
    /// Built-in population (poll500).
    #[arg(long, conflicts_with_all = ["yes", "size"])]
    pub fixture: Option<String>,

    /// Number of yes voters in the electorate.
    #[arg(long, requires = "size")]
    pub yes: Option<usize>,

    /// Size of the electorate.
    #[arg(long, requires = "yes")]
    pub size: Option<usize>,

    /// Electors per poll.
    #[arg(long)]
    pub k: usize,

    /// Sample with or without replacement.
    #[arg(long, value_enum, default_value_t = ModeArg::Without)]
    pub mode: ModeArg,

    /// Number of polls.
    #[arg(long = "n", default_value_t = 1000)]
    pub polls: usize,

    #[arg(long, default_value_t = 0.02)]
    pub bin_width: f64,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    /// Print this dataset as CSV.
    #[arg(long)]
    pub show: Option<String>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two numbers separated by a comma, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_table(s: &str) -> Result<[u64; 4], String> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| format!("expected four counts A,B,C,D, got {s:?}"))
}
