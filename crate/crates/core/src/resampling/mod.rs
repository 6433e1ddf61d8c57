//! Shuffle (permutation) tests and bootstrap confidence distributions.
//!
//! Replicate `i` of a run with seed `s` draws all of its randomness from
//! [`SeededGenerator::substream(s, i)`](SeededGenerator::substream), so the
//! list of replicate values is the same whether replicates run serially or
//! in parallel.

mod diagnostics;
mod histogram;
mod summary;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use diagnostics::{diagnostics, DiagnosticsOptions, DiagnosticsReport, DEFAULT_SKEW_THRESHOLD, SMALL_SAMPLE};
pub use histogram::{Histogram, DEFAULT_BIN_WIDTH};
pub use summary::{percentile_interval, percentile_sorted, tail_probability, TailDirection};

use crate::data::{Group, GroupedSample, PairedSample, Sample};
use crate::error::{Error, Result};
use crate::rng::SeededGenerator;
use crate::stats::{grouped_value, pearson, Statistic};

pub const DEFAULT_REPLICATES: usize = 1000;
/// Upper bound on `C(n, n1)` for exact enumeration.
pub const EXACT_LIMIT: u128 = 1_000_000;
/// Redraws allowed for a single bootstrap replicate before giving up.
const MAX_REDRAWS: u64 = 10_000;
/// Relative slack when deciding whether a replicate is at least as extreme
/// as the observed statistic, so equal values reached by a different
/// summation order still count as ties.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResampleConfig {
    pub replicates: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for ResampleConfig {
    fn default() -> Self {
        Self {
            replicates: DEFAULT_REPLICATES,
            seed: 0,
            parallel: false,
        }
    }
}

impl ResampleConfig {
    pub fn new(replicates: usize, seed: u64) -> Self {
        Self {
            replicates,
            seed,
            parallel: false,
        }
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResampleMode {
    WithReplacement,
    WithoutReplacement,
}

impl fmt::Display for ResampleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResampleMode::WithReplacement => "with-replacement",
            ResampleMode::WithoutReplacement => "without-replacement",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sidedness {
    #[default]
    TwoSided,
    /// Replicates at or above the observed value.
    Greater,
    /// Replicates at or below the observed value.
    Less,
}

impl Sidedness {
    pub fn name(self) -> &'static str {
        match self {
            Sidedness::TwoSided => "two-sided",
            Sidedness::Greater => "greater",
            Sidedness::Less => "less",
        }
    }

    /// Whether `replicate` is at least as extreme as `observed`, ties
    /// included.
    pub fn is_extreme(self, replicate: f64, observed: f64) -> bool {
        let slack = TIE_TOLERANCE * observed.abs().max(1.0);
        match self {
            Sidedness::TwoSided => replicate.abs() >= observed.abs() - slack,
            Sidedness::Greater => replicate >= observed - slack,
            Sidedness::Less => replicate <= observed + slack,
        }
    }
}

impl FromStr for Sidedness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-sided" | "two" => Ok(Sidedness::TwoSided),
            "greater" | "gt" => Ok(Sidedness::Greater),
            "less" | "lt" => Ok(Sidedness::Less),
            other => Err(Error::InvalidArgument(format!("unknown sidedness {other:?}"))),
        }
    }
}

/// Statistic values from `N` resamples plus what produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ResampleDistribution {
    values: Vec<f64>,
    seed: u64,
    mode: ResampleMode,
    statistic: Statistic,
    observed: f64,
    sample_size: usize,
    redraws: u64,
}

impl ResampleDistribution {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn replicates(&self) -> usize {
        self.values.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> ResampleMode {
        self.mode
    }

    pub fn statistic(&self) -> Statistic {
        self.statistic
    }

    /// The statistic on the original data.
    pub fn observed(&self) -> f64 {
        self.observed
    }

    /// Number of rows in the original data.
    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    /// Bootstrap replicates thrown away because a group came out empty or a
    /// correlation was undefined.
    pub fn redraws(&self) -> u64 {
        self.redraws
    }

    pub fn percentile_interval(&self, level: f64) -> Result<(f64, f64)> {
        percentile_interval(&self.values, level)
    }

    pub fn tail_probability(&self, threshold: f64, direction: TailDirection) -> f64 {
        tail_probability(&self.values, threshold, direction)
    }

    pub fn histogram(&self, bin_width: f64) -> Histogram {
        Histogram::new(&self.values, bin_width)
    }

    pub fn diagnostics(&self, options: DiagnosticsOptions) -> DiagnosticsReport {
        diagnostics(self, options)
    }
}

/// Outcome of a shuffle test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub statistic: Statistic,
    pub observed: f64,
    pub sidedness: Sidedness,
    /// Replicates at least as extreme as the observed statistic.
    pub extreme_count: usize,
    pub p_value: f64,
    pub distribution: ResampleDistribution,
}

impl TestReport {
    pub fn replicates(&self) -> usize {
        self.distribution.replicates()
    }

    pub fn seed(&self) -> u64 {
        self.distribution.seed()
    }

    pub fn histogram(&self, bin_width: f64) -> Histogram {
        self.distribution.histogram(bin_width)
    }

    /// Binomial standard error of the Monte Carlo p value.
    pub fn standard_error(&self) -> f64 {
        (self.p_value * (1.0 - self.p_value) / self.replicates() as f64).sqrt()
    }

    fn from_distribution(distribution: ResampleDistribution, sidedness: Sidedness) -> Self {
        let observed = distribution.observed();
        let extreme_count = distribution
            .values()
            .iter()
            .filter(|&&v| sidedness.is_extreme(v, observed))
            .count();
        Self {
            statistic: distribution.statistic(),
            observed,
            sidedness,
            extreme_count,
            p_value: extreme_count as f64 / distribution.replicates() as f64,
            distribution,
        }
    }
}

fn run_replicates<F>(config: ResampleConfig, replicate: F) -> Result<(Vec<f64>, u64)>
where
    F: Fn(&mut SeededGenerator) -> Result<(f64, u64)> + Sync,
{
    let one = |i: usize| replicate(&mut SeededGenerator::substream(config.seed, i as u64));
    let results: Vec<(f64, u64)> = if config.parallel {
        (0..config.replicates).into_par_iter().map(one).collect::<Result<_>>()?
    } else {
        (0..config.replicates).map(one).collect::<Result<_>>()?
    };
    let redraws = results.iter().map(|r| r.1).sum();
    Ok((results.into_iter().map(|r| r.0).collect(), redraws))
}

fn check_replicates(config: &ResampleConfig) -> Result<()> {
    if config.replicates == 0 {
        return Err(Error::TooFew {
            what: "replicates",
            needed: 1,
            got: 0,
        });
    }
    Ok(())
}

/// Shuffle test for a two-group statistic.
///
/// Each replicate shuffles the values and deals them back to the original
/// group labels, so group sizes are kept and values are only relabelled.
pub fn shuffle_test(
    data: &GroupedSample,
    statistic: Statistic,
    config: ResampleConfig,
    sidedness: Sidedness,
) -> Result<TestReport> {
    check_replicates(&config)?;
    let observed = statistic.on_grouped(data)?;
    let groups = data.groups();
    let (values, _) = run_replicates(config, |gen| {
        let mut shuffled = data.values().to_vec();
        gen.shuffle(&mut shuffled);
        // Both groups keep their original nonzero sizes.
        Ok((grouped_value(&shuffled, groups).unwrap_or(0.0), 0))
    })?;
    let distribution = ResampleDistribution {
        values,
        seed: config.seed,
        mode: ResampleMode::WithoutReplacement,
        statistic,
        observed,
        sample_size: data.len(),
        redraws: 0,
    };
    Ok(TestReport::from_distribution(distribution, sidedness))
}

/// Shuffle test for correlation: the `y` column is shuffled against the
/// fixed `x` column.
pub fn shuffle_test_paired(data: &PairedSample, config: ResampleConfig, sidedness: Sidedness) -> Result<TestReport> {
    check_replicates(&config)?;
    if data.len() < 3 {
        return Err(Error::TooFew {
            what: "pairs",
            needed: 3,
            got: data.len(),
        });
    }
    let observed = pearson(data.x(), data.y())?;
    let (values, _) = run_replicates(config, |gen| {
        let mut y = data.y().to_vec();
        gen.shuffle(&mut y);
        // A permutation of y keeps its variance, so this cannot fail.
        Ok((pearson(data.x(), &y)?, 0))
    })?;
    let distribution = ResampleDistribution {
        values,
        seed: config.seed,
        mode: ResampleMode::WithoutReplacement,
        statistic: Statistic::PearsonCorrelation,
        observed,
        sample_size: data.len(),
        redraws: 0,
    };
    Ok(TestReport::from_distribution(distribution, sidedness))
}

/// Exact p value from every way of choosing which rows form the first group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactTest {
    pub extreme_count: u64,
    pub assignments: u64,
}

impl ExactTest {
    pub fn p_value(&self) -> f64 {
        self.extreme_count as f64 / self.assignments as f64
    }
}

pub fn binomial_coefficient(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // Exact at every step: c * (n - i) is divisible by i + 1.
        c = c.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    c
}

/// Two-sided (or one-sided) p value over all `C(n, n1)` group assignments,
/// ties inclusive.
pub fn enumerate_exact(data: &GroupedSample, statistic: Statistic, sidedness: Sidedness) -> Result<ExactTest> {
    let observed = statistic.on_grouped(data)?;
    let n = data.len();
    let k = data.count(Group::First);
    let count = binomial_coefficient(n, k);
    if count > EXACT_LIMIT {
        return Err(Error::EnumerationTooLarge {
            n,
            k,
            count,
            limit: EXACT_LIMIT,
        });
    }
    let values = data.values();
    let total: f64 = values.iter().sum();
    let n2 = (n - k) as f64;
    let mut chosen: Vec<usize> = (0..k).collect();
    let mut extreme = 0u64;
    let mut assignments = 0u64;
    loop {
        let first: f64 = chosen.iter().map(|&i| values[i]).sum();
        let diff = first / k as f64 - (total - first) / n2;
        if sidedness.is_extreme(diff, observed) {
            extreme += 1;
        }
        assignments += 1;

        // Next k-combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(ExactTest {
                    extreme_count: extreme,
                    assignments,
                });
            }
            i -= 1;
            if chosen[i] < n - k + i {
                break;
            }
        }
        chosen[i] += 1;
        for j in i + 1..k {
            chosen[j] = chosen[j - 1] + 1;
        }
    }
}

/// Borrowed input for [`bootstrap`].
#[derive(Debug, Clone, Copy)]
pub enum DataRef<'a> {
    Sample(&'a Sample),
    Grouped(&'a GroupedSample),
    Paired(&'a PairedSample),
}

impl<'a> From<&'a Sample> for DataRef<'a> {
    fn from(s: &'a Sample) -> Self {
        DataRef::Sample(s)
    }
}

impl<'a> From<&'a GroupedSample> for DataRef<'a> {
    fn from(s: &'a GroupedSample) -> Self {
        DataRef::Grouped(s)
    }
}

impl<'a> From<&'a PairedSample> for DataRef<'a> {
    fn from(s: &'a PairedSample) -> Self {
        DataRef::Paired(s)
    }
}

impl DataRef<'_> {
    fn len(&self) -> usize {
        match self {
            DataRef::Sample(s) => s.len(),
            DataRef::Grouped(g) => g.len(),
            DataRef::Paired(p) => p.len(),
        }
    }
}

/// Bootstrap: each replicate draws `n` whole rows with replacement and
/// evaluates the statistic.
///
/// For grouped data a replicate that leaves a group empty is redrawn, as is
/// a paired replicate whose correlation is undefined; the number of redraws
/// is recorded on the distribution.
pub fn bootstrap<'a>(
    data: impl Into<DataRef<'a>>,
    statistic: Statistic,
    config: ResampleConfig,
) -> Result<ResampleDistribution> {
    check_replicates(&config)?;
    let data = data.into();
    let n = data.len();
    let (observed, values, redraws) = match data {
        DataRef::Sample(s) => {
            let observed = statistic.on_sample(s)?;
            let xs = s.values();
            let (values, r) = run_replicates(config, |gen| {
                let sum: f64 = (0..n).map(|_| xs[gen.index(n)]).sum();
                Ok((sum / n as f64, 0))
            })?;
            (observed, values, r)
        }
        DataRef::Grouped(g) => {
            let observed = statistic.on_grouped(g)?;
            let (xs, gs) = (g.values(), g.groups());
            let (values, r) = run_replicates(config, |gen| {
                let mut vals = vec![0.0; n];
                let mut grps = vec![Group::First; n];
                for redraw in 0..=MAX_REDRAWS {
                    for slot in 0..n {
                        let i = gen.index(n);
                        vals[slot] = xs[i];
                        grps[slot] = gs[i];
                    }
                    if let Some(v) = grouped_value(&vals, &grps) {
                        return Ok((v, redraw));
                    }
                }
                Err(Error::InvalidArgument(format!(
                    "bootstrap replicate left a group empty {MAX_REDRAWS} times in a row"
                )))
            })?;
            (observed, values, r)
        }
        DataRef::Paired(p) => {
            let observed = statistic.on_paired(p)?;
            let (xs, ys) = (p.x(), p.y());
            let (values, r) = run_replicates(config, |gen| {
                let mut bx = vec![0.0; n];
                let mut by = vec![0.0; n];
                for redraw in 0..=MAX_REDRAWS {
                    for slot in 0..n {
                        let i = gen.index(n);
                        bx[slot] = xs[i];
                        by[slot] = ys[i];
                    }
                    if let Ok(r) = pearson(&bx, &by) {
                        return Ok((r, redraw));
                    }
                }
                Err(Error::ZeroVariance("every bootstrap redraw"))
            })?;
            (observed, values, r)
        }
    };
    Ok(ResampleDistribution {
        values,
        seed: config.seed,
        mode: ResampleMode::WithReplacement,
        statistic,
        observed,
        sample_size: n,
        redraws,
    })
}

/// A requested tail probability and its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailQuery {
    pub threshold: f64,
    pub direction: TailDirection,
    pub probability: f64,
}

/// Everything a bootstrap run reports.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapReport {
    pub observed: f64,
    pub level: f64,
    pub interval: (f64, f64),
    pub tails: Vec<TailQuery>,
    pub histogram: Histogram,
    pub diagnostics: DiagnosticsReport,
    pub distribution: ResampleDistribution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapOptions {
    pub level: f64,
    pub thresholds: Vec<(f64, TailDirection)>,
    pub bin_width: f64,
    pub diagnostics: DiagnosticsOptions,
}

impl Default for BootstrapOptions {
    fn default() -> Self {
        Self {
            level: 0.95,
            thresholds: Vec::new(),
            bin_width: DEFAULT_BIN_WIDTH,
            diagnostics: DiagnosticsOptions::default(),
        }
    }
}

impl BootstrapReport {
    pub fn from_distribution(distribution: ResampleDistribution, options: &BootstrapOptions) -> Result<Self> {
        let interval = distribution.percentile_interval(options.level)?;
        let tails = options
            .thresholds
            .iter()
            .map(|&(threshold, direction)| TailQuery {
                threshold,
                direction,
                probability: distribution.tail_probability(threshold, direction),
            })
            .collect();
        Ok(Self {
            observed: distribution.observed(),
            level: options.level,
            interval,
            tails,
            histogram: distribution.histogram(options.bin_width),
            diagnostics: distribution.diagnostics(options.diagnostics),
            distribution,
        })
    }
}
