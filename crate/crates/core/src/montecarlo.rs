//! Forward simulation: repeated Bernoulli trials and opinion polls, with
//! exact binomial probabilities to check them against.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::resampling::{percentile_sorted, ResampleConfig, ResampleMode};
use crate::rng::SeededGenerator;

/// `C(n, k) p^k (1-p)^(n-k)`, exactly.
pub fn exact_binomial(n: u32, k: u32, p: &BigRational) -> Result<BigRational> {
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    if p.is_negative() || p > &BigRational::one() {
        return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
    }
    let coefficient = binomial(n, k);
    let q = BigRational::one() - p;
    Ok(BigRational::from_integer(BigInt::from(coefficient))
        * num_traits::pow(p.clone(), k as usize)
        * num_traits::pow(q, (n - k) as usize))
}

fn binomial(n: u32, k: u32) -> BigUint {
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(n - i) / BigUint::from(i + 1)
    })
}

/// Which success counts count as the event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountEvent {
    Exactly(u32),
    AtLeast(u32),
    AtMost(u32),
}

impl CountEvent {
    pub fn holds(self, successes: u32) -> bool {
        match self {
            CountEvent::Exactly(k) => successes == k,
            CountEvent::AtLeast(k) => successes >= k,
            CountEvent::AtMost(k) => successes <= k,
        }
    }

    /// Exact probability of the event for `n` trials.
    pub fn exact_probability(self, n: u32, p: &BigRational) -> Result<BigRational> {
        let mut total = BigRational::from_integer(BigInt::from(0));
        for k in (0..=n).filter(|&k| self.holds(k)) {
            total += exact_binomial(n, k, p)?;
        }
        Ok(total)
    }
}

impl fmt::Display for CountEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountEvent::Exactly(k) => write!(f, "exactly {k}"),
            CountEvent::AtLeast(k) => write!(f, "at least {k}"),
            CountEvent::AtMost(k) => write!(f, "at most {k}"),
        }
    }
}

impl FromStr for CountEvent {
    type Err = Error;

    /// `exactly K`, `at-least K` / `atleast K` / `at least K`, `at-most K`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse event {s:?}"));
        let words: Vec<&str> = s.split_whitespace().collect();
        let (kind, num) = match words.as_slice() {
            [kind, num] => (kind.to_string(), *num),
            [a, b, num] => (format!("{a}-{b}"), *num),
            _ => return Err(bad()),
        };
        let k: u32 = num.parse().map_err(|_| bad())?;
        match kind.as_str() {
            "exactly" => Ok(CountEvent::Exactly(k)),
            "at-least" | "atleast" => Ok(CountEvent::AtLeast(k)),
            "at-most" | "atmost" => Ok(CountEvent::AtMost(k)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliExperiment {
    pub trials_per_run: u32,
    pub success_probability: BigRational,
    pub event: CountEvent,
}

impl BernoulliExperiment {
    pub fn new(trials_per_run: u32, success_probability: BigRational, event: CountEvent) -> Result<Self> {
        if trials_per_run == 0 {
            return Err(Error::InvalidArgument("need at least one trial per run".into()));
        }
        if success_probability.is_negative() || success_probability > BigRational::one() {
            return Err(Error::InvalidArgument(format!(
                "probability {success_probability} outside [0, 1]"
            )));
        }
        Ok(Self {
            trials_per_run,
            success_probability,
            event,
        })
    }

    pub fn exact(&self) -> Result<BigRational> {
        self.event
            .exact_probability(self.trials_per_run, &self.success_probability)
    }
}

/// Outcome of [`simulate_bernoulli`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationEstimate {
    pub hits: u64,
    pub runs: u64,
    pub seed: u64,
}

impl SimulationEstimate {
    pub fn probability(&self) -> f64 {
        self.hits as f64 / self.runs as f64
    }

    pub fn standard_error(&self) -> f64 {
        let p = self.probability();
        (p * (1.0 - p) / self.runs as f64).sqrt()
    }
}

/// Fraction of runs whose success count satisfies the experiment's event.
/// Run `i` uses `substream(seed, i)`.
pub fn simulate_bernoulli(e: &BernoulliExperiment, config: ResampleConfig) -> Result<SimulationEstimate> {
    let event = e.event;
    simulate_bernoulli_with(e.trials_per_run, &e.success_probability, config, move |s| {
        event.holds(s)
    })
}

/// Like [`simulate_bernoulli`] with any predicate on the success count.
pub fn simulate_bernoulli_with<F>(
    trials_per_run: u32,
    success_probability: &BigRational,
    config: ResampleConfig,
    predicate: F,
) -> Result<SimulationEstimate>
where
    F: Fn(u32) -> bool + Sync,
{
    if config.replicates == 0 {
        return Err(Error::TooFew {
            what: "runs",
            needed: 1,
            got: 0,
        });
    }
    if success_probability.is_negative() || success_probability > &BigRational::one() {
        return Err(Error::InvalidArgument(format!(
            "probability {success_probability} outside [0, 1]"
        )));
    }
    let p = success_probability.to_f64().unwrap_or(f64::NAN);
    let run = |i: usize| {
        let mut gen = SeededGenerator::substream(config.seed, i as u64);
        let successes = (0..trials_per_run).filter(|_| gen.next_f64() < p).count() as u32;
        predicate(successes)
    };
    let hits = if config.parallel {
        (0..config.replicates).into_par_iter().filter(|&i| run(i)).count()
    } else {
        (0..config.replicates).filter(|&i| run(i)).count()
    };
    Ok(SimulationEstimate {
        hits: hits as u64,
        runs: config.replicates as u64,
        seed: config.seed,
    })
}

/// A finite population of yes (1) / no (0) answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationVector {
    entries: Vec<u8>,
}

impl PopulationVector {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyData("population"));
        }
        if let Some(i) = entries.iter().position(|&e| e > 1) {
            return Err(Error::InvalidArgument(format!(
                "population entry {} is {}, expected 0 or 1",
                i + 1,
                entries[i]
            )));
        }
        Ok(Self { entries })
    }

    /// `ones` ones followed by `size - ones` zeros.
    pub fn with_counts(ones: usize, size: usize) -> Result<Self> {
        if ones > size {
            return Err(Error::InvalidArgument(format!("{ones} ones in a population of {size}")));
        }
        let mut entries = vec![1u8; ones];
        entries.resize(size, 0);
        Self::new(entries)
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ones(&self) -> usize {
        self.entries.iter().filter(|&&e| e == 1).count()
    }

    pub fn proportion(&self) -> f64 {
        self.ones() as f64 / self.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PollSummary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// 2.5th percentile.
    pub low: f64,
    /// 97.5th percentile.
    pub high: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PollResult {
    pub proportions: Vec<f64>,
    pub summary: PollSummary,
    pub sample_size: usize,
    pub mode: ResampleMode,
    pub seed: u64,
}

/// `polls` independent polls of `sample_size` entries each. Without
/// replacement the sample is the first `sample_size` entries of a partial
/// Fisher–Yates shuffle.
pub fn simulate_poll(
    population: &PopulationVector,
    sample_size: usize,
    mode: ResampleMode,
    config: ResampleConfig,
) -> Result<PollResult> {
    let n = population.len();
    if sample_size == 0 {
        return Err(Error::InvalidArgument("poll sample size must be at least 1".into()));
    }
    if mode == ResampleMode::WithoutReplacement && sample_size > n {
        return Err(Error::InvalidArgument(format!(
            "cannot poll {sample_size} without replacement from a population of {n}"
        )));
    }
    if config.replicates < 2 {
        return Err(Error::TooFew {
            what: "polls",
            needed: 2,
            got: config.replicates,
        });
    }
    let entries = population.entries();
    let poll = |i: usize| -> f64 {
        let mut gen = SeededGenerator::substream(config.seed, i as u64);
        let yes: usize = match mode {
            ResampleMode::WithReplacement => (0..sample_size).map(|_| usize::from(entries[gen.index(n)])).sum(),
            ResampleMode::WithoutReplacement => {
                let mut pool = entries.to_vec();
                gen.partial_shuffle(&mut pool, sample_size);
                pool[..sample_size].iter().map(|&e| usize::from(e)).sum()
            }
        };
        yes as f64 / sample_size as f64
    };
    let proportions: Vec<f64> = if config.parallel {
        (0..config.replicates).into_par_iter().map(poll).collect()
    } else {
        (0..config.replicates).map(poll).collect()
    };
    let mut sorted = proportions.clone();
    sorted.sort_by(f64::total_cmp);
    let summary = PollSummary {
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        mean: proportions.iter().sum::<f64>() / proportions.len() as f64,
        low: percentile_sorted(&sorted, 0.025),
        high: percentile_sorted(&sorted, 0.975),
    };
    Ok(PollResult {
        proportions,
        summary,
        sample_size,
        mode,
        seed: config.seed,
    })
}
