//! Bayes' theorem by counting possible worlds, in exact rational arithmetic.
//!
//! Picture enough equally likely worlds that each hypothesis owns a whole
//! number of them in proportion to its prior. Within each hypothesis's
//! worlds, the fraction given by the likelihood are consistent with the
//! observed data; delete the rest. The posterior of a hypothesis is its
//! share of the surviving worlds.
//!
//! For the telepathy example (prior 1/4, likelihood 1; guessing prior 3/4,
//! likelihood 1/50) the smallest such picture has 200 worlds: 50 telepathy
//! worlds that all survive and 150 guessing worlds of which 3 survive, so
//! telepathy ends at 50/53 and guessing at 3/53.

use std::fmt::{self, Write as _};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest tableau [`HypothesisSet::render_worlds`] will build.
pub const MAX_WORLDS: u64 = 1_000_000_000;
/// Largest tableau drawn symbol by symbol in [`WorldTableau::grid`].
pub const MAX_GRID_WORLDS: u64 = 5_000;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"3/4"`, `"0.25"` (as exactly 25/100 = 1/4) or `"1"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::BadRational(text.to_owned());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let numer: BigInt = format!("{whole}{frac}")
        .trim_start_matches('0')
        .parse()
        .unwrap_or_default();
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(numer, denom);
    Ok(if negative { -r } else { r })
}

fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && r <= &Rational::one()
}

fn percent(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN) * 100.0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub prior: Rational,
    /// Probability of the observed data if this hypothesis is true.
    pub likelihood: Rational,
}

impl Hypothesis {
    pub fn new(name: impl Into<String>, prior: Rational, likelihood: Rational) -> Self {
        Self {
            name: name.into(),
            prior,
            likelihood,
        }
    }
}

/// Mutually exclusive hypotheses whose priors sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisSet {
    hypotheses: Vec<Hypothesis>,
}

impl HypothesisSet {
    pub fn new(hypotheses: Vec<Hypothesis>) -> Result<Self> {
        if hypotheses.is_empty() {
            return Err(Error::EmptyData("hypothesis set"));
        }
        for h in &hypotheses {
            if !is_probability(&h.prior) || !is_probability(&h.likelihood) {
                return Err(Error::InvalidArgument(format!(
                    "hypothesis {:?}: prior {} and likelihood {} must lie in [0, 1]",
                    h.name, h.prior, h.likelihood
                )));
            }
        }
        let total: Rational = hypotheses.iter().map(|h| &h.prior).sum();
        if !total.is_one() {
            return Err(Error::PriorsDoNotSumToOne(total.to_string()));
        }
        Ok(Self { hypotheses })
    }

    /// Parses `NAME:PRIOR:LIKELIHOOD` specs.
    pub fn parse<S: AsRef<str>>(specs: &[S]) -> Result<Self> {
        let hypotheses = specs
            .iter()
            .map(|s| {
                let s = s.as_ref();
                let mut parts = s.rsplitn(3, ':');
                let (Some(lik), Some(prior), Some(name)) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(Error::InvalidArgument(format!(
                        "hypothesis {s:?} is not NAME:PRIOR:LIKELIHOOD"
                    )));
                };
                Ok(Hypothesis::new(name, parse_rational(prior)?, parse_rational(lik)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(hypotheses)
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    fn evidence(&self) -> Result<Rational> {
        let total: Rational = self.hypotheses.iter().map(|h| &h.prior * &h.likelihood).sum();
        if total.is_zero() {
            return Err(Error::NoSurvivingWorlds);
        }
        Ok(total)
    }

    /// `prior_i * lik_i / sum_j prior_j * lik_j`, exactly.
    pub fn posterior(&self) -> Result<Vec<(String, Rational)>> {
        let evidence = self.evidence()?;
        Ok(self
            .hypotheses
            .iter()
            .map(|h| (h.name.clone(), &h.prior * &h.likelihood / &evidence))
            .collect())
    }

    /// Posteriors become the priors of a new set paired with
    /// `new_likelihoods` (one per hypothesis, same order).
    pub fn sequential_update(&self, new_likelihoods: &[Rational]) -> Result<Self> {
        if new_likelihoods.len() != self.hypotheses.len() {
            return Err(Error::InvalidArgument(format!(
                "{} likelihoods given for {} hypotheses",
                new_likelihoods.len(),
                self.hypotheses.len()
            )));
        }
        let hypotheses = self
            .posterior()?
            .into_iter()
            .zip(new_likelihoods)
            .map(|((name, post), lik)| Hypothesis::new(name, post, lik.clone()))
            .collect();
        Self::new(hypotheses)
    }

    /// Integer world counts reproducing this set's priors and likelihoods.
    ///
    /// With `minimum` the total is the least common multiple of the
    /// denominators of every prior and every `prior * likelihood`, the
    /// smallest count that works. Otherwise it is the LCM of the prior
    /// denominators times the LCM of the likelihood denominators, which keeps
    /// every hypothesis's world count divisible by its likelihood's
    /// denominator.
    pub fn render_worlds(&self, minimum: bool) -> Result<WorldTableau> {
        self.evidence()?;
        let lcm_of = |it: &mut dyn Iterator<Item = BigInt>| it.fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let total = if minimum {
            lcm_of(
                &mut self
                    .hypotheses
                    .iter()
                    .flat_map(|h| [h.prior.denom().clone(), (&h.prior * &h.likelihood).denom().clone()]),
            )
        } else {
            lcm_of(&mut self.hypotheses.iter().map(|h| h.prior.denom().clone()))
                * lcm_of(&mut self.hypotheses.iter().map(|h| h.likelihood.denom().clone()))
        };
        if total > BigInt::from(MAX_WORLDS) {
            return Err(Error::TableauTooLarge(total.to_string(), MAX_WORLDS));
        }
        let total_worlds = total.to_u64().unwrap_or(u64::MAX);
        let whole = |r: Rational| -> u64 {
            let scaled = r * Rational::from_integer(total.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer().to_u64().unwrap_or(0)
        };
        let rows = self
            .hypotheses
            .iter()
            .map(|h| WorldRow {
                name: h.name.clone(),
                worlds: whole(h.prior.clone()),
                surviving: whole(&h.prior * &h.likelihood),
            })
            .collect();
        Ok(WorldTableau { total_worlds, rows })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldRow {
    pub name: String,
    pub worlds: u64,
    /// Worlds consistent with the observed data.
    pub surviving: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldTableau {
    pub total_worlds: u64,
    pub rows: Vec<WorldRow>,
}

impl WorldTableau {
    pub fn total_surviving(&self) -> u64 {
        self.rows.iter().map(|r| r.surviving).sum()
    }

    /// Posteriors recomputed from survivor counts.
    pub fn posteriors(&self) -> Vec<(String, Rational)> {
        let total = BigInt::from(self.total_surviving());
        self.rows
            .iter()
            .map(|r| (r.name.clone(), Rational::new(BigInt::from(r.surviving), total.clone())))
            .collect()
    }

    /// One line of `✓` (survives) and `×` (deleted) per hypothesis, wrapped at
    /// `width` symbols. Falls back to counts only above [`MAX_GRID_WORLDS`].
    pub fn grid(&self, width: usize) -> String {
        let width = width.max(1);
        let mut out = String::new();
        let name_width = self.rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<nw$}  {} worlds, {} survive",
                r.name,
                r.worlds,
                r.surviving,
                nw = name_width
            );
            if self.total_worlds > MAX_GRID_WORLDS {
                continue;
            }
            let symbols: Vec<char> = (0..r.worlds).map(|i| if i < r.surviving { '✓' } else { '×' }).collect();
            for chunk in symbols.chunks(width) {
                let _ = writeln!(out, "  {}", chunk.iter().collect::<String>());
            }
        }
        out
    }
}

impl fmt::Display for WorldTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} possible worlds", self.total_worlds)?;
        let survivors = self.total_surviving();
        for (r, (_, post)) in self.rows.iter().zip(self.posteriors()) {
            writeln!(
                f,
                "  {}: {} worlds, {} consistent with the data -> {}/{} = {} ({:.2}%)",
                r.name,
                r.worlds,
                r.surviving,
                r.surviving,
                survivors,
                post,
                percent(&post)
            )?;
        }
        Ok(())
    }
}

/// Exact joint probabilities for two yes/no events on successive stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoStageGrid {
    pub both: Rational,
    pub first_only: Rational,
    pub second_only: Rational,
    pub neither: Rational,
}

impl TwoStageGrid {
    /// `P(second)`, summed over the first stage.
    pub fn second_marginal(&self) -> Rational {
        &self.both + &self.second_only
    }

    pub fn first_marginal(&self) -> Rational {
        &self.both + &self.first_only
    }

    pub fn total(&self) -> Rational {
        &self.both + &self.first_only + &self.second_only + &self.neither
    }

    /// Whole numbers of equally likely two-stage possibilities out of the
    /// smallest total that makes all four counts integers.
    pub fn counts(&self) -> (BigUint, [BigUint; 4]) {
        let cells = [&self.both, &self.first_only, &self.second_only, &self.neither];
        let total = cells.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let count = |r: &Rational| {
            (r * Rational::from_integer(total.clone()))
                .to_integer()
                .to_biguint()
                .unwrap_or_default()
        };
        (
            total.to_biguint().unwrap_or_default(),
            [count(cells[0]), count(cells[1]), count(cells[2]), count(cells[3])],
        )
    }
}

pub fn two_stage_grid(
    p_first: &Rational,
    p_second_given_first: &Rational,
    p_second_given_not_first: &Rational,
) -> Result<TwoStageGrid> {
    for p in [p_first, p_second_given_first, p_second_given_not_first] {
        if !is_probability(p) {
            return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
        }
    }
    let one = Rational::one();
    let not_first = &one - p_first;
    Ok(TwoStageGrid {
        both: p_first * p_second_given_first,
        first_only: p_first * (&one - p_second_given_first),
        second_only: &not_first * p_second_given_not_first,
        neither: &not_first * (&one - p_second_given_not_first),
    })
}
