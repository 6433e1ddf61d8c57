//! Turning a published confidence interval or p value into a distribution
//! for the population quantity, and querying it.
//!
//! From an interval `(low, high)` at level `L` the distribution is centred
//! on the midpoint with scale `(high - low) / (2 q)`, `q` the `(1 + L) / 2`
//! quantile of the chosen family. From a two-sided p value it is centred on
//! the point estimate with scale `|estimate - null| / q`, `q` the
//! `1 - p / 2` quantile. Ratios are handled on the raw scale unless
//! [`Scale::Log`] is asked for.
//!
//! Both routes assume the sampling distribution is symmetric. When an
//! interval and a point estimate are both available and the estimate sits
//! away from the midpoint, [`asymmetry_warning`] says so.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numeric::{normal_cdf, normal_quantile, normal_sf, t_cdf, t_quantile, t_sf};

pub const DEFAULT_LEVEL: f64 = 0.95;
/// Midpoint-to-estimate distance, in standard errors, above which the
/// interval is treated as noticeably asymmetric.
pub const DEFAULT_ASYMMETRY_THRESHOLD: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Family {
    #[default]
    Normal,
    StudentT {
        df: u32,
    },
}

impl Family {
    pub fn cdf(self, z: f64) -> f64 {
        match self {
            Family::Normal => normal_cdf(z),
            Family::StudentT { df } => t_cdf(z, df),
        }
    }

    pub fn sf(self, z: f64) -> f64 {
        match self {
            Family::Normal => normal_sf(z),
            Family::StudentT { df } => t_sf(z, df),
        }
    }

    pub fn quantile(self, p: f64) -> Result<f64> {
        match self {
            Family::Normal => normal_quantile(p),
            Family::StudentT { df } => t_quantile(p, df),
        }
    }

    fn validate(self) -> Result<Self> {
        match self {
            Family::StudentT { df: 0 } => Err(Error::InvalidArgument("t distribution needs df >= 1".into())),
            f => Ok(f),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Normal => f.write_str("normal"),
            Family::StudentT { df } => write!(f, "t(df={df})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Raw,
    /// Work with logarithms; every interval end, estimate, null value and
    /// query point must be positive.
    Log,
}

impl Scale {
    fn map(self, x: f64, what: &str) -> Result<f64> {
        match self {
            Scale::Raw => Ok(x),
            Scale::Log if x > 0.0 => Ok(x.ln()),
            Scale::Log => Err(Error::InvalidArgument(format!(
                "log scale needs a positive {what}, got {x}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Interval,
    PValue,
}

/// Location-scale model for the population quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibratedDistribution {
    /// Location, on the working scale.
    pub center: f64,
    /// Scale (standard error), on the working scale.
    pub se: f64,
    pub family: Family,
    pub scale: Scale,
    pub source: Source,
}

pub fn calibrate_from_interval(
    low: f64,
    high: f64,
    level: f64,
    family: Family,
    scale: Scale,
) -> Result<CalibratedDistribution> {
    let family = family.validate()?;
    if !low.is_finite() || !high.is_finite() || low >= high {
        return Err(Error::InvalidArgument(format!(
            "interval needs low < high, got ({low}, {high})"
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::ProbabilityOutOfRange(level));
    }
    let (lo, hi) = (scale.map(low, "interval end")?, scale.map(high, "interval end")?);
    let q = family.quantile((1.0 + level) / 2.0)?;
    Ok(CalibratedDistribution {
        center: (lo + hi) / 2.0,
        se: (hi - lo) / (2.0 * q),
        family,
        scale,
        source: Source::Interval,
    })
}

/// `p` is two-sided; `null_value` is the baseline (0 for differences, 1 for
/// ratios).
pub fn calibrate_from_p(
    estimate: f64,
    p: f64,
    null_value: f64,
    family: Family,
    scale: Scale,
) -> Result<CalibratedDistribution> {
    let family = family.validate()?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let (est, null) = (scale.map(estimate, "estimate")?, scale.map(null_value, "null value")?);
    if est == null {
        return Err(Error::InvalidArgument(
            "estimate equals the null value, so the p value does not fix a scale".into(),
        ));
    }
    let q = family.quantile(1.0 - p / 2.0)?;
    Ok(CalibratedDistribution {
        center: est,
        se: (est - null).abs() / q,
        family,
        scale,
        source: Source::PValue,
    })
}

/// Something to ask about the population quantity `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    Greater(f64),
    Less(f64),
    Between(f64, f64),
    Outside(f64, f64),
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Greater(x) => write!(f, "gt {x}"),
            Event::Less(x) => write!(f, "lt {x}"),
            Event::Between(a, b) => write!(f, "between {a},{b}"),
            Event::Outside(a, b) => write!(f, "outside {a},{b}"),
        }
    }
}

impl FromStr for Event {
    type Err = Error;

    /// `gt X`, `lt X`, `between X1,X2` or `outside X1,X2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse query {s:?}"));
        let (kind, rest) = s.trim().split_once(char::is_whitespace).ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let pair = || -> Result<(f64, f64)> {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            Ok((num(a)?, num(b)?))
        };
        match kind {
            "gt" | ">" => Ok(Event::Greater(num(rest)?)),
            "lt" | "<" => Ok(Event::Less(num(rest)?)),
            "between" => pair().map(|(a, b)| Event::Between(a, b)),
            "outside" => pair().map(|(a, b)| Event::Outside(a, b)),
            _ => Err(bad()),
        }
    }
}

impl CalibratedDistribution {
    fn z(&self, x: f64) -> Result<f64> {
        Ok((self.scale.map(x, "query point")? - self.center) / self.se)
    }

    /// `P(θ < x)`
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.family.cdf(self.z(x)?))
    }

    /// `P(θ > x)`
    pub fn sf(&self, x: f64) -> Result<f64> {
        Ok(self.family.sf(self.z(x)?))
    }

    pub fn probability(&self, event: Event) -> Result<f64> {
        match event {
            Event::Greater(x) => self.sf(x),
            Event::Less(x) => self.cdf(x),
            Event::Between(a, b) | Event::Outside(a, b) if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) => Err(
                Error::InvalidArgument(format!("interval query needs x1 < x2, got ({a}, {b})")),
            ),
            Event::Between(a, b) => Ok((self.cdf(b)? - self.cdf(a)?).max(0.0)),
            Event::Outside(a, b) => Ok(self.cdf(a)? + self.sf(b)?),
        }
    }

    /// The location on the original scale.
    pub fn location(&self) -> f64 {
        match self.scale {
            Scale::Raw => self.center,
            Scale::Log => self.center.exp(),
        }
    }
}

/// A warning when `estimate` sits more than `threshold` standard errors from
/// the interval midpoint.
pub fn asymmetry_warning(low: f64, high: f64, estimate: f64, se: f64, threshold: f64) -> Option<String> {
    let midpoint = (low + high) / 2.0;
    let gap = (midpoint - estimate).abs() / se;
    (gap > threshold).then(|| {
        format!(
            "estimate {estimate} is {gap:.2} standard errors from the interval midpoint {midpoint}; \
             the interval looks asymmetric, so a symmetric normal/t model is only a rough guide"
        )
    })
}

/// Counts from a 2x2 table: group 1 has `a` events and `b` non-events,
/// group 2 has `c` events and `d` non-events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoByTwo {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl TwoByTwo {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Result<Self> {
        if a + b == 0 || c + d == 0 {
            return Err(Error::InvalidArgument("each group needs at least one count".into()));
        }
        Ok(Self { a, b, c, d })
    }

    /// `(a/b) / (c/d)`
    pub fn odds_ratio(&self) -> Result<f64> {
        if self.b == 0 {
            return Err(Error::DivisionByZero("odds ratio: group 1 has no non-events (b = 0)"));
        }
        if self.c == 0 {
            return Err(Error::DivisionByZero("odds ratio: group 2 has no events (c = 0)"));
        }
        if self.d == 0 {
            return Err(Error::DivisionByZero("odds ratio: group 2 has no non-events (d = 0)"));
        }
        Ok((self.a as f64 * self.d as f64) / (self.b as f64 * self.c as f64))
    }

    /// `(a/(a+b)) / (c/(c+d))`
    pub fn risk_ratio(&self) -> Result<f64> {
        if self.c == 0 {
            return Err(Error::DivisionByZero("risk ratio: group 2 risk is zero (c = 0)"));
        }
        let r1 = self.a as f64 / (self.a + self.b) as f64;
        let r2 = self.c as f64 / (self.c + self.d) as f64;
        Ok(r1 / r2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(actual: f64, expected: f64, tol: f64) {
        assert!((actual - expected).abs() <= tol, "{actual} vs {expected} (tol {tol})");
    }

    #[test]
    fn interval_route_centres_on_midpoint() {
        let d = calibrate_from_interval(49.0, 72.0, 0.95, Family::Normal, Scale::Raw).unwrap();
        assert_eq!(d.center, 60.5);
        assert_eq!(d.source, Source::Interval);
        close(d.probability(Event::Greater(50.0)).unwrap(), 0.96, 0.005);
        close(d.probability(Event::Greater(60.5)).unwrap(), 0.5, 1e-12);
    }

    #[test]
    fn interval_tails_recover_level() {
        for family in [Family::Normal, Family::StudentT { df: 8 }] {
            let d = calibrate_from_interval(0.79, 0.99, 0.9, family, Scale::Raw).unwrap();
            close(d.probability(Event::Less(0.79)).unwrap(), 0.05, 1e-8);
            close(d.probability(Event::Greater(0.99)).unwrap(), 0.05, 1e-8);
        }
    }

    #[test]
    fn p_route_centres_on_estimate() {
        let d = calibrate_from_p(10.0, 0.02, 0.0, Family::Normal, Scale::Raw).unwrap();
        assert_eq!(d.center, 10.0);
        close(d.probability(Event::Greater(0.0)).unwrap(), 0.99, 1e-12);
        close(d.probability(Event::Greater(5.0)).unwrap(), 0.88, 0.01);
    }

    #[test]
    fn argument_errors() {
        assert!(calibrate_from_interval(2.0, 1.0, 0.95, Family::Normal, Scale::Raw).is_err());
        assert!(calibrate_from_interval(1.0, 2.0, 0.95, Family::StudentT { df: 0 }, Scale::Raw).is_err());
        assert!(calibrate_from_p(1.0, 0.2, 1.0, Family::Normal, Scale::Raw).is_err());
        assert!(calibrate_from_p(1.0, 0.0, 0.0, Family::Normal, Scale::Raw).is_err());
        assert!(calibrate_from_interval(-1.0, 2.0, 0.95, Family::Normal, Scale::Log).is_err());
        let d = calibrate_from_interval(1.0, 2.0, 0.95, Family::Normal, Scale::Raw).unwrap();
        assert!(d.probability(Event::Between(3.0, 2.0)).is_err());
    }

    #[test]
    fn log_scale_is_symmetric_in_logs() {
        let d = calibrate_from_interval(0.5, 2.0, 0.95, Family::Normal, Scale::Log).unwrap();
        close(d.center, 0.0, 1e-12);
        close(d.location(), 1.0, 1e-12);
        close(d.probability(Event::Less(1.0)).unwrap(), 0.5, 1e-12);
        assert!(d.probability(Event::Less(-1.0)).is_err());
    }

    #[test]
    fn outside_and_between_partition() {
        let d = calibrate_from_p(0.96, 0.2, 1.0, Family::Normal, Scale::Raw).unwrap();
        let inside = d.probability(Event::Between(0.9, 1.1)).unwrap();
        let outside = d.probability(Event::Outside(0.9, 1.1)).unwrap();
        close(inside + outside, 1.0, 1e-12);
    }

    #[test]
    fn parse_queries() {
        assert_eq!("gt 50".parse::<Event>().unwrap(), Event::Greater(50.0));
        assert_eq!("lt -3".parse::<Event>().unwrap(), Event::Less(-3.0));
        assert_eq!("between 0.9,1.1".parse::<Event>().unwrap(), Event::Between(0.9, 1.1));
        assert_eq!("outside 0.9, 1.1".parse::<Event>().unwrap(), Event::Outside(0.9, 1.1));
        assert!("above 3".parse::<Event>().is_err());
        assert!("gt".parse::<Event>().is_err());
    }

    #[test]
    fn asymmetry_guard() {
        let d = calibrate_from_interval(0.79, 0.99, 0.95, Family::Normal, Scale::Raw).unwrap();
        // Midpoint 0.89, estimate 0.88: about 0.2 se apart.
        assert!(asymmetry_warning(0.79, 0.99, 0.88, d.se, DEFAULT_ASYMMETRY_THRESHOLD).is_none());
        assert!(asymmetry_warning(0.79, 0.99, 0.83, d.se, DEFAULT_ASYMMETRY_THRESHOLD).is_some());
    }

    #[test]
    fn odds_and_risk_ratios() {
        let t = TwoByTwo::new(4, 6, 8, 2).unwrap();
        close(t.odds_ratio().unwrap(), 1.0 / 6.0, 1e-15);
        close(t.risk_ratio().unwrap(), 0.5, 1e-15);

        let same = TwoByTwo::new(3, 7, 3, 7).unwrap();
        assert_eq!(same.odds_ratio().unwrap(), 1.0);
        assert_eq!(same.risk_ratio().unwrap(), 1.0);

        // Rare events: (1/99)/(2/98) = 0.49495; (1/100)/(2/100) = 0.5.
        let rare = TwoByTwo::new(1, 99, 2, 98).unwrap();
        let (or, rr) = (rare.odds_ratio().unwrap(), rare.risk_ratio().unwrap());
        close(or, 98.0 / 198.0, 1e-15);
        assert!((or - rr).abs() / rr < 0.02);

        assert!(matches!(
            TwoByTwo::new(1, 0, 1, 1).unwrap().odds_ratio(),
            Err(Error::DivisionByZero(_))
        ));
        assert!(matches!(
            TwoByTwo::new(1, 1, 0, 1).unwrap().risk_ratio(),
            Err(Error::DivisionByZero(_))
        ));
        assert!(TwoByTwo::new(0, 0, 1, 1).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn ratios_scale_invariant(
                a in 1u64..500, b in 1u64..500, c in 1u64..500, d in 1u64..500, k in 1u64..50
            ) {
                let t = TwoByTwo::new(a, b, c, d).unwrap();
                let s = TwoByTwo::new(a * k, b * k, c * k, d * k).unwrap();
                prop_assert!((t.odds_ratio().unwrap() - s.odds_ratio().unwrap()).abs() < 1e-9 * t.odds_ratio().unwrap());
                prop_assert!((t.risk_ratio().unwrap() - s.risk_ratio().unwrap()).abs() < 1e-9 * t.risk_ratio().unwrap());
            }

            #[test]
            fn greater_is_monotone(
                low in -100.0f64..100.0, width in 0.1f64..50.0,
                x in -200.0f64..200.0, dx in 0.0f64..50.0, df in 1u32..40,
            ) {
                for family in [Family::Normal, Family::StudentT { df }] {
                    let d = calibrate_from_interval(low, low + width, 0.95, family, Scale::Raw).unwrap();
                    prop_assert!(d.sf(x).unwrap() >= d.sf(x + dx).unwrap());
                }
            }
        }
    }
}
