use crate::error::{Error, Result};

/// Comparison used by [`tail_probability`](super::ResampleDistribution::tail_probability).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailDirection {
    /// `value >= threshold`
    #[default]
    AtLeast,
    /// `value > threshold`
    Greater,
    /// `value <= threshold`
    AtMost,
    /// `value < threshold`
    Less,
}

impl TailDirection {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            TailDirection::AtLeast => value >= threshold,
            TailDirection::Greater => value > threshold,
            TailDirection::AtMost => value <= threshold,
            TailDirection::Less => value < threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            TailDirection::AtLeast => ">=",
            TailDirection::Greater => ">",
            TailDirection::AtMost => "<=",
            TailDirection::Less => "<",
        }
    }
}

/// Percentile of already-sorted values by linear interpolation between order
/// statistics: quantile `q` sits at 1-based position `q(N-1) + 1`.
pub fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    match sorted.get(lo + 1) {
        Some(&next) if frac > 0.0 => sorted[lo] + frac * (next - sorted[lo]),
        _ => sorted[lo],
    }
}

pub fn sorted_copy(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
}

/// Central interval holding `level` of the values: the `(1-level)/2` and
/// `1-(1-level)/2` percentiles.
pub fn percentile_interval(values: &[f64], level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "interval level {level} must lie strictly between 0 and 1"
        )));
    }
    if values.len() < 2 {
        return Err(Error::TooFew {
            what: "replicates",
            needed: 2,
            got: values.len(),
        });
    }
    let sorted = sorted_copy(values);
    let tail = (1.0 - level) / 2.0;
    Ok((percentile_sorted(&sorted, tail), percentile_sorted(&sorted, 1.0 - tail)))
}

pub fn tail_probability(values: &[f64], threshold: f64, direction: TailDirection) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let hits = values.iter().filter(|&&v| direction.holds(v, threshold)).count();
    hits as f64 / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_to_thousand() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        let (lo, hi) = percentile_interval(&v, 0.95).unwrap();
        assert!((lo - 25.975).abs() < 1e-9, "{lo}");
        assert!((hi - 975.025).abs() < 1e-9, "{hi}");
    }

    #[test]
    fn level_and_size_checked() {
        assert!(percentile_interval(&[1.0, 2.0], 1.0).is_err());
        assert!(percentile_interval(&[1.0, 2.0], 0.0).is_err());
        assert!(percentile_interval(&[1.0], 0.9).is_err());
    }

    #[test]
    fn tails_at_extremes() {
        let v = [3.0, 4.0, 5.0];
        assert_eq!(tail_probability(&v, 2.0, TailDirection::AtLeast), 1.0);
        assert_eq!(tail_probability(&v, 6.0, TailDirection::AtLeast), 0.0);
        assert_eq!(tail_probability(&v, f64::NEG_INFINITY, TailDirection::AtLeast), 1.0);
        assert_eq!(tail_probability(&v, 4.0, TailDirection::AtLeast), 2.0 / 3.0);
        assert_eq!(tail_probability(&v, 4.0, TailDirection::Greater), 1.0 / 3.0);
    }

    proptest! {
        #[test]
        fn endpoints_within_range(
            values in prop::collection::vec(-1e3f64..1e3, 2..300),
            level in 0.01f64..0.99,
        ) {
            let (lo, hi) = percentile_interval(&values, level).unwrap();
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(min <= lo && lo <= hi && hi <= max);
        }
    }
}
