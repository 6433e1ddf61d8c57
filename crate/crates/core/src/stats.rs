//! Statistics evaluated on observed data and on every resample.

use std::fmt;
use std::str::FromStr;

use crate::data::{Group, GroupedSample, PairedSample, Sample};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    /// Mean of a single sample.
    Mean,
    /// First group mean minus second group mean.
    DifferenceOfMeans,
    /// Proportion of ones in the first group minus the second. Values must
    /// be coded 0/1.
    DifferenceOfProportions,
    /// Pearson correlation of paired observations.
    PearsonCorrelation,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Mean => "mean",
            Statistic::DifferenceOfMeans => "mean-diff",
            Statistic::DifferenceOfProportions => "prop-diff",
            Statistic::PearsonCorrelation => "correlation",
        }
    }

    pub fn is_two_group(self) -> bool {
        matches!(self, Statistic::DifferenceOfMeans | Statistic::DifferenceOfProportions)
    }

    pub fn on_sample(self, sample: &Sample) -> Result<f64> {
        match self {
            Statistic::Mean => Ok(sample.mean()),
            _ => Err(self.incompatible("a single sample")),
        }
    }

    pub fn on_grouped(self, data: &GroupedSample) -> Result<f64> {
        self.check_grouped(data)?;
        grouped_value(data.values(), data.groups()).ok_or(Error::EmptyData("group"))
    }

    pub fn on_paired(self, data: &PairedSample) -> Result<f64> {
        match self {
            Statistic::PearsonCorrelation => {
                if data.len() < 2 {
                    return Err(Error::TooFew {
                        what: "pairs",
                        needed: 2,
                        got: data.len(),
                    });
                }
                pearson(data.x(), data.y())
            }
            _ => Err(self.incompatible("paired data")),
        }
    }

    /// Validates that this statistic can be evaluated on grouped data.
    pub(crate) fn check_grouped(self, data: &GroupedSample) -> Result<()> {
        match self {
            Statistic::DifferenceOfMeans => Ok(()),
            Statistic::DifferenceOfProportions => {
                if let Some(row) = data.values().iter().position(|&v| v != 0.0 && v != 1.0) {
                    Err(Error::InvalidArgument(format!(
                        "prop-diff needs 0/1 values; row {} is {}",
                        row + 1,
                        data.values()[row]
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Err(self.incompatible("grouped data")),
        }
    }

    fn incompatible(self, shape: &'static str) -> Error {
        Error::IncompatibleStatistic {
            stat: self.name(),
            shape,
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Statistic::Mean),
            "mean-diff" | "diff" => Ok(Statistic::DifferenceOfMeans),
            "prop-diff" => Ok(Statistic::DifferenceOfProportions),
            "correlation" | "pearson" => Ok(Statistic::PearsonCorrelation),
            other => Err(Error::InvalidArgument(format!("unknown statistic {other:?}"))),
        }
    }
}

/// Difference of group means, or `None` when a group is empty. For 0/1 data
/// this is also the difference of proportions.
pub(crate) fn grouped_value(values: &[f64], groups: &[Group]) -> Option<f64> {
    let mut sums = [0.0f64; 2];
    let mut counts = [0usize; 2];
    for (&v, &g) in values.iter().zip(groups) {
        sums[g.index()] += v;
        counts[g.index()] += 1;
    }
    if counts[0] == 0 || counts[1] == 0 {
        return None;
    }
    Some(sums[0] / counts[0] as f64 - sums[1] / counts[1] as f64)
}

/// Pearson product-moment correlation, clamped to `[-1, 1]`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("x"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("y"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_names() {
        assert_eq!("mean-diff".parse::<Statistic>().unwrap(), Statistic::DifferenceOfMeans);
        assert!("median".parse::<Statistic>().is_err());
    }

    #[test]
    fn mean_on_grouped_is_rejected() {
        let g = GroupedSample::from_rows([(1.0, "a"), (2.0, "b")]).unwrap();
        assert!(matches!(
            Statistic::Mean.on_grouped(&g),
            Err(Error::IncompatibleStatistic { .. })
        ));
        assert!(Statistic::DifferenceOfMeans
            .on_sample(&Sample::new(vec![1.0]).unwrap())
            .is_err());
    }

    #[test]
    fn proportions_need_binary_values() {
        let g = GroupedSample::from_rows([(1.0, "old"), (0.0, "old"), (1.0, "young"), (1.0, "young")]).unwrap();
        assert_eq!(Statistic::DifferenceOfProportions.on_grouped(&g).unwrap(), -0.5);
        let bad = GroupedSample::from_rows([(2.0, "old"), (0.0, "young")]).unwrap();
        assert!(Statistic::DifferenceOfProportions.on_grouped(&bad).is_err());
    }

    #[test]
    fn perfect_correlation() {
        let p = PairedSample::from_pairs(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap();
        assert!((Statistic::PearsonCorrelation.on_paired(&p).unwrap() - 1.0).abs() < 1e-12);
        let c = PairedSample::from_pairs(&[(1.0, 4.0), (2.0, 4.0), (3.0, 4.0)]).unwrap();
        assert!(matches!(pearson(c.x(), c.y()), Err(Error::ZeroVariance("y"))));
    }

    proptest! {
        #[test]
        fn difference_is_antisymmetric(
            rows in prop::collection::vec((-100.0f64..100.0, any::<bool>()), 2..30)
        ) {
            let mut rows = rows;
            rows[0].1 = true;
            rows[1].1 = false;
            let g = GroupedSample::from_rows(rows.iter().map(|&(v, b)| (v, if b { "a" } else { "b" }))).unwrap();
            let d = Statistic::DifferenceOfMeans.on_grouped(&g).unwrap();
            let s = Statistic::DifferenceOfMeans.on_grouped(&g.swapped()).unwrap();
            prop_assert!((d + s).abs() < 1e-9);
        }

        #[test]
        fn correlation_in_unit_interval(
            pairs in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..40)
        ) {
            let p = PairedSample::from_pairs(&pairs).unwrap();
            if let Ok(r) = pearson(p.x(), p.y()) {
                prop_assert!((-1.0..=1.0).contains(&r));
            }
        }
    }
}
