//! Checks on whether a bootstrap distribution can be read as a confidence
//! distribution for the population quantity.
//!
//! Three things are checked:
//!
//! * **Symmetry.** Reading the resample histogram directly as probabilities
//!   for the population value relies on it being roughly symmetric about the
//!   observed statistic. Reported as the standardized mean-median gap and
//!   the moment skewness `m3 / m2^1.5`; flagged when `|skewness|` exceeds
//!   [`DEFAULT_SKEW_THRESHOLD`].
//! * **Impossible values.** A resample `d` below the observed value says the
//!   population value could be as far *above* it, at `2 * observed - d`. When
//!   that reflected value falls outside the measurement scale, the implied
//!   probability mass is for something impossible.
//! * **Sample size.** Fewer than [`SMALL_SAMPLE`] observations gives a poor
//!   stand-in for the population.

use super::summary::{percentile_sorted, sorted_copy};
use super::ResampleDistribution;

pub const DEFAULT_SKEW_THRESHOLD: f64 = 0.25;
pub const SMALL_SAMPLE: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsOptions {
    pub skew_threshold: f64,
    /// Inclusive `(min, max)` of the measurement scale, if bounded.
    pub scale_bounds: Option<(f64, f64)>,
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        Self {
            skew_threshold: DEFAULT_SKEW_THRESHOLD,
            scale_bounds: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    /// `|mean - median| / std_dev`, 0 when the spread is 0.
    pub mean_median_gap: f64,
    pub skewness: f64,
    pub skew_threshold: f64,
    pub asymmetric: bool,
    pub scale_bounds: Option<(f64, f64)>,
    /// Fraction of resamples whose reflection lies outside the scale.
    pub reflected_out_of_bounds: Option<f64>,
    pub sample_size: usize,
    pub small_sample: bool,
}

impl DiagnosticsReport {
    pub fn bounds_violated(&self) -> bool {
        self.reflected_out_of_bounds.is_some_and(|f| f > 0.0)
    }

    /// Human-readable warnings, empty when every check passes.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.asymmetric {
            out.push(format!(
                "resample distribution is skewed (skewness {:.3}, threshold {}); \
                 tail probabilities read off it are rough",
                self.skewness, self.skew_threshold
            ));
        }
        if let (Some(frac), Some((lo, hi))) = (self.reflected_out_of_bounds, self.scale_bounds) {
            if frac > 0.0 {
                out.push(format!(
                    "{:.1}% of resamples imply a population value outside the scale [{lo}, {hi}]",
                    frac * 100.0
                ));
            }
        }
        if self.small_sample {
            out.push(format!(
                "sample of {} is small; the guessed population may be a poor stand-in",
                self.sample_size
            ));
        }
        out
    }
}

pub fn diagnostics(dist: &ResampleDistribution, options: DiagnosticsOptions) -> DiagnosticsReport {
    let values = dist.values();
    let n = values.len().max(1) as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for &v in values {
        let d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    let std_dev = m2.sqrt();
    // Relative to the scale of the values, below this the spread is rounding noise.
    let degenerate = std_dev <= 1e-12 * mean.abs().max(1.0);
    let skewness = if degenerate { 0.0 } else { m3 / m2.powf(1.5) };
    let median = if values.is_empty() {
        f64::NAN
    } else {
        percentile_sorted(&sorted_copy(values), 0.5)
    };
    let mean_median_gap = if degenerate {
        0.0
    } else {
        (mean - median).abs() / std_dev
    };

    let reflected_out_of_bounds = options.scale_bounds.map(|(lo, hi)| {
        let observed = dist.observed();
        let outside = values
            .iter()
            .map(|&v| 2.0 * observed - v)
            .filter(|&r| r < lo || r > hi)
            .count();
        outside as f64 / n
    });

    DiagnosticsReport {
        mean,
        median,
        std_dev,
        mean_median_gap,
        skewness,
        skew_threshold: options.skew_threshold,
        asymmetric: skewness.abs() > options.skew_threshold,
        scale_bounds: options.scale_bounds,
        reflected_out_of_bounds,
        sample_size: dist.sample_size(),
        small_sample: dist.sample_size() < SMALL_SAMPLE,
    }
}
