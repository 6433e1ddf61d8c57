//! Resampling-based inference: shuffle tests, bootstrap confidence
//! distributions, calibration of published intervals and p values, exact
//! Bayes' theorem by counting worlds, and Monte Carlo checks against exact
//! binomial probabilities.
//!
//! All randomness is seeded and replicate-addressable (see [`rng`]), so every
//! number this crate reports can be reproduced from its seed and replicate
//! count.

pub mod bayes;
pub mod clip;
pub mod data;
mod error;
pub mod montecarlo;
pub mod numeric;
pub mod resampling;
pub mod rng;
pub mod stats;

pub use bayes::{Hypothesis, HypothesisSet, Rational, TwoStageGrid, WorldTableau};
pub use clip::{CalibratedDistribution, Event, Family, Scale, TwoByTwo};
pub use data::{fixture, fixtures, Dataset, Fixture, FixtureData, Group, GroupedSample, PairedSample, Sample};
pub use error::{Error, Result};
pub use montecarlo::{BernoulliExperiment, CountEvent, PopulationVector};
pub use resampling::{
    BootstrapReport, Histogram, ResampleConfig, ResampleDistribution, ResampleMode, Sidedness, TestReport,
};
pub use rng::SeededGenerator;
pub use stats::Statistic;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
