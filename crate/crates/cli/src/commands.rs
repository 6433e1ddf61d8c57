use anyhow::{bail, Context, Result};
use num_traits::ToPrimitive;

use resample_core::bayes::{parse_rational, two_stage_grid};
use resample_core::clip::{asymmetry_warning, calibrate_from_interval, calibrate_from_p};
use resample_core::data::{load_csv, load_paired_csv};
use resample_core::montecarlo::{simulate_bernoulli, simulate_poll};
use resample_core::resampling::{
    bootstrap, enumerate_exact, shuffle_test, shuffle_test_paired, BootstrapOptions, DiagnosticsOptions, TailDirection,
    DEFAULT_BIN_WIDTH,
};
use resample_core::{
    fixture, fixtures, BernoulliExperiment, BootstrapReport, CalibratedDistribution, CountEvent, Dataset, Event,
    Family, FixtureData, Group, GroupedSample, Histogram, HypothesisSet, PairedSample, PopulationVector, Rational,
    ResampleConfig, ResampleMode, Sample, Scale, Sidedness, Statistic, TwoByTwo,
};

use crate::args::{
    BayesArgs, BootstrapArgs, ClipArgs, FamilyArg, FixturesArgs, GlobalArgs, InputArgs, ModeArg, MonteCarloArgs,
    PollArgs, ShuffleTestArgs, SidednessArg,
};
use crate::report::{file_digest, Report, RunManifest};

const P_LABEL: &str = "p value (probability of data this extreme under the baseline hypothesis)";
const FINE_BIN_WIDTH: f64 = 0.05;

/// What a subcommand produced.
pub enum Outcome {
    Report(Report),
    /// Printed verbatim, ignoring `--format`.
    Raw(String),
}

enum Loaded {
    Sample(Sample),
    Grouped(GroupedSample),
    Paired(PairedSample),
}

fn load(input: &InputArgs) -> Result<(Loaded, String)> {
    if let Some(name) = &input.fixture {
        let data = match fixture(name)?.data {
            FixtureData::Sample(s) => Loaded::Sample(s),
            FixtureData::Grouped(g) => Loaded::Grouped(g),
            FixtureData::Population(_) => bail!("fixture {name:?} is a population; use the poll command"),
        };
        return Ok((data, format!("fixture:{name}")));
    }
    let Some(path) = &input.csv else {
        bail!("give either --fixture NAME or --csv FILE");
    };
    let digest = file_digest(path).with_context(|| format!("reading {}", path.display()))?;
    let data = match (&input.x, &input.y) {
        (Some(x), Some(y)) => Loaded::Paired(load_paired_csv(path, x, y)?),
        _ => match load_csv(path, &input.value, input.group.as_deref())? {
            Dataset::Sample(s) => Loaded::Sample(s),
            Dataset::Grouped(g) => Loaded::Grouped(g),
        },
    };
    Ok((data, digest))
}

fn config(global: &GlobalArgs, replicates: usize) -> ResampleConfig {
    ResampleConfig::new(replicates, global.seed).parallel(global.parallel)
}

fn default_bin_width(stat: Statistic) -> f64 {
    match stat {
        Statistic::Mean | Statistic::DifferenceOfMeans => DEFAULT_BIN_WIDTH,
        Statistic::DifferenceOfProportions | Statistic::PearsonCorrelation => FINE_BIN_WIDTH,
    }
}

fn observed_label(stat: Statistic, data: &Loaded) -> String {
    match (stat, data) {
        (Statistic::DifferenceOfMeans, Loaded::Grouped(g)) => format!(
            "observed difference of means ({} - {})",
            g.name(Group::First),
            g.name(Group::Second)
        ),
        (Statistic::DifferenceOfProportions, Loaded::Grouped(g)) => format!(
            "observed difference of proportions ({} - {})",
            g.name(Group::First),
            g.name(Group::Second)
        ),
        (Statistic::PearsonCorrelation, _) => "observed correlation".into(),
        _ => "observed mean".into(),
    }
}

fn describe_groups(report: &mut Report, g: &GroupedSample) {
    for group in [Group::First, Group::Second] {
        report.field(
            format!("group {}", g.name(group)),
            format!("n = {}, mean = {:.4}", g.count(group), g.group_mean(group)),
        );
    }
}

pub fn shuffle(args: &ShuffleTestArgs, global: &GlobalArgs, argv: &[String]) -> Result<Outcome> {
    let stat: Statistic = args.stat.parse()?;
    let (data, input) = load(&args.input)?;
    let sidedness = match args.sidedness {
        SidednessArg::TwoSided => Sidedness::TwoSided,
        SidednessArg::Greater => Sidedness::Greater,
        SidednessArg::Less => Sidedness::Less,
    };
    let mut manifest = RunManifest::new("shuffle-test", argv);
    manifest.input = input;

    if args.exact {
        let Loaded::Grouped(g) = &data else {
            bail!("--exact needs two groups (use --group with --csv, or a grouped fixture)");
        };
        let exact = enumerate_exact(g, stat, sidedness)?;
        let mut report = Report::new("exact shuffle test", manifest);
        report.field("statistic", stat).field("sidedness", sidedness.name());
        describe_groups(&mut report, g);
        report.number(observed_label(stat, &data), stat.on_grouped(g)?, 4);
        report.field("assignments enumerated", exact.assignments);
        report.field("assignments at least as extreme", exact.extreme_count);
        report.field_with(
            P_LABEL,
            format!("{}/{} = {}", exact.extreme_count, exact.assignments, exact.p_value()),
            exact.p_value(),
        );
        return Ok(Outcome::Report(report));
    }

    let config = config(global, args.replicates);
    manifest.seed = Some(config.seed);
    manifest.replicates = Some(config.replicates);
    let test = match (&data, stat) {
        (Loaded::Grouped(g), s) if s.is_two_group() => shuffle_test(g, s, config, sidedness)?,
        (Loaded::Paired(p), Statistic::PearsonCorrelation) => shuffle_test_paired(p, config, sidedness)?,
        (Loaded::Paired(_), s) => bail!("paired data (--x/--y) supports only --stat correlation, not {s}"),
        (_, Statistic::PearsonCorrelation) => bail!("correlation needs --csv with --x and --y columns"),
        (_, s) => bail!("{s} needs two groups (use --group with --csv, or a grouped fixture)"),
    };
    let mut report = Report::new("shuffle test", manifest);
    report.field("statistic", stat).field("sidedness", sidedness.name());
    if let Loaded::Grouped(g) = &data {
        describe_groups(&mut report, g);
    }
    report.number(observed_label(stat, &data), test.observed, 4);
    report.field(
        "shuffles at least as extreme",
        format!("{} of {}", test.extreme_count, test.replicates()),
    );
    report.number(P_LABEL, test.p_value, 4);
    report.number("monte carlo standard error of p", test.standard_error(), 4);
    let width = args.bin_width.unwrap_or_else(|| default_bin_width(stat));
    report.histogram("shuffle distribution", test.histogram(width));
    Ok(Outcome::Report(report))
}

pub fn boot(args: &BootstrapArgs, global: &GlobalArgs, argv: &[String]) -> Result<Outcome> {
    let (data, input) = load(&args.input)?;
    let stat: Statistic = match &args.stat {
        Some(s) => s.parse()?,
        None => match &data {
            Loaded::Sample(_) => Statistic::Mean,
            Loaded::Grouped(_) => Statistic::DifferenceOfMeans,
            Loaded::Paired(_) => Statistic::PearsonCorrelation,
        },
    };
    let config = config(global, args.replicates);
    let mut manifest = RunManifest::new("bootstrap", argv);
    manifest.input = input;
    manifest.seed = Some(config.seed);
    manifest.replicates = Some(config.replicates);

    let distribution = match &data {
        Loaded::Sample(s) => bootstrap(s, stat, config)?,
        Loaded::Grouped(g) => bootstrap(g, stat, config)?,
        Loaded::Paired(p) => bootstrap(p, stat, config)?,
    };
    let direction = if args.strict {
        TailDirection::Greater
    } else {
        TailDirection::AtLeast
    };
    let options = BootstrapOptions {
        level: args.level,
        thresholds: args.tails.iter().map(|&t| (t, direction)).collect(),
        bin_width: args.bin_width.unwrap_or_else(|| default_bin_width(stat)),
        diagnostics: DiagnosticsOptions {
            skew_threshold: args.skew_threshold,
            scale_bounds: args.bounds,
        },
    };
    let boot = BootstrapReport::from_distribution(distribution, &options)?;
    Ok(Outcome::Report(bootstrap_report(manifest, stat, &data, boot)))
}

fn bootstrap_report(manifest: RunManifest, stat: Statistic, data: &Loaded, boot: BootstrapReport) -> Report {
    let mut report = Report::new("bootstrap confidence distribution", manifest);
    report.field("statistic", stat);
    if let Loaded::Grouped(g) = data {
        describe_groups(&mut report, g);
    }
    report.number(observed_label(stat, data), boot.observed, 4);
    let pct = boot.level * 100.0;
    report.number(format!("{pct}% interval low"), boot.interval.0, 4);
    report.number(format!("{pct}% interval high"), boot.interval.1, 4);
    for tail in &boot.tails {
        report.probability(
            format!("P(population value {} {})", tail.direction.symbol(), tail.threshold),
            tail.probability,
        );
    }
    let d = &boot.diagnostics;
    report.number("resample mean", d.mean, 4);
    report.number("resample median", d.median, 4);
    report.number("resample standard deviation", d.std_dev, 4);
    report.number("skewness", d.skewness, 4);
    report.field("asymmetric", d.asymmetric);
    if let Some(frac) = d.reflected_out_of_bounds {
        report.number("fraction implying impossible values", frac, 4);
    }
    if boot.distribution.redraws() > 0 {
        report.field("redrawn resamples", boot.distribution.redraws());
    }
    for w in d.warnings() {
        report.warning(w);
    }
    report.histogram("bootstrap distribution", boot.histogram);
    report
}

fn describe_calibration(
    report: &mut Report,
    prefix: &str,
    dist: &CalibratedDistribution,
    queries: &[Event],
) -> Result<()> {
    let scale = match dist.scale {
        Scale::Raw => "",
        Scale::Log => " (log scale)",
    };
    report.number(format!("{prefix}centre"), dist.location(), 4);
    report.number(format!("{prefix}standard error{scale}"), dist.se, 4);
    for &q in queries {
        report.probability(format!("{prefix}P({})", query_text(q)), dist.probability(q)?);
    }
    Ok(())
}

fn query_text(q: Event) -> String {
    match q {
        Event::Greater(x) => format!("population value > {x}"),
        Event::Less(x) => format!("population value < {x}"),
        Event::Between(a, b) => format!("{a} < population value < {b}"),
        Event::Outside(a, b) => format!("population value < {a} or > {b}"),
    }
}

pub fn clip(args: &ClipArgs, argv: &[String], notes: &mut Vec<String>) -> Result<Outcome> {
    let family = match (args.family, args.df) {
        (FamilyArg::Normal, None) => Family::Normal,
        (FamilyArg::Normal, Some(_)) => bail!("--df applies only to --family t"),
        (FamilyArg::T, Some(df)) => Family::StudentT { df },
        (FamilyArg::T, None) => bail!("--family t needs --df"),
    };
    let scale = if args.log_scale { Scale::Log } else { Scale::Raw };
    let mut queries = args
        .queries
        .iter()
        .map(|q| q.parse::<Event>())
        .collect::<Result<Vec<_>, _>>()?;
    if queries.is_empty() {
        queries = vec![Event::Greater(args.null_value), Event::Less(args.null_value)];
    }

    let mut report = Report::new("tentative probabilities", RunManifest::new("clip", argv));
    report.field("family", family);
    let (ci, p) = (args.ci, args.p.zip(args.estimate));
    if ci.is_none() && p.is_none() {
        bail!("give --ci LOW,HIGH, or --p with --estimate");
    }
    if let Some((low, high)) = ci {
        let dist = calibrate_from_interval(low, high, args.level, family, scale)?;
        let prefix = if p.is_some() { "interval route: " } else { "" };
        report.field(
            format!("{prefix}source"),
            format!("{}% interval ({low}, {high})", args.level * 100.0),
        );
        describe_calibration(&mut report, prefix, &dist, &queries)?;
        if let Some(est) = args.estimate {
            let map = |x: f64| if args.log_scale { x.ln() } else { x };
            let (l, h, e) = (map(low), map(high), map(est));
            if [l, h, e].iter().all(|v| v.is_finite()) {
                if let Some(w) = asymmetry_warning(l, h, e, dist.se, args.asymmetry_threshold) {
                    let w = if args.log_scale {
                        format!("{w} (values on the log scale)")
                    } else {
                        w
                    };
                    notes.push(format!("warning: {w}"));
                    report.warning(w);
                }
            }
        }
    }
    if let Some((pv, est)) = p {
        let dist = calibrate_from_p(est, pv, args.null_value, family, scale)?;
        let prefix = if ci.is_some() { "p route: " } else { "" };
        report.field(
            format!("{prefix}source"),
            format!("estimate {est} with two-sided p = {pv} against {}", args.null_value),
        );
        describe_calibration(&mut report, prefix, &dist, &queries)?;
    }
    if let Some([a, b, c, d]) = args.table {
        let table = TwoByTwo::new(a, b, c, d)?;
        report.number("odds ratio", table.odds_ratio()?, 4);
        report.number("risk ratio", table.risk_ratio()?, 4);
    }
    Ok(Outcome::Report(report))
}

fn fraction(r: &Rational) -> String {
    let pct = r.to_f64().unwrap_or(f64::NAN) * 100.0;
    format!("{r} ({pct:.2}%)")
}

fn parse_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(|t| Ok(parse_rational(t.trim())?)).collect()
}

pub fn bayes(args: &BayesArgs, argv: &[String]) -> Result<Outcome> {
    let manifest = RunManifest::new("bayes", argv);
    if let Some(spec) = &args.two_stage {
        let ps = parse_list(spec)?;
        let [p1, p21, p2n] = ps.as_slice() else {
            bail!("--two-stage needs three probabilities P1,P2_GIVEN_1,P2_GIVEN_NOT_1");
        };
        let grid = two_stage_grid(p1, p21, p2n)?;
        let (total, [both, first, second, neither]) = grid.counts();
        let mut report = Report::new("two-stage possibilities", manifest);
        report.field("P(first and second)", fraction(&grid.both));
        report.field("P(first only)", fraction(&grid.first_only));
        report.field("P(second only)", fraction(&grid.second_only));
        report.field("P(neither)", fraction(&grid.neither));
        report.field("P(second)", fraction(&grid.second_marginal()));
        report.field(
            "equally likely possibilities",
            format!("{total}: {both} both, {first} first only, {second} second only, {neither} neither"),
        );
        return Ok(Outcome::Report(report));
    }
    if args.hypotheses.is_empty() {
        bail!("give at least one --hypothesis NAME:PRIOR:LIKELIHOOD, or --two-stage");
    }
    let mut set = HypothesisSet::parse(&args.hypotheses)?;
    let mut report = Report::new("posterior probabilities", manifest);
    let mut stages = vec![set.clone()];
    for update in &args.updates {
        set = set.sequential_update(&parse_list(update)?)?;
        stages.push(set.clone());
    }
    for (i, stage) in stages.iter().enumerate() {
        let prefix = if stages.len() > 1 {
            format!("round {}: ", i + 1)
        } else {
            String::new()
        };
        for (name, post) in stage.posterior()? {
            report.field(format!("{prefix}P({name} | data)"), fraction(&post));
        }
        if args.worlds || args.full_worlds {
            let tableau = stage.render_worlds(!args.full_worlds)?;
            report.field(format!("{prefix}possible worlds"), tableau.total_worlds);
            report.block(format!("{prefix}worlds"), format!("{tableau}{}", tableau.grid(50)));
        }
    }
    Ok(Outcome::Report(report))
}

pub fn montecarlo(args: &MonteCarloArgs, global: &GlobalArgs, argv: &[String]) -> Result<Outcome> {
    let p = parse_rational(&args.probability)?;
    let event: CountEvent = args.event.parse()?;
    let experiment = BernoulliExperiment::new(args.trials, p.clone(), event)?;
    let config = config(global, args.runs);
    let mut manifest = RunManifest::new("montecarlo", argv);
    manifest.seed = Some(config.seed);
    manifest.replicates = Some(config.replicates);
    let estimate = simulate_bernoulli(&experiment, config)?;
    let exact = experiment.exact()?;
    let mut report = Report::new("monte carlo estimate", manifest);
    report.field(
        "experiment",
        format!("{} trials, success probability {p}, {event}", args.trials),
    );
    report.field(
        "runs where the event happened",
        format!("{} of {}", estimate.hits, estimate.runs),
    );
    report.number("estimated probability", estimate.probability(), 4);
    report.number("monte carlo standard error", estimate.standard_error(), 4);
    report.field("exact probability", fraction(&exact));
    Ok(Outcome::Report(report))
}

pub fn poll(args: &PollArgs, global: &GlobalArgs, argv: &[String]) -> Result<Outcome> {
    let mut manifest = RunManifest::new("poll", argv);
    let population = match (&args.fixture, args.yes, args.size) {
        (Some(name), _, _) => match fixture(name)?.data {
            FixtureData::Population(p) => {
                manifest.input = format!("fixture:{name}");
                p
            }
            _ => bail!("fixture {name:?} is not a population"),
        },
        (None, Some(yes), Some(size)) => PopulationVector::with_counts(yes, size)?,
        _ => bail!("give --fixture poll500, or --yes and --size"),
    };
    let mode = match args.mode {
        ModeArg::With => ResampleMode::WithReplacement,
        ModeArg::Without => ResampleMode::WithoutReplacement,
    };
    let config = config(global, args.polls);
    manifest.seed = Some(config.seed);
    manifest.replicates = Some(config.replicates);
    let result = simulate_poll(&population, args.k, mode, config)?;
    let s = &result.summary;
    let mut report = Report::new("simulated polls", manifest);
    report.field(
        "electorate",
        format!(
            "{} of {} say yes ({})",
            population.ones(),
            population.len(),
            population.proportion()
        ),
    );
    report.field("electors per poll", args.k).field("sampling", mode);
    report.number("mean proportion", s.mean, 4);
    report.number("smallest proportion", s.min, 4);
    report.number("largest proportion", s.max, 4);
    report.number("95% of polls from", s.low, 4);
    report.number("95% of polls to", s.high, 4);
    report.histogram("poll proportions", Histogram::new(&result.proportions, args.bin_width));
    Ok(Outcome::Report(report))
}

pub fn list_fixtures(args: &FixturesArgs) -> Result<Outcome> {
    let Some(name) = &args.show else {
        let mut out = String::new();
        for f in fixtures() {
            out.push_str(&format!("{:<8}  {}\n", f.name, f.description));
        }
        return Ok(Outcome::Raw(out));
    };
    let mut buf = Vec::new();
    match fixture(name)?.data {
        FixtureData::Sample(s) => s.write_csv(&mut buf, "value")?,
        FixtureData::Grouped(g) => g.write_csv(&mut buf, "value", "group")?,
        FixtureData::Population(p) => {
            buf.extend_from_slice(b"value\n");
            for e in p.entries() {
                buf.extend_from_slice(format!("{e}\n").as_bytes());
            }
        }
    }
    Ok(Outcome::Raw(String::from_utf8(buf)?))
}
