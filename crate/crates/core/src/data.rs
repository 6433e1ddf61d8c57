//! Sample containers, CSV ingestion and the built-in datasets.
//!
//! CSV files are comma-separated UTF-8 with a header row and `.` as the
//! decimal point. Row numbers in error messages are 1-based data rows (the
//! header is not counted).

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::montecarlo::PopulationVector;

fn check_finite(values: &[f64]) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite { row: i + 1, value: v });
        }
    }
    Ok(())
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// A nonempty list of finite observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    label: Option<String>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyData("sample"));
        }
        check_finite(&values)?;
        Ok(Self { values, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    pub fn write_csv<W: Write>(&self, writer: W, column: &str) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record([column])?;
        for v in &self.values {
            out.write_record([format_value(*v)])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Which of the two groups a row belongs to, in order of first appearance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    First,
    Second,
}

impl Group {
    pub fn index(self) -> usize {
        match self {
            Group::First => 0,
            Group::Second => 1,
        }
    }
}

/// Values tagged with one of exactly two group names.
///
/// Group order is the order of first appearance in the rows; a "difference"
/// is always first group minus second group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedSample {
    values: Vec<f64>,
    groups: Vec<Group>,
    names: [String; 2],
}

impl GroupedSample {
    /// Builds from `(value, group name)` rows.
    pub fn from_rows<S: AsRef<str>>(rows: impl IntoIterator<Item = (f64, S)>) -> Result<Self> {
        let mut values = Vec::new();
        let mut groups = Vec::new();
        let mut names: Vec<String> = Vec::with_capacity(2);
        for (row, (value, name)) in rows.into_iter().enumerate() {
            let name = name.as_ref();
            if name.is_empty() {
                return Err(Error::EmptyGroup { row: row + 1 });
            }
            let g = match names.iter().position(|n| n == name) {
                Some(0) => Group::First,
                Some(_) => Group::Second,
                None => {
                    names.push(name.to_owned());
                    if names.len() > 2 {
                        let mut seen = names.clone();
                        seen.sort();
                        seen.dedup();
                        return Err(Error::GroupCount { found: seen.len() });
                    }
                    if names.len() == 1 {
                        Group::First
                    } else {
                        Group::Second
                    }
                }
            };
            values.push(value);
            groups.push(g);
        }
        if values.is_empty() {
            return Err(Error::EmptyData("grouped sample"));
        }
        if names.len() != 2 {
            return Err(Error::GroupCount { found: names.len() });
        }
        check_finite(&values)?;
        let second = names.pop().unwrap_or_default();
        let first = names.pop().unwrap_or_default();
        Ok(Self {
            values,
            groups,
            names: [first, second],
        })
    }

    /// Builds from raw parts. Both groups must be present.
    pub fn from_parts(values: Vec<f64>, groups: Vec<Group>, names: [String; 2]) -> Result<Self> {
        if values.len() != groups.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values but {} group labels",
                values.len(),
                groups.len()
            )));
        }
        if values.is_empty() {
            return Err(Error::EmptyData("grouped sample"));
        }
        if names[0] == names[1] {
            return Err(Error::GroupCount { found: 1 });
        }
        let present = [Group::First, Group::Second]
            .iter()
            .filter(|g| groups.contains(g))
            .count();
        if present != 2 {
            return Err(Error::GroupCount { found: present });
        }
        check_finite(&values)?;
        Ok(Self { values, groups, names })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn names(&self) -> &[String; 2] {
        &self.names
    }

    pub fn name(&self, group: Group) -> &str {
        &self.names[group.index()]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn count(&self, group: Group) -> usize {
        self.groups.iter().filter(|&&g| g == group).count()
    }

    pub fn group_values(&self, group: Group) -> Vec<f64> {
        self.values
            .iter()
            .zip(&self.groups)
            .filter(|(_, &g)| g == group)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn group_mean(&self, group: Group) -> f64 {
        mean(&self.group_values(group))
    }

    /// First group mean minus second group mean.
    pub fn mean_difference(&self) -> f64 {
        self.group_mean(Group::First) - self.group_mean(Group::Second)
    }

    /// The same rows with the group names (and hence the difference sign)
    /// swapped.
    pub fn swapped(&self) -> Self {
        let groups = self
            .groups
            .iter()
            .map(|g| match g {
                Group::First => Group::Second,
                Group::Second => Group::First,
            })
            .collect();
        Self {
            values: self.values.clone(),
            groups,
            names: [self.names[1].clone(), self.names[0].clone()],
        }
    }

    /// Every row repeated `times` times, in blocks (rows 1..n, then 1..n again).
    pub fn replicated(&self, times: usize) -> Self {
        let n = self.len();
        Self {
            values: self.values.iter().copied().cycle().take(n * times).collect(),
            groups: self.groups.iter().copied().cycle().take(n * times).collect(),
            names: self.names.clone(),
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W, value_column: &str, group_column: &str) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record([value_column, group_column])?;
        for (v, g) in self.values.iter().zip(&self.groups) {
            out.write_record([format_value(*v).as_str(), self.name(*g)])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// `(x, y)` pairs for correlation tests.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PairedSample {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidArgument(format!(
                "paired columns differ in length ({} vs {})",
                x.len(),
                y.len()
            )));
        }
        if x.is_empty() {
            return Err(Error::EmptyData("paired sample"));
        }
        check_finite(&x)?;
        check_finite(&y)?;
        Ok(Self { x, y })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect())
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Shortest decimal text that parses back to the same `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v}")
}

/// Result of [`load_csv`].
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Sample(Sample),
    Grouped(GroupedSample),
}

pub fn load_csv(path: impl AsRef<Path>, value_column: &str, group_column: Option<&str>) -> Result<Dataset> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
    parse_csv(text.as_bytes(), value_column, group_column)
}

/// Parses CSV content already in memory. See [`load_csv`].
pub fn parse_csv<R: Read>(reader: R, value_column: &str, group_column: Option<&str>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))
    };
    let value_idx = find(value_column)?;
    let group_idx = group_column.map(find).transpose()?;

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record?;
        let text = record.get(value_idx).unwrap_or("");
        let value: f64 = text.parse().map_err(|_| Error::BadNumber {
            row,
            text: text.to_owned(),
        })?;
        if !value.is_finite() {
            return Err(Error::NonFinite { row, value });
        }
        values.push(value);
        if let Some(g) = group_idx {
            labels.push(record.get(g).unwrap_or("").to_owned());
        }
    }
    if values.is_empty() {
        return Err(Error::EmptyData("csv"));
    }
    match group_idx {
        None => Ok(Dataset::Sample(Sample::new(values)?)),
        Some(_) => Ok(Dataset::Grouped(GroupedSample::from_rows(
            values.into_iter().zip(labels),
        )?)),
    }
}

/// Loads two numeric columns as `(x, y)` pairs.
pub fn load_paired_csv(path: impl AsRef<Path>, x_column: &str, y_column: &str) -> Result<PairedSample> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_paired_csv(file, x_column, y_column)
}

pub fn parse_paired_csv<R: Read>(reader: R, x_column: &str, y_column: &str) -> Result<PairedSample> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))
    };
    let (xi, yi) = (find(x_column)?, find(y_column)?);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        for (idx, out) in [(xi, &mut x), (yi, &mut y)] {
            let text = record.get(idx).unwrap_or("");
            let value: f64 = text.parse().map_err(|_| Error::BadNumber {
                row: i + 1,
                text: text.to_owned(),
            })?;
            out.push(value);
        }
    }
    PairedSample::new(x, y)
}

/// Payload of a built-in dataset.
#[derive(Debug, Clone, PartialEq)]
pub enum FixtureData {
    Sample(Sample),
    Grouped(GroupedSample),
    Population(PopulationVector),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub data: FixtureData,
}

/// Nine wellbeing scores of vegetarians, mean 60.
pub const VEG9: [i64; 9] = [74, 65, 57, 78, 54, 47, 38, 34, 93];
/// Nine scores bunched near the top of a 0..=100 scale, mean 85.
pub const SKEWED9: [i64; 9] = [96, 100, 35, 95, 97, 99, 50, 95, 98];
/// Six (score, diet) rows.
pub const VEG6: [(i64, &str); 6] = [
    (74, "Vegetarian"),
    (65, "Vegetarian"),
    (69, "Omnivore"),
    (37, "Omnivore"),
    (57, "Vegetarian"),
    (26, "Omnivore"),
];
pub const POLL500_YES: usize = 300;
pub const POLL500_SIZE: usize = 500;

fn ints(values: &[i64]) -> Vec<f64> {
    values.iter().map(|&v| v as f64).collect()
}

pub fn fixtures() -> Vec<Fixture> {
    let veg9 = Sample::new(ints(&VEG9)).expect("fixture").with_label("veg9");
    let skewed9 = Sample::new(ints(&SKEWED9)).expect("fixture").with_label("skewed9");
    let veg6 = GroupedSample::from_rows(VEG6.iter().map(|&(v, g)| (v as f64, g))).expect("fixture");
    let mut poll = vec![1u8; POLL500_YES];
    poll.resize(POLL500_SIZE, 0);
    let poll500 = PopulationVector::new(poll).expect("fixture");
    vec![
        Fixture {
            name: "veg9",
            description: "9 wellbeing scores (0-100) of vegetarians; mean 60",
            data: FixtureData::Sample(veg9),
        },
        Fixture {
            name: "skewed9",
            description: "9 scores crowded against the top of a 0-100 scale; mean 85",
            data: FixtureData::Sample(skewed9),
        },
        Fixture {
            name: "veg6",
            description: "6 (score, diet) rows; Vegetarian mean 65.33, Omnivore mean 44",
            data: FixtureData::Grouped(veg6),
        },
        Fixture {
            name: "poll500",
            description: "electorate of 500: 300 ones (votes for Socrates), 200 zeros",
            data: FixtureData::Population(poll500),
        },
    ]
}

pub fn fixture(name: &str) -> Result<Fixture> {
    fixtures()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_owned()))
}
