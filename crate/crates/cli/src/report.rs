use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use resample_core::Histogram;

use crate::args::Format;

/// What produced a report. Two runs with equal manifests print identical
/// bytes.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub arguments: String,
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
    pub version: &'static str,
    pub input: String,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, argv: &[String]) -> Self {
        Self {
            subcommand,
            arguments: argv.iter().map(|a| quote(a)).collect::<Vec<_>>().join(" "),
            seed: None,
            replicates: None,
            version: resample_core::VERSION,
            input: "command line".into(),
        }
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("subcommand", self.subcommand.to_string()),
            ("arguments", self.arguments.clone()),
        ];
        if let Some(seed) = self.seed {
            out.push(("seed", seed.to_string()));
        }
        if let Some(n) = self.replicates {
            out.push(("replicates", n.to_string()));
        }
        out.push(("version", self.version.to_string()));
        out.push(("input", self.input.clone()));
        out
    }
}

fn quote(arg: &str) -> String {
    if arg.is_empty() || arg.contains(|c: char| c.is_whitespace() || c == '"') {
        format!("\"{}\"", arg.replace('"', "\\\""))
    } else {
        arg.to_owned()
    }
}

/// `sha256:<hex>` of a file's bytes.
pub fn file_digest(path: &Path) -> std::io::Result<String> {
    let bytes = std::fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for b in digest.iter() {
        let _ = write!(hex, "{b:02x}");
    }
    Ok(format!("sha256:{hex}"))
}

/// Longer keys are not padded to, so one long label does not push every
/// value far right.
const MAX_KEY_WIDTH: usize = 40;

#[derive(Debug, Clone)]
enum Item {
    Field { key: String, text: String, raw: String },
    Block { title: String, body: String },
    Warning(String),
}

#[derive(Debug, Clone)]
pub struct Report {
    title: String,
    manifest: RunManifest,
    items: Vec<Item>,
    histogram: Option<(String, Histogram)>,
}

impl Report {
    pub fn new(title: impl Into<String>, manifest: RunManifest) -> Self {
        Self {
            title: title.into(),
            manifest,
            items: Vec::new(),
            histogram: None,
        }
    }

    /// Same value for text and CSV output.
    pub fn field(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        let v = value.to_string();
        self.items.push(Item::Field {
            key: key.into(),
            text: v.clone(),
            raw: v,
        });
        self
    }

    /// Different renderings for text and CSV.
    pub fn field_with(&mut self, key: impl Into<String>, text: impl Into<String>, raw: impl ToString) -> &mut Self {
        self.items.push(Item::Field {
            key: key.into(),
            text: text.into(),
            raw: raw.to_string(),
        });
        self
    }

    /// A real number: rounded for text, full precision for CSV.
    pub fn number(&mut self, key: impl Into<String>, value: f64, decimals: usize) -> &mut Self {
        self.items.push(Item::Field {
            key: key.into(),
            text: format!("{value:.decimals$}"),
            raw: format!("{value}"),
        });
        self
    }

    /// A probability: percentage for text, fraction for CSV.
    pub fn probability(&mut self, key: impl Into<String>, p: f64) -> &mut Self {
        self.items.push(Item::Field {
            key: key.into(),
            text: format!("{:.2}% ({p:.6})", p * 100.0),
            raw: format!("{p}"),
        });
        self
    }

    pub fn block(&mut self, title: impl Into<String>, body: impl Into<String>) -> &mut Self {
        self.items.push(Item::Block {
            title: title.into(),
            body: body.into(),
        });
        self
    }

    pub fn warning(&mut self, text: impl Into<String>) -> &mut Self {
        self.items.push(Item::Warning(text.into()));
        self
    }

    pub fn histogram(&mut self, title: impl Into<String>, histogram: Histogram) -> &mut Self {
        self.histogram = Some((title.into(), histogram));
        self
    }

    pub fn histogram_csv(&self) -> Option<String> {
        self.histogram.as_ref().map(|(_, h)| h.to_csv())
    }

    /// Renders the report. With `histogram_elsewhere` the histogram is left
    /// out (it was written to a file).
    pub fn render(&self, format: Format, histogram_elsewhere: bool) -> String {
        match format {
            Format::Text => self.render_text(histogram_elsewhere),
            Format::Csv => self.render_csv(histogram_elsewhere),
        }
    }

    fn render_text(&self, histogram_elsewhere: bool) -> String {
        let mut out = String::new();
        let manifest = self.manifest.fields();
        let width = manifest
            .iter()
            .map(|(k, _)| k.len())
            .chain(self.items.iter().filter_map(|i| match i {
                Item::Field { key, .. } => Some(key.len()),
                _ => None,
            }))
            .filter(|&len| len <= MAX_KEY_WIDTH)
            .max()
            .unwrap_or(0);
        out.push_str("== run manifest ==\n");
        for (k, v) in &manifest {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        let _ = writeln!(out, "== {} ==", self.title);
        for item in &self.items {
            match item {
                Item::Field { key, text, .. } => {
                    let _ = writeln!(out, "{key:<width$}  {text}");
                }
                Item::Block { title, body } => {
                    let _ = writeln!(out, "-- {title} --");
                    out.push_str(body);
                    if !body.ends_with('\n') {
                        out.push('\n');
                    }
                }
                Item::Warning(w) => {
                    let _ = writeln!(out, "warning: {w}");
                }
            }
        }
        if let Some((title, h)) = &self.histogram {
            if !histogram_elsewhere {
                let _ = writeln!(out, "-- {title} --");
                out.push_str(&h.to_ascii(50));
            }
        }
        out
    }

    fn render_csv(&self, histogram_elsewhere: bool) -> String {
        let mut out = String::from("key,value\n");
        for (k, v) in self.manifest.fields() {
            let _ = writeln!(out, "manifest.{k},{}", csv_cell(&v));
        }
        let mut warnings = 0;
        for item in &self.items {
            match item {
                Item::Field { key, raw, .. } => {
                    let _ = writeln!(out, "{},{}", csv_cell(key), csv_cell(raw));
                }
                Item::Block { .. } => {}
                Item::Warning(w) => {
                    warnings += 1;
                    let _ = writeln!(out, "warning.{warnings},{}", csv_cell(w));
                }
            }
        }
        if let Some((_, h)) = &self.histogram {
            if !histogram_elsewhere {
                out.push('\n');
                out.push_str(&h.to_csv());
            }
        }
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}
