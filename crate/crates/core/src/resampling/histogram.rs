use std::fmt::Write as _;

/// Fixed-width bins centred on integer multiples of the width, so 0 is
/// always a bin centre. A value `v` lands in the bin with centre `c` when
/// `c - w/2 <= v < c + w/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bin_width: f64,
    first_bin: i64,
    counts: Vec<u64>,
}

pub const DEFAULT_BIN_WIDTH: f64 = 2.0;

impl Histogram {
    /// Bins `values` at `bin_width`. Panics unless `bin_width` is positive
    /// and finite.
    pub fn new(values: &[f64], bin_width: f64) -> Self {
        assert!(bin_width.is_finite() && bin_width > 0.0, "bin width must be positive");
        let bins: Vec<i64> = values.iter().map(|&v| bin_of(v, bin_width)).collect();
        let (Some(&lo), Some(&hi)) = (bins.iter().min(), bins.iter().max()) else {
            return Self {
                bin_width,
                first_bin: 0,
                counts: Vec::new(),
            };
        };
        let mut counts = vec![0u64; (hi - lo + 1) as usize];
        for b in bins {
            counts[(b - lo) as usize] += 1;
        }
        Self {
            bin_width,
            first_bin: lo,
            counts,
        }
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.counts.len()).map(move |i| (self.first_bin + i as i64) as f64 * self.bin_width)
    }

    /// `(centre, count)` for every bin from the lowest occupied to the
    /// highest occupied, empty bins included.
    pub fn bins(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.centers().zip(self.counts.iter().copied())
    }

    /// Count in the bin centred on `center` (0 if outside the range).
    pub fn count_at(&self, center: f64) -> u64 {
        let b = bin_of(center, self.bin_width) - self.first_bin;
        if b < 0 {
            return 0;
        }
        self.counts.get(b as usize).copied().unwrap_or(0)
    }

    /// Two-column CSV: `bin_center,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_center,count\n");
        for (c, n) in self.bins() {
            let _ = writeln!(out, "{},{}", fmt_center(c), n);
        }
        out
    }

    /// Horizontal bar chart, one line per bin, bars scaled to `width` columns.
    pub fn to_ascii(&self, width: usize) -> String {
        let max = self.counts.iter().copied().max().unwrap_or(0).max(1);
        let label_width = self.centers().map(|c| fmt_center(c).len()).max().unwrap_or(1);
        let mut out = String::new();
        for (c, n) in self.bins() {
            let len = ((n as f64 / max as f64) * width as f64).round() as usize;
            let bar = if n > 0 { len.max(1) } else { 0 };
            let _ = writeln!(
                out,
                "{:>lw$} | {:<bw$} {}",
                fmt_center(c),
                "#".repeat(bar),
                n,
                lw = label_width,
                bw = width
            );
        }
        out
    }
}

fn bin_of(v: f64, width: f64) -> i64 {
    (v / width + 0.5).floor() as i64
}

fn fmt_center(c: f64) -> String {
    // Avoid "-0".
    let c = if c == 0.0 { 0.0 } else { c };
    format!("{c}")
}
