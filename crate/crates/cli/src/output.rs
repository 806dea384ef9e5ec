//! Report formats and output-path plumbing shared by the subcommands.
//!
//! Every float is rendered through [`isoprofile::fmt_float`], so a report
//! is byte-identical across runs and platforms for identical inputs.

use anyhow::{Context, Result};
use clap::ValueEnum;
use isoprofile::fmt_float;
use isoprofile::inequality_checks::CheckReport;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// How a report is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    /// Full tab-separated report with a `# summary:` trailer.
    Tsv,
    /// Two-column blocks headed by `# series: <name>` lines, directly
    /// consumable by plotting tools.
    PlotData,
}

/// Write `content` to the path, or to stdout when no path was given.
pub fn write_out(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)
            .with_context(|| format!("cannot write {}", p.display())),
        None => std::io::stdout()
            .lock()
            .write_all(content.as_bytes())
            .context("cannot write to stdout"),
    }
}

/// A named curve in the plot-data format.
pub struct Series<'a> {
    pub name: &'a str,
    pub rows: Vec<(f64, f64)>,
}

pub fn plot_data(series: &[Series]) -> String {
    let mut out = String::new();
    for (i, s) in series.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        writeln!(out, "# series: {}", s.name).expect("string writes cannot fail");
        for &(x, y) in &s.rows {
            writeln!(out, "{}\t{}", fmt_float(x), fmt_float(y))
                .expect("string writes cannot fail");
        }
    }
    out
}

/// Render a pointwise residual report in the chosen format.
pub fn residual_report(report: &CheckReport, format: FormatArg) -> String {
    match format {
        FormatArg::Tsv => report.to_tsv_string(),
        FormatArg::PlotData => plot_data(&[Series {
            name: "residual",
            rows: report.records.iter().map(|r| (r.v, r.residual)).collect(),
        }]),
    }
}
