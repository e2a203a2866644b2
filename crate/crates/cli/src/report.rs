//! Rendering of reports as aligned text, JSON or CSV.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::runner::{DemoReport, ExperimentReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    name: &'a str,
    n: usize,
    trials: usize,
    seed: u64,
    scheme: &'a str,
    variant: String,
    test_mode: String,
    attack: &'a str,
    message: &'a str,
    accept_rate: f64,
    success_rate: f64,
    mean_detection: f64,
    expected_detection: f64,
}

fn summary_row<'a>(name: &'a str, r: &'a ExperimentReport) -> SummaryRow<'a> {
    SummaryRow {
        name,
        n: r.config.n,
        trials: r.config.trials,
        seed: r.config.seed,
        scheme: &r.config.scheme,
        variant: format!("{:?}", r.config.variant),
        test_mode: format!("{:?}", r.config.test_mode).to_lowercase(),
        attack: &r.config.attack,
        message: &r.config.message,
        accept_rate: r.accept_rate,
        success_rate: r.success_rate,
        mean_detection: r.mean_detection,
        expected_detection: r.expected_detection,
    }
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("in-memory csv write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

fn table(name: &str, r: &ExperimentReport) -> String {
    let c = &r.config;
    let rows = [
        ("experiment", name.to_string()),
        ("qubits", c.n.to_string()),
        ("trials", c.trials.to_string()),
        ("seed", c.seed.to_string()),
        ("scheme", c.scheme.clone()),
        ("variant", format!("{:?}", c.variant)),
        ("test mode", format!("{:?}", c.test_mode).to_lowercase()),
        ("attack", c.attack.clone()),
        ("message", c.message.clone()),
        ("accept rate", format!("{:.4}", r.accept_rate)),
        ("success rate", format!("{:.4}", r.success_rate)),
        ("mean detection", format!("{:.4}", r.mean_detection)),
        ("expected detection", format!("{:.4}", r.expected_detection)),
        ("duration", format!("{:.3} s", r.duration.as_secs_f64())),
    ];
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

pub fn render_report(report: &ExperimentReport, format: Format) -> String {
    match format {
        Format::Table => table("run", report),
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Csv => csv_string(|w| match &report.records {
            Some(records) => records.iter().try_for_each(|r| w.serialize(r)),
            None => w.serialize(summary_row("run", report)),
        }),
    }
}

pub fn render_demo(demo: &DemoReport, format: Format) -> String {
    match format {
        Format::Table => demo.experiments.iter().map(|e| table(e.name, &e.report)).collect::<Vec<_>>().join("\n"),
        Format::Json => serde_json::to_string_pretty(demo).expect("reports serialize") + "\n",
        Format::Csv => {
            csv_string(|w| demo.experiments.iter().try_for_each(|e| w.serialize(summary_row(e.name, &e.report))))
        }
    }
}

/// Writes `text` to `out`, or standard output when `out` is `None`.
pub fn emit_report(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
