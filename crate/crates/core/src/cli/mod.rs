//! The `korovkin` command line: experiment config, the sweep runner, the axiom
//! check and re-summarizing an existing CSV.

mod config;
mod run;

use std::path::Path;

use anyhow::Context;

use crate::operators::OperatorKind;
use crate::operators::axioms::{self, Axiom};

pub use config::{ConfigError, EXPONENT_MENU, ExperimentConfig, report_path_for};
pub use run::{
    CSV_HEADER, Row, RunOutcome, format_number, parse_csv, render_bound_table, render_csv,
    render_report, run_experiment, summarize,
};

/// Runs the experiment at `config_path`, writes the CSV and report, and
/// returns whether every check passed.
pub fn run(config_path: &Path) -> anyhow::Result<bool> {
    let config = ExperimentConfig::load(config_path).context("invalid config")?;
    let outcome = run_experiment(&config)?;
    let csv_path = &config.output_path;
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(csv_path, render_csv(&outcome.rows))
        .with_context(|| format!("writing {}", csv_path.display()))?;
    let report = render_report(&config, &outcome);
    let report_path = config.report_path();
    std::fs::write(&report_path, &report)
        .with_context(|| format!("writing {}", report_path.display()))?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{} rows -> {}, report -> {}",
        outcome.rows.len(),
        csv_path.display(),
        report_path.display()
    );
    let passed = outcome.passed();
    println!("status: {}", if passed { "PASS" } else { "FAIL" });
    Ok(passed)
}

/// Prints per-axiom pass counts for every operator family; true iff all pass.
pub fn verify_axioms(seed: u64) -> anyhow::Result<bool> {
    let reports = axioms::axiom_suite(seed, axioms::DEFAULT_TRIALS)?;
    let per_kind = axioms::AXIOM_DEGREES.len();
    let mut all = true;
    for (kind, chunk) in OperatorKind::FAMILIES.iter().zip(reports.chunks(per_kind)) {
        for axiom in Axiom::ALL {
            let (passed, failed) = chunk
                .iter()
                .map(|r| r.tally(axiom))
                .fold((0, 0), |acc, t| (acc.0 + t.passed, acc.1 + t.failed));
            all &= failed == 0;
            println!(
                "{:<20} {:<24} {:>4}/{:<4} {}",
                kind.name(),
                axiom.name(),
                passed,
                passed + failed,
                if failed == 0 { "pass" } else { "FAIL" }
            );
        }
    }
    println!("status: {}", if all { "PASS" } else { "FAIL" });
    Ok(all)
}

/// Re-derives fitted constants and slopes from a CSV written by [`run`].
pub fn report(csv_path: &Path) -> anyhow::Result<bool> {
    let text = std::fs::read_to_string(csv_path)
        .with_context(|| format!("reading {}", csv_path.display()))?;
    let rows = parse_csv(&text).with_context(|| format!("parsing {}", csv_path.display()))?;
    let reports = summarize(&rows);
    print!("{}", render_bound_table(&reports));
    let passed = reports.iter().all(|r| r.passed());
    println!("status: {}", if passed { "PASS" } else { "FAIL" });
    Ok(passed)
}
