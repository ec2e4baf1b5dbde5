//! The sweep behind `korovkin run` and the CSV/report it leaves behind.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::funcspace::{Exponent, Func1D, Grid, suite_function};
use crate::korovkin::{
    BoundEntry, BoundReport, ErrorProfile, KorovkinIndices, OperatorLab, TheoremId,
    bernstein_comparisons,
};
use crate::operators::axioms::{self, AxiomReport};
use crate::operators::{OperatorKind, OperatorSpec};

pub const CSV_HEADER: &str =
    "experiment,operator,n,p,function,error_lp,lambda_p,mu_n,t_np,s_np,theorem,rhs_core,ratio";

/// One CSV line.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub operator: OperatorKind,
    pub n: usize,
    pub p: Exponent,
    pub function: String,
    pub error_lp: f64,
    pub lambda_p: f64,
    pub mu_n: f64,
    pub t_np: f64,
    pub s_np: f64,
    pub theorem: TheoremId,
    pub rhs_core: f64,
}

impl Row {
    fn new(
        experiment: &str,
        function: &str,
        idx: &KorovkinIndices,
        op: OperatorKind,
        e: &BoundEntry,
    ) -> Self {
        Row {
            experiment: experiment.to_string(),
            operator: op,
            n: idx.n,
            p: idx.p,
            function: function.to_string(),
            error_lp: e.lhs,
            lambda_p: idx.lambda_p,
            mu_n: idx.mu_n,
            t_np: idx.t_np,
            s_np: idx.s_np,
            theorem: e.theorem,
            rhs_core: e.rhs_core,
        }
    }

    pub fn entry(&self) -> BoundEntry {
        BoundEntry {
            theorem: self.theorem,
            n: self.n,
            lhs: self.error_lp,
            rhs_core: self.rhs_core,
        }
    }

    fn key_cmp(&self, other: &Row) -> Ordering {
        self.experiment
            .cmp(&other.experiment)
            .then_with(|| self.operator.name().cmp(other.operator.name()))
            .then_with(|| self.n.cmp(&other.n))
            .then_with(|| self.p.value().total_cmp(&other.p.value()))
            .then_with(|| self.function.cmp(&other.function))
            .then_with(|| self.theorem.name().cmp(other.theorem.name()))
    }

    /// The ratio column is computed from the printed `error_lp` and `rhs_core`
    /// so that it agrees with them to within its own rounding.
    pub fn to_csv(&self) -> String {
        let lhs = format_number(self.error_lp);
        let rhs = format_number(self.rhs_core);
        let ratio = BoundEntry {
            lhs: lhs.parse().expect("formatted number"),
            rhs_core: rhs.parse().expect("formatted number"),
            ..self.entry()
        }
        .ratio()
        .map(format_number)
        .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.operator,
            self.n,
            self.p,
            self.function,
            lhs,
            format_number(self.lambda_p),
            format_number(self.mu_n),
            format_number(self.t_np),
            format_number(self.s_np),
            self.theorem,
            rhs,
            ratio,
        )
    }

    pub fn from_csv(line: &str) -> Result<Self> {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 13 {
            return Err(Error::InvalidArgument(format!(
                "expected 13 columns, got {}: `{line}`",
                cols.len()
            )));
        }
        let num = |i: usize| -> Result<f64> {
            cols[i].parse().map_err(|_| {
                Error::InvalidArgument(format!("column {}: `{}` is not a number", i + 1, cols[i]))
            })
        };
        Ok(Row {
            experiment: cols[0].to_string(),
            operator: cols[1].parse()?,
            n: cols[2]
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad degree `{}`", cols[2])))?,
            p: cols[3].parse()?,
            function: cols[4].to_string(),
            error_lp: num(5)?,
            lambda_p: num(6)?,
            mu_n: num(7)?,
            t_np: num(8)?,
            s_np: num(9)?,
            theorem: cols[10].parse()?,
            rhs_core: num(11)?,
        })
    }
}

/// `%.12g`: twelve significant digits, scientific outside `[1e-4, 1e12)`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(rows.len() * 120);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CSV_HEADER => {}
        other => {
            return Err(Error::InvalidArgument(format!(
                "unexpected CSV header `{}`",
                other.unwrap_or("")
            )));
        }
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(Row::from_csv)
        .collect()
}

/// Groups rows into degree sweeps, one per `(experiment, theorem, operator, function, p)`.
pub fn summarize(rows: &[Row]) -> Vec<BoundReport> {
    type Key<'a> = (String, &'a str, &'a str, String, u64);
    type Sweep = (TheoremId, OperatorKind, Exponent, Vec<BoundEntry>);
    let mut groups: BTreeMap<Key, Sweep> = BTreeMap::new();
    for r in rows {
        let key = (
            r.experiment.clone(),
            r.theorem.name(),
            r.operator.name(),
            r.function.clone(),
            r.p.value().to_bits(),
        );
        groups
            .entry(key)
            .or_insert_with(|| (r.theorem, r.operator, r.p, Vec::new()))
            .3
            .push(r.entry());
    }
    groups
        .into_iter()
        .map(|((_, _, _, function, _), (theorem, op, p, entries))| {
            BoundReport::from_entries(theorem, op, function, p, entries)
        })
        .collect()
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub rows: Vec<Row>,
    pub reports: Vec<BoundReport>,
    pub axioms: Vec<AxiomReport>,
    /// `(n, function, p, which chain)` of failed comparison chains.
    pub chain_failures: Vec<String>,
    pub chain_checks: usize,
    pub warnings: Vec<String>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(BoundReport::passed)
            && self.axioms.iter().all(AxiomReport::all_passed)
            && self.chain_failures.is_empty()
    }
}

/// All rows of one `(operator, n)` cell.
fn sweep_operator(
    config: &ExperimentConfig,
    op: OperatorSpec,
    functions: &[Func1D],
    grid: Grid,
) -> Result<Vec<Row>> {
    let lab = OperatorLab::new(op, grid)?;
    let mut rows = Vec::new();
    for f in functions {
        let residual = ErrorProfile::compute(&op, f, grid)?;
        for &p in &config.exponents {
            let applicable: Vec<TheoremId> = config
                .theorems
                .iter()
                .copied()
                .filter(|t| t.check_compatible(op.kind(), f, p).is_ok())
                .collect();
            if applicable.is_empty() {
                continue;
            }
            let idx = lab.indices(p)?;
            for theorem in applicable {
                let entry = lab.bound(theorem, f, &residual, p)?;
                rows.push(Row::new(
                    &config.experiment,
                    f.id(),
                    &idx,
                    op.kind(),
                    &entry,
                ));
            }
        }
    }
    Ok(rows)
}

fn comparison_chains(
    config: &ExperimentConfig,
    functions: &[Func1D],
    grid: Grid,
) -> Result<(usize, Vec<String>)> {
    let wants = |t: TheoremId, k: OperatorKind| {
        config.theorems.contains(&t) && config.operators.contains(&k)
    };
    let check_max = wants(TheoremId::Sec6Max, OperatorKind::MaxBernstein);
    let check_sup = wants(TheoremId::Sec6Sup, OperatorKind::SupBernstein);
    if !check_max && !check_sup {
        return Ok((0, Vec::new()));
    }
    let cells: Vec<(usize, &Func1D, Exponent)> = config
        .degrees
        .iter()
        .flat_map(|&n| {
            functions
                .iter()
                .flat_map(move |f| config.exponents.iter().map(move |&p| (n, f, p)))
        })
        .collect();
    let results: Vec<Vec<String>> = cells
        .par_iter()
        .map(|&(n, f, p)| {
            let c = bernstein_comparisons(n, f, p, grid)?;
            let mut failed = Vec::new();
            if check_max && !c.max_chain.holds {
                failed.push(format!(
                    "max chain n={n} f={} p={p} slack={:e}",
                    f.id(),
                    c.max_chain.slack
                ));
            }
            if check_sup && !c.sup_chain.holds {
                failed.push(format!(
                    "sup chain n={n} f={} p={p} slack={:e}",
                    f.id(),
                    c.sup_chain.slack
                ));
            }
            Ok(failed)
        })
        .collect::<Result<_>>()?;
    let per_cell = usize::from(check_max) + usize::from(check_sup);
    Ok((
        cells.len() * per_cell,
        results.into_iter().flatten().collect(),
    ))
}

/// Runs the full sweep of `config` in memory.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutcome> {
    config
        .validate()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let grid = Grid::new(config.grid_m)?;
    let functions: Vec<Func1D> = config
        .functions
        .iter()
        .map(|id| suite_function(id).expect("validated function id"))
        .collect();
    let specs: Vec<OperatorSpec> = config
        .operators
        .iter()
        .flat_map(|&k| config.degrees.iter().map(move |&n| (k, n)))
        .map(|(k, n)| OperatorSpec::new(k, n)?.with_resolution(config.resolution()))
        .collect::<Result<_>>()?;

    let mut rows: Vec<Row> = specs
        .par_iter()
        .map(|&op| sweep_operator(config, op, &functions, grid))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    rows.sort_by(Row::key_cmp);

    let reports = summarize(&rows);
    let mut warnings = Vec::new();
    for r in &reports {
        if let Err(Error::InsufficientData { have, need }) = &r.rate_slope
            && *have > 0
        {
            warnings.push(format!(
                "rate slope unavailable for {} {} {} p={}: {have} usable degrees, need {need}",
                r.theorem, r.operator, r.function, r.p
            ));
        }
    }

    let axioms = config
        .operators
        .par_iter()
        .enumerate()
        .flat_map(|(i, &kind)| {
            axioms::AXIOM_DEGREES
                .par_iter()
                .enumerate()
                .map(move |(j, &n)| {
                    let op = OperatorSpec::new(kind, n)?.with_resolution(config.resolution())?;
                    let seed = config
                        .seed
                        .wrapping_add((i * axioms::AXIOM_DEGREES.len() + j) as u64);
                    axioms::check_axioms(&op, axioms::DEFAULT_TRIALS, seed)
                })
        })
        .collect::<Result<Vec<_>>>()?;

    let (chain_checks, chain_failures) = comparison_chains(config, &functions, grid)?;

    Ok(RunOutcome {
        rows,
        reports,
        axioms,
        chain_failures,
        chain_checks,
        warnings,
    })
}

fn option_number(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_else(|| "-".into())
}

/// Table of fitted constants and slopes, one line per degree sweep.
pub fn render_bound_table(reports: &[BoundReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:<20} {:<9} {:>4} {:>18} {:>18} {:>7} {:>5}",
        "theorem", "operator", "function", "p", "fitted_constant", "rate_slope", "stable", "hard"
    );
    for r in reports {
        let slope = r.rate_slope.as_ref().ok().copied();
        let _ = writeln!(
            out,
            "{:<10} {:<20} {:<9} {:>4} {:>18} {:>18} {:>7} {:>5}",
            r.theorem.name(),
            r.operator.name(),
            r.function,
            r.p.to_string(),
            option_number(r.fitted_constant),
            option_number(slope),
            if r.stable { "yes" } else { "NO" },
            r.hard_failures,
        );
    }
    out
}

pub fn render_report(config: &ExperimentConfig, outcome: &RunOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "experiment: {}", config.experiment);
    let _ = writeln!(
        out,
        "operators: {}",
        config
            .operators
            .iter()
            .map(|k| k.name())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(
        out,
        "degrees: {}",
        config
            .degrees
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(
        out,
        "grid_m: {}  sup_samples: {}  choquet_samples: {}  seed: {}",
        config.grid_m, config.sup_samples, config.choquet_samples, config.seed
    );
    let _ = writeln!(out, "rows: {}", outcome.rows.len());
    out.push('\n');

    let failing = outcome.reports.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(
        out,
        "bound sweeps: {} ({} failing)",
        outcome.reports.len(),
        failing
    );
    out.push_str(&render_bound_table(&outcome.reports));
    out.push('\n');

    let _ = writeln!(out, "axioms:");
    for rep in &outcome.axioms {
        let failed: usize = rep.tallies.iter().map(|t| t.failed).sum();
        let total: usize = rep.tallies.iter().map(|t| t.passed + t.failed).sum();
        let _ = writeln!(
            out,
            "  {:<28} {}/{} passed",
            rep.label,
            total - failed,
            total
        );
        for t in rep.tallies.iter().filter(|t| t.failed > 0) {
            let _ = writeln!(
                out,
                "    {} failed {} times, worst violation {:e}",
                t.axiom, t.failed, t.worst
            );
        }
    }
    out.push('\n');

    let _ = writeln!(
        out,
        "comparison chains: {}/{} hold",
        outcome.chain_checks - outcome.chain_failures.len(),
        outcome.chain_checks
    );
    for f in &outcome.chain_failures {
        let _ = writeln!(out, "  {f}");
    }
    for w in &outcome.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(
        out,
        "status: {}",
        if outcome.passed() { "PASS" } else { "FAIL" }
    );
    out
}
