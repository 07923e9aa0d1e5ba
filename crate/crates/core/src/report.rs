//! Spare-capacity efficiency and the method comparison table.

use std::time::Duration;

use pcycle_ilp::SolveStatus;

use crate::error::{Error, Result};
use crate::plan::{Method, MethodOutcome};
use crate::topology::{avg_nodal_degree, Network};

/// Total spare over total working capacity.
pub fn compute_se(spare: &[u32], net: &Network) -> Result<f64> {
    let working = net.total_working();
    if working == 0 {
        return Err(Error::SeUndefined);
    }
    let spare: u64 = spare.iter().map(|&s| s as u64).sum();
    Ok(spare as f64 / working as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub network: String,
    pub method: Method,
    pub avg_degree: f64,
    pub total_working: u64,
    /// Spare of the optimal plan; `None` unless solved to optimality.
    pub total_spare: Option<u64>,
    pub se: Option<f64>,
    pub status: SolveStatus,
    pub ilp_time: Duration,
    pub variable_count: usize,
    pub constraint_count: usize,
}

impl MethodResult {
    pub fn from_outcome<P>(net: &Network, method: Method, outcome: &MethodOutcome<P>, spare: impl Fn(&P) -> &[u32]) -> Self {
        let optimal = outcome.is_optimal().then_some(()).and(outcome.plan.as_ref());
        let total_spare = optimal.map(|p| spare(p).iter().map(|&s| s as u64).sum());
        let se = optimal.and_then(|p| compute_se(spare(p), net).ok());
        MethodResult {
            network: net.name().to_string(),
            method,
            avg_degree: avg_nodal_degree(net),
            total_working: net.total_working(),
            total_spare,
            se,
            status: outcome.status,
            ilp_time: outcome.stats.wall_time,
            variable_count: outcome.stats.variable_count,
            constraint_count: outcome.stats.constraint_count,
        }
    }

    /// Result for a method that could not even build a model (no straddling
    /// cycle or no protection-pair for a loaded link).
    pub fn infeasible(net: &Network, method: Method) -> Self {
        MethodResult {
            network: net.name().to_string(),
            method,
            avg_degree: avg_nodal_degree(net),
            total_working: net.total_working(),
            total_spare: None,
            se: None,
            status: SolveStatus::Infeasible,
            ilp_time: Duration::ZERO,
            variable_count: 0,
            constraint_count: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    /// When false, solve times print as `-` so output is byte-stable.
    pub timings: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { timings: true }
    }
}

pub const HEADER: [&str; 7] = [
    "Network",
    "Avg degree",
    "Working capacity",
    "DB SE",
    "DB ILP time (s)",
    "SG SE",
    "SG ILP time (s)",
];

const DASH: &str = "\u{2014}";

fn se_cell(r: &MethodResult) -> String {
    match (r.status, r.se) {
        (SolveStatus::Optimal, Some(se)) => format!("{se:.2}"),
        _ => DASH.to_string(),
    }
}

fn time_cell(r: &MethodResult, opts: TableOptions) -> String {
    match r.status {
        SolveStatus::CapHit => "cap".to_string(),
        SolveStatus::Infeasible => "infeasible".to_string(),
        SolveStatus::Unbounded => "unbounded".to_string(),
        SolveStatus::Optimal if opts.timings => format!("{:.2}", r.ilp_time.as_secs_f64()),
        SolveStatus::Optimal => "-".to_string(),
    }
}

fn sorted(results: &[(MethodResult, MethodResult)]) -> Vec<&(MethodResult, MethodResult)> {
    let mut rows: Vec<_> = results.iter().collect();
    rows.sort_by(|a, b| a.0.network.cmp(&b.0.network));
    rows
}

fn text_rows(results: &[(MethodResult, MethodResult)], opts: TableOptions) -> Vec<[String; 7]> {
    sorted(results)
        .into_iter()
        .map(|(db, sg)| {
            [
                db.network.clone(),
                format!("{:.1}", db.avg_degree),
                db.total_working.to_string(),
                se_cell(db),
                time_cell(db, opts),
                se_cell(sg),
                time_cell(sg, opts),
            ]
        })
        .collect()
}

/// Aligned text table; rows are (DB, SG) results for one network.
pub fn render_text_table(results: &[(MethodResult, MethodResult)], opts: TableOptions) -> String {
    let rows = text_rows(results, opts);
    let mut width: Vec<usize> = HEADER.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let mut out = String::new();
        for (k, (cell, &w)) in cells.iter().zip(&width).enumerate() {
            let pad = w - cell.chars().count();
            if k == 0 {
                out.push_str(cell);
                out.push_str(&" ".repeat(pad));
            } else {
                out.push_str("  ");
                out.push_str(&" ".repeat(pad));
                out.push_str(cell);
            }
        }
        out.trim_end().to_string() + "\n"
    };
    let header: Vec<String> = HEADER.iter().map(|h| h.to_string()).collect();
    let mut out = line(&header);
    out.push_str(&"-".repeat(width.iter().sum::<usize>() + 2 * (width.len() - 1)));
    out.push('\n');
    for row in &rows {
        out.push_str(&line(row));
    }
    out
}

pub const CSV_HEADER: [&str; 13] = [
    "network",
    "avg_degree",
    "working_capacity",
    "db_se",
    "db_time_s",
    "db_status",
    "db_variables",
    "db_constraints",
    "sg_se",
    "sg_time_s",
    "sg_status",
    "sg_variables",
    "sg_constraints",
];

/// CSV with full-precision values; SE is empty unless optimal.
pub fn render_csv(results: &[(MethodResult, MethodResult)], opts: TableOptions) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    let time = |r: &MethodResult| {
        if opts.timings {
            r.ilp_time.as_secs_f64().to_string()
        } else {
            String::new()
        }
    };
    let se = |r: &MethodResult| match (r.status, r.se) {
        (SolveStatus::Optimal, Some(se)) => se.to_string(),
        _ => String::new(),
    };
    for (db, sg) in sorted(results) {
        w.write_record([
            db.network.clone(),
            db.avg_degree.to_string(),
            db.total_working.to_string(),
            se(db),
            time(db),
            db.status.label().to_string(),
            db.variable_count.to_string(),
            db.constraint_count.to_string(),
            se(sg),
            time(sg),
            sg.status.label().to_string(),
            sg.variable_count.to_string(),
            sg.constraint_count.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Text table plus CSV for the same rows.
pub fn render_results_table(results: &[(MethodResult, MethodResult)], opts: TableOptions) -> Result<(String, String)> {
    Ok((render_text_table(results, opts), render_csv(results, opts)?))
}
