//! Best-bound branch-and-bound over the LP relaxation.
//!
//! Branching picks the most fractional variable (lowest index on ties);
//! the open node with the smallest relaxation bound is expanded next
//! (earliest created on ties), so the search is fully deterministic.
//!
//! Before the search every row whose coefficients are all integral is
//! divided by their gcd and its right-hand side rounded inward. Integer
//! points are unaffected, but the relaxation gets noticeably tighter on
//! rows like `2a + 2b >= 1`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::mpsc::{self, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use log::{debug, warn};

use crate::lp::{LpEngine, LpOptions, LpSolution, LpStatus, Relaxation, Row};
use crate::model::{IlpModel, Sense, VarId};
use crate::IlpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Time or node limit reached; the incumbent, if any, is returned.
    CapHit,
}

impl SolveStatus {
    pub fn label(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::CapHit => "cap",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    pub nodes_explored: u64,
    pub lp_solves: u64,
    pub lp_iterations: u64,
    pub wall_time: Duration,
    pub variable_count: usize,
    pub constraint_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntSolution {
    pub status: SolveStatus,
    /// One value per model variable; empty when no integer point was found.
    pub values: Vec<i64>,
    pub objective_value: f64,
    /// Smallest relaxation bound over unexplored nodes at termination.
    pub best_bound: f64,
    pub stats: SolveStats,
}

impl IntSolution {
    pub fn has_incumbent(&self) -> bool {
        !self.values.is_empty()
    }

    pub fn value(&self, var: VarId) -> Option<i64> {
        self.values.get(var.0).copied()
    }

    pub fn value_by_name(&self, model: &IlpModel, name: &str) -> Option<i64> {
        model.var_by_name(name).and_then(|v| self.value(v))
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub time_limit: Duration,
    pub node_limit: Option<u64>,
    pub int_tol: f64,
    pub lp: LpOptions,
    pub normalize_rows: bool,
}

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            time_limit: DEFAULT_TIME_LIMIT,
            node_limit: None,
            int_tol: 1e-6,
            lp: LpOptions::default(),
            normalize_rows: true,
        }
    }
}

impl SolveOptions {
    pub fn with_time_limit(time_limit: Duration) -> Self {
        SolveOptions {
            time_limit,
            ..Default::default()
        }
    }
}

/// Solves `model` to integer optimality within `time_limit`.
pub fn solve_bb(model: &IlpModel, time_limit: Duration) -> Result<IntSolution, IlpError> {
    BranchAndBound::new(model, SolveOptions::with_time_limit(time_limit)).solve()
}

pub struct BranchAndBound<'m> {
    model: &'m IlpModel,
    opts: SolveOptions,
    start: Option<Vec<i64>>,
}

struct Node {
    bound: f64,
    seq: u64,
    /// Tightened bounds relative to the root: (column, lower, upper).
    changes: Vec<(usize, f64, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // BinaryHeap is a max-heap: invert so the smallest bound, then the
    // earliest node, comes out first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl<'m> BranchAndBound<'m> {
    pub fn new(model: &'m IlpModel, opts: SolveOptions) -> Self {
        BranchAndBound {
            model,
            opts,
            start: None,
        }
    }

    /// Seeds the search with a known integer point. Ignored (with a warning)
    /// when it violates the model.
    pub fn with_incumbent(mut self, values: Vec<i64>) -> Self {
        self.start = Some(values);
        self
    }

    pub fn solve(self) -> Result<IntSolution, IlpError> {
        let clock = Instant::now();
        let model = self.model;
        let opts = &self.opts;
        let mut stats = SolveStats {
            variable_count: model.var_count(),
            constraint_count: model.constraint_count(),
            ..Default::default()
        };

        let mut root = Relaxation::from_model(model);
        if opts.normalize_rows {
            if !normalize_rows(&mut root.rows) {
                stats.wall_time = clock.elapsed();
                return Ok(IntSolution {
                    status: SolveStatus::Infeasible,
                    values: Vec::new(),
                    objective_value: f64::INFINITY,
                    best_bound: f64::INFINITY,
                    stats,
                });
            }
        }
        let integral_obj = model.has_integral_objective();

        let mut incumbent: Option<(Vec<i64>, f64)> = None;
        if let Some(start) = self.start {
            match model.check_assignment(&start, opts.int_tol) {
                Ok(()) => {
                    let z = model.objective_value_int(&start);
                    incumbent = Some((start, z));
                }
                Err(why) => warn!("initial incumbent rejected: {why}"),
            }
        }

        let prune = |bound: f64, inc: &Option<(Vec<i64>, f64)>| -> bool {
            match inc {
                None => false,
                Some((_, z)) => {
                    let b = if integral_obj {
                        (bound - opts.int_tol).ceil()
                    } else {
                        bound
                    };
                    b >= z - 1e-9
                }
            }
        };

        let mut heap = BinaryHeap::new();
        let mut seq = 0u64;
        heap.push(Node {
            bound: f64::NEG_INFINITY,
            seq,
            changes: Vec::new(),
        });
        seq += 1;

        let mut capped = false;
        let mut unbounded = false;
        let mut work = root.clone();

        while let Some(node) = heap.pop() {
            if prune(node.bound, &incumbent) {
                continue;
            }
            let over_time = clock.elapsed() >= opts.time_limit;
            let over_nodes = opts.node_limit.is_some_and(|l| stats.nodes_explored >= l);
            if over_time || over_nodes {
                heap.push(node);
                capped = true;
                break;
            }

            work.lower.clone_from(&root.lower);
            work.upper.clone_from(&root.upper);
            for &(j, lo, hi) in &node.changes {
                work.lower[j] = lo;
                work.upper[j] = hi;
            }
            let remaining = opts.time_limit.saturating_sub(clock.elapsed());
            let Some(lp) = solve_within(&work, &opts.lp, remaining)? else {
                heap.push(node);
                capped = true;
                break;
            };
            stats.nodes_explored += 1;
            stats.lp_solves += 1;
            stats.lp_iterations += lp.iterations as u64;

            match lp.status {
                LpStatus::Infeasible => continue,
                LpStatus::Unbounded => {
                    if node.changes.is_empty() {
                        unbounded = true;
                        break;
                    }
                    continue;
                }
                LpStatus::Optimal => {}
            }
            if prune(lp.objective, &incumbent) {
                continue;
            }

            let mut branch: Option<(usize, f64)> = None;
            for (j, &x) in lp.values.iter().enumerate() {
                let frac = (x - x.round()).abs();
                if frac > opts.int_tol && branch.is_none_or(|(_, f)| frac > f + 1e-12) {
                    branch = Some((j, frac));
                }
            }

            match branch {
                None => {
                    let point: Vec<i64> = lp.values.iter().map(|x| x.round() as i64).collect();
                    match model.check_assignment(&point, 1e-6) {
                        Ok(()) => {
                            let z = model.objective_value_int(&point);
                            if incumbent.as_ref().is_none_or(|(_, best)| z < best - 1e-9) {
                                debug!("incumbent {z} at node {}", stats.nodes_explored);
                                incumbent = Some((point, z));
                            }
                        }
                        Err(why) => warn!("rounded relaxation point rejected: {why}"),
                    }
                }
                Some((j, _)) => {
                    let x = lp.values[j];
                    let (lo, hi) = (work.lower[j], work.upper[j]);
                    let mut down = node.changes.clone();
                    set_bounds(&mut down, j, lo, x.floor());
                    let mut up = node.changes;
                    set_bounds(&mut up, j, x.ceil(), hi);
                    for changes in [down, up] {
                        heap.push(Node {
                            bound: lp.objective,
                            seq,
                            changes,
                        });
                        seq += 1;
                    }
                }
            }
        }

        stats.wall_time = clock.elapsed();
        let best_bound = heap
            .iter()
            .map(|n| n.bound)
            .fold(f64::INFINITY, f64::min)
            .min(incumbent.as_ref().map_or(f64::INFINITY, |(_, z)| *z));
        let status = if unbounded {
            SolveStatus::Unbounded
        } else if capped {
            SolveStatus::CapHit
        } else if incumbent.is_some() {
            SolveStatus::Optimal
        } else {
            SolveStatus::Infeasible
        };
        let (values, objective_value) = match (status, incumbent) {
            (SolveStatus::Unbounded, _) | (_, None) => (Vec::new(), f64::INFINITY),
            (_, Some((v, z))) => (v, z),
        };
        Ok(IntSolution {
            status,
            values,
            objective_value,
            best_bound,
            stats,
        })
    }
}

/// Solves one relaxation, giving up once `remaining` runs out. The sparse
/// engine offers no way to interrupt a solve, so it runs on a worker thread
/// that is abandoned (and finishes in the background) when time is up.
fn solve_within(lp: &Relaxation, opts: &LpOptions, remaining: Duration) -> Result<Option<LpSolution>, IlpError> {
    if opts.engine == LpEngine::Dense {
        return lp.solve(opts).map(Some);
    }
    let (tx, rx) = mpsc::channel();
    let (job, job_opts) = (lp.clone(), opts.clone());
    thread::spawn(move || {
        let _ = tx.send(job.solve(&job_opts));
    });
    match rx.recv_timeout(remaining) {
        Ok(out) => out.map(Some),
        Err(RecvTimeoutError::Timeout) => {
            warn!("relaxation abandoned at the time limit");
            Ok(None)
        }
        Err(RecvTimeoutError::Disconnected) => Err(IlpError::Instability("relaxation worker panicked".into())),
    }
}

fn set_bounds(changes: &mut Vec<(usize, f64, f64)>, j: usize, lo: f64, hi: f64) {
    match changes.iter_mut().find(|c| c.0 == j) {
        Some(c) => {
            c.1 = lo;
            c.2 = hi;
        }
        None => changes.push((j, lo, hi)),
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divides integral rows by the gcd of their coefficients and rounds the
/// right-hand side inward. Returns `false` if some equality row has no
/// integer solution.
pub(crate) fn normalize_rows(rows: &mut [Row]) -> bool {
    const EPS: f64 = 1e-9;
    for row in rows.iter_mut() {
        if row.terms.is_empty() {
            continue;
        }
        let integral = row
            .terms
            .iter()
            .all(|&(_, c)| (c - c.round()).abs() < EPS && c.abs() < 1e15);
        if !integral {
            continue;
        }
        let g = row
            .terms
            .iter()
            .fold(0u64, |g, &(_, c)| gcd(g, c.round().abs() as u64));
        let g = g.max(1) as f64;
        let rhs = row.rhs / g;
        for t in row.terms.iter_mut() {
            t.1 = t.1.round() / g;
        }
        row.rhs = match row.sense {
            Sense::Ge => (rhs - EPS).ceil(),
            Sense::Le => (rhs + EPS).floor(),
            Sense::Eq => {
                if (rhs - rhs.round()).abs() > EPS {
                    return false;
                }
                rhs.round()
            }
        };
    }
    true
}
