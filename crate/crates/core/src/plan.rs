//! Protection plans, solver outcomes and the plan text format.
//!
//! ```text
//! sg-plan                 # or db-plan
//! max-hops 4
//! cycles 7                # size of the candidate set the ids refer to
//! cycle <id> copies <n_p>
//! alloc <link> <cycle> <n_ip>
//! pairalloc <link> <p> <q> <n_ipq>   # db-plan only
//! spare <link> <s_i>
//! ```
//!
//! Entries that are zero may be omitted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use pcycle_ilp::{SolveStats, SolveStatus};

use crate::cycles::{CycleId, CycleSet};
use crate::error::{Error, Result};
use crate::topology::{LinkId, Network};

/// Single-cycle (straddling-only) plan.
#[derive(Debug, Clone, PartialEq)]
pub struct SgPlan {
    /// n_p, one entry per cycle.
    pub copies: Vec<u32>,
    /// Nonzero n_{i,p}.
    pub allocations: BTreeMap<(LinkId, CycleId), u32>,
    /// s_i, one entry per link.
    pub spare: Vec<u32>,
    pub total_cost: f64,
}

/// Double-cycle plan.
#[derive(Debug, Clone, PartialEq)]
pub struct DbPlan {
    pub copies: Vec<u32>,
    /// Nonzero n_{i,p,q}: copies of p protecting i while paired with q.
    pub pair_allocations: BTreeMap<(LinkId, CycleId, CycleId), u32>,
    /// Nonzero n_{i,p}.
    pub per_cycle_allocations: BTreeMap<(LinkId, CycleId), u32>,
    pub spare: Vec<u32>,
    pub total_cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Sg,
    Db,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Sg => "SG",
            Method::Db => "DB",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sg" => Ok(Method::Sg),
            "db" => Ok(Method::Db),
            _ => Err(format!("unknown method `{s}` (expected sg or db)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Sg(SgPlan),
    Db(DbPlan),
}

impl Plan {
    pub fn method(&self) -> Method {
        match self {
            Plan::Sg(_) => Method::Sg,
            Plan::Db(_) => Method::Db,
        }
    }

    pub fn spare(&self) -> &[u32] {
        match self {
            Plan::Sg(p) => &p.spare,
            Plan::Db(p) => &p.spare,
        }
    }

    pub fn copies(&self) -> &[u32] {
        match self {
            Plan::Sg(p) => &p.copies,
            Plan::Db(p) => &p.copies,
        }
    }

    pub fn total_cost(&self) -> f64 {
        match self {
            Plan::Sg(p) => p.total_cost,
            Plan::Db(p) => p.total_cost,
        }
    }
}

fn spare_cost(net: &Network, spare: &[u32]) -> f64 {
    net.links()
        .iter()
        .zip(spare)
        .map(|(l, &s)| l.unit_cost * s as f64)
        .sum()
}

/// Minimal spare per link for the given copy vector: s_i = Σ_p n_p·δ_{i,p}.
pub fn spare_for_copies(cs: &CycleSet, copies: &[u32]) -> Vec<u32> {
    let mut spare = vec![0u32; cs.link_count()];
    for c in cs.cycles() {
        for &i in &c.on_cycle {
            spare[i.0] += copies[c.id.0];
        }
    }
    spare
}

impl SgPlan {
    pub fn total_spare(&self) -> u64 {
        self.spare.iter().map(|&s| s as u64).sum()
    }

    pub fn allocation(&self, i: LinkId, p: CycleId) -> u32 {
        self.allocations.get(&(i, p)).copied().unwrap_or(0)
    }

    /// Largest allocation any straddler holds on `p`.
    pub fn max_allocation(&self, p: CycleId) -> u32 {
        self.allocations
            .iter()
            .filter(|((_, q), _)| *q == p)
            .map(|(_, &n)| n)
            .max()
            .unwrap_or(0)
    }

    /// Adds `extra` copies of `p`, raising spare along the cycle so the plan
    /// stays self-consistent.
    pub fn add_copies(&mut self, net: &Network, cs: &CycleSet, p: CycleId, extra: u32) {
        self.copies[p.0] += extra;
        for &i in &cs.cycle(p).on_cycle {
            self.spare[i.0] += extra;
        }
        self.total_cost = spare_cost(net, &self.spare);
    }

    pub fn recompute_cost(&mut self, net: &Network) {
        self.total_cost = spare_cost(net, &self.spare);
    }
}

impl DbPlan {
    pub fn total_spare(&self) -> u64 {
        self.spare.iter().map(|&s| s as u64).sum()
    }

    pub fn pair_allocation(&self, i: LinkId, p: CycleId, q: CycleId) -> u32 {
        self.pair_allocations.get(&(i, p, q)).copied().unwrap_or(0)
    }

    pub fn allocation(&self, i: LinkId, p: CycleId) -> u32 {
        self.per_cycle_allocations.get(&(i, p)).copied().unwrap_or(0)
    }

    pub fn add_copies(&mut self, net: &Network, cs: &CycleSet, p: CycleId, extra: u32) {
        self.copies[p.0] += extra;
        for &i in &cs.cycle(p).on_cycle {
            self.spare[i.0] += extra;
        }
        self.total_cost = spare_cost(net, &self.spare);
    }

    pub fn recompute_cost(&mut self, net: &Network) {
        self.total_cost = spare_cost(net, &self.spare);
    }
}

/// Result of running one design method.
#[derive(Debug, Clone)]
pub struct MethodOutcome<P> {
    pub status: SolveStatus,
    /// Optimal plan, or the best incumbent when the solve was capped.
    pub plan: Option<P>,
    pub best_bound: f64,
    pub stats: SolveStats,
}

impl<P> MethodOutcome<P> {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn wall_time(&self) -> Duration {
        self.stats.wall_time
    }
}

/// Run-time knobs shared by both methods.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodOptions {
    pub time_limit: Duration,
    /// Largest protection-pair list kept per link.
    pub pair_cap: usize,
    /// Seed branch-and-bound with a constructive plan.
    pub warm_start: bool,
    /// Keep allocation variables only where they can be nonzero.
    pub pruned: bool,
}

impl Default for MethodOptions {
    fn default() -> Self {
        MethodOptions {
            time_limit: pcycle_ilp::DEFAULT_TIME_LIMIT,
            pair_cap: crate::db::DEFAULT_PAIR_CAP,
            warm_start: true,
            pruned: true,
        }
    }
}

impl MethodOptions {
    pub fn with_time_limit(time_limit: Duration) -> Self {
        MethodOptions {
            time_limit,
            ..Default::default()
        }
    }
}

// ---- text format ----

fn header(out: &mut String, kind: &str, cs: &CycleSet) {
    let _ = writeln!(out, "{kind}");
    let _ = writeln!(out, "max-hops {}", cs.max_hops());
    let _ = writeln!(out, "cycles {}", cs.len());
}

fn write_tail(out: &mut String, copies: &[u32], spare: &[u32]) {
    for (p, &n) in copies.iter().enumerate() {
        if n > 0 {
            let _ = writeln!(out, "cycle {p} copies {n}");
        }
    }
    for (i, &s) in spare.iter().enumerate() {
        let _ = writeln!(out, "spare {i} {s}");
    }
}

pub fn sg_plan_to_text(plan: &SgPlan, cs: &CycleSet) -> String {
    let mut out = String::new();
    header(&mut out, "sg-plan", cs);
    write_tail(&mut out, &plan.copies, &[]);
    for (&(i, p), &n) in &plan.allocations {
        let _ = writeln!(out, "alloc {i} {p} {n}");
    }
    write_tail(&mut out, &[], &plan.spare);
    out
}

pub fn db_plan_to_text(plan: &DbPlan, cs: &CycleSet) -> String {
    let mut out = String::new();
    header(&mut out, "db-plan", cs);
    write_tail(&mut out, &plan.copies, &[]);
    for (&(i, p), &n) in &plan.per_cycle_allocations {
        let _ = writeln!(out, "alloc {i} {p} {n}");
    }
    for (&(i, p, q), &n) in &plan.pair_allocations {
        let _ = writeln!(out, "pairalloc {i} {p} {q} {n}");
    }
    write_tail(&mut out, &[], &plan.spare);
    out
}

pub fn plan_to_text(plan: &Plan, cs: &CycleSet) -> String {
    match plan {
        Plan::Sg(p) => sg_plan_to_text(p, cs),
        Plan::Db(p) => db_plan_to_text(p, cs),
    }
}

/// Reads only the `max-hops` header so the caller can rebuild the cycle set.
pub fn plan_max_hops(text: &str) -> Result<Option<usize>> {
    for (k, raw) in text.lines().enumerate() {
        let mut words = raw.split('#').next().unwrap_or("").split_whitespace();
        if words.next() == Some("max-hops") {
            let v = words.next().and_then(|w| w.parse().ok()).ok_or(Error::PlanSyntax {
                line: k + 1,
                message: "max-hops needs a positive integer".into(),
            })?;
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Parses a plan against the network and candidate set it was solved on.
/// Ids are range-checked; the solver-side invariants are left to the
/// verifier.
pub fn parse_plan(text: &str, net: &Network, cs: &CycleSet) -> Result<Plan> {
    let mut kind: Option<Method> = None;
    let mut copies = vec![0u32; cs.len()];
    let mut spare = vec![0u32; net.link_count()];
    let mut alloc = BTreeMap::new();
    let mut pair = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| Error::PlanSyntax { line, message };
        let words: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let num = |w: &str| -> Result<usize> {
            w.parse::<usize>()
                .map_err(|_| err(format!("`{w}` is not a non-negative integer")))
        };
        let link = |w: &str| -> Result<LinkId> {
            let v = num(w)?;
            if v >= net.link_count() {
                return Err(err(format!("link id {v} out of range")));
            }
            Ok(LinkId(v))
        };
        let cycle = |w: &str| -> Result<CycleId> {
            let v = num(w)?;
            if v >= cs.len() {
                return Err(err(format!("cycle id {v} out of range")));
            }
            Ok(CycleId(v))
        };
        let count = |w: &str| -> Result<u32> {
            w.parse::<u32>()
                .map_err(|_| err(format!("`{w}` is not a non-negative integer")))
        };
        let arity = |n: usize| -> Result<()> {
            if words.len() != n {
                return Err(err(format!("`{}` expects {} fields", words[0], n - 1)));
            }
            Ok(())
        };
        if kind.is_none() {
            kind = Some(match words[0] {
                "sg-plan" => Method::Sg,
                "db-plan" => Method::Db,
                other => return Err(err(format!("expected `sg-plan` or `db-plan`, got `{other}`"))),
            });
            continue;
        }
        match words[0] {
            "max-hops" => {
                arity(2)?;
                let h = num(words[1])?;
                if h != cs.max_hops() {
                    return Err(err(format!(
                        "plan was built with max-hops {h}, candidate set uses {}",
                        cs.max_hops()
                    )));
                }
            }
            "cycles" => {
                arity(2)?;
                let n = num(words[1])?;
                if n != cs.len() {
                    return Err(err(format!("plan expects {n} cycles, candidate set has {}", cs.len())));
                }
            }
            "cycle" => {
                arity(4)?;
                if words[2] != "copies" {
                    return Err(err("expected `cycle <id> copies <n>`".into()));
                }
                copies[cycle(words[1])?.0] = count(words[3])?;
            }
            "alloc" => {
                arity(4)?;
                let n = count(words[3])?;
                if n > 0 {
                    alloc.insert((link(words[1])?, cycle(words[2])?), n);
                }
            }
            "pairalloc" => {
                if kind != Some(Method::Db) {
                    return Err(err("`pairalloc` only appears in db-plan".into()));
                }
                arity(5)?;
                let n = count(words[4])?;
                if n > 0 {
                    pair.insert((link(words[1])?, cycle(words[2])?, cycle(words[3])?), n);
                }
            }
            "spare" => {
                arity(3)?;
                spare[link(words[1])?.0] = count(words[2])?;
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let total_cost = spare_cost(net, &spare);
    match kind {
        None => Err(Error::PlanSyntax {
            line: 0,
            message: "empty plan".into(),
        }),
        Some(Method::Sg) => Ok(Plan::Sg(SgPlan {
            copies,
            allocations: alloc,
            spare,
            total_cost,
        })),
        Some(Method::Db) => Ok(Plan::Db(DbPlan {
            copies,
            pair_allocations: pair,
            per_cycle_allocations: alloc,
            spare,
            total_cost,
        })),
    }
}
