//! Exhaustive dual-link-failure simulation of protection plans.
//!
//! Each scenario fails two links at once and tries to restore both with the
//! copies the plan reserves. Restoration rules follow the p-cycle
//! mechanics:
//!
//! * a straddler gets two units per copy (one per arc), or one unit via the
//!   intact arc when the other failed link lies on the cycle;
//! * an on-cycle link gets one unit per copy along the rest of the cycle,
//!   and nothing if the other failed link is also on the cycle;
//! * when both failed links draw on the same cycle, its copies are split
//!   between them.
//!
//! Every route is checked to avoid the failed links and the units routed
//! over each surviving link are checked against its spare.

use std::fmt::Write as _;

use crate::cycles::{Cycle, CycleId, CycleSet, Relation};
use crate::error::{Error, Result};
use crate::plan::{DbPlan, Method, Plan, SgPlan};
use crate::topology::{LinkId, Network};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FailureScenario {
    /// Always `a < b`.
    pub a: LinkId,
    pub b: LinkId,
}

impl FailureScenario {
    pub fn new(x: LinkId, y: LinkId) -> Self {
        assert_ne!(x, y, "a scenario fails two distinct links");
        FailureScenario {
            a: x.min(y),
            b: x.max(y),
        }
    }
}

/// Every unordered pair of distinct links, in lexicographic order.
pub fn enumerate_dual_failures(net: &Network) -> Vec<FailureScenario> {
    let l = net.link_count();
    let mut out = Vec::with_capacity(l * l.saturating_sub(1) / 2);
    for a in 0..l {
        for b in a + 1..l {
            out.push(FailureScenario {
                a: LinkId(a),
                b: LinkId(b),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub cycle: CycleId,
    pub links: Vec<LinkId>,
    pub units: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkRestoration {
    pub link: LinkId,
    pub demanded: u32,
    pub restored: u32,
    pub routes: Vec<Route>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestorationOutcome {
    pub scenario: FailureScenario,
    pub restored: bool,
    pub links: Vec<LinkRestoration>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub method: Method,
    pub scenario_count: usize,
    pub failures: Vec<RestorationOutcome>,
    pub pass: bool,
}

impl VerificationReport {
    /// One `scenario <i> <j> <pass|fail> [reason]` line per scenario.
    pub fn scenario_lines(&self, net: &Network) -> String {
        let mut out = String::new();
        let mut failed = self.failures.iter().peekable();
        for s in enumerate_dual_failures(net) {
            match failed.peek() {
                Some(f) if f.scenario == s => {
                    let _ = writeln!(
                        out,
                        "scenario {} {} fail {}",
                        s.a,
                        s.b,
                        f.reason.as_deref().unwrap_or("")
                    );
                    failed.next();
                }
                _ => {
                    let _ = writeln!(out, "scenario {} {} pass", s.a, s.b);
                }
            }
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "{} plan: {}/{} dual-failure scenarios restored: {}",
            self.method.label(),
            self.scenario_count - self.failures.len(),
            self.scenario_count,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

// ---- structural checks ----

fn check_lengths(copies: &[u32], spare: &[u32], net: &Network, cs: &CycleSet) -> Result<()> {
    if cs.link_count() != net.link_count() {
        return Err(Error::MalformedPlan("cycle set does not match the network".into()));
    }
    if copies.len() != cs.len() {
        return Err(Error::MalformedPlan(format!(
            "{} copy counts for {} cycles",
            copies.len(),
            cs.len()
        )));
    }
    if spare.len() != net.link_count() {
        return Err(Error::MalformedPlan(format!(
            "{} spare values for {} links",
            spare.len(),
            net.link_count()
        )));
    }
    Ok(())
}

fn check_ids(i: LinkId, p: CycleId, net: &Network, cs: &CycleSet) -> Result<()> {
    if i.0 >= net.link_count() {
        return Err(Error::MalformedPlan(format!("allocation names unknown link {i}")));
    }
    if p.0 >= cs.len() {
        return Err(Error::MalformedPlan(format!("allocation names unknown cycle {p}")));
    }
    Ok(())
}

fn check_sg(plan: &SgPlan, net: &Network, cs: &CycleSet) -> Result<()> {
    check_lengths(&plan.copies, &plan.spare, net, cs)?;
    for &(i, p) in plan.allocations.keys() {
        check_ids(i, p, net, cs)?;
        if cs.relation(i, p) != Relation::Straddling {
            return Err(Error::MalformedPlan(format!(
                "link {i} holds an allocation on cycle {p} which it does not straddle"
            )));
        }
    }
    Ok(())
}

fn check_db(plan: &DbPlan, net: &Network, cs: &CycleSet) -> Result<()> {
    check_lengths(&plan.copies, &plan.spare, net, cs)?;
    for &(i, p) in plan.per_cycle_allocations.keys() {
        check_ids(i, p, net, cs)?;
        if !cs.relation(i, p).covers() {
            return Err(Error::MalformedPlan(format!("link {i} is allocated on cycle {p} which does not cover it")));
        }
    }
    for &(i, p, q) in plan.pair_allocations.keys() {
        check_ids(i, p, net, cs)?;
        check_ids(i, q, net, cs)?;
        if p == q || !cs.relation(i, p).covers() || !cs.relation(i, q).covers() {
            return Err(Error::MalformedPlan(format!(
                "pair allocation ({i}, {p}, {q}) does not name two cycles covering the link"
            )));
        }
    }
    Ok(())
}

// ---- shared machinery ----

/// How one failed link can draw on one cycle in a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Access {
    /// Straddler using both arcs, two units per copy.
    BothArcs,
    /// One unit per copy along the arc (or rest of cycle) avoiding `avoid`.
    Arc { avoid: LinkId },
}

impl Access {
    fn rate(self) -> u32 {
        match self {
            Access::BothArcs => 2,
            Access::Arc { .. } => 1,
        }
    }
}

/// Routes carrying `units` for `link` over `copies` copies of `cycle`.
fn routes_on(net: &Network, cycle: &Cycle, link: LinkId, access: Access, units: u32) -> Vec<Route> {
    if units == 0 {
        return Vec::new();
    }
    let l = net.link(link);
    let (u, v) = (l.a, l.b);
    match access {
        Access::BothArcs => {
            let first = units.div_ceil(2);
            let mut out = vec![Route {
                cycle: cycle.id,
                links: cycle.arc(net, u, v, true),
                units: first,
            }];
            if units > first {
                out.push(Route {
                    cycle: cycle.id,
                    links: cycle.arc(net, u, v, false),
                    units: units - first,
                });
            }
            out
        }
        Access::Arc { avoid } => {
            // For an on-cycle link one direction is the link itself; the
            // other is the rest of the cycle. For a straddler pick the arc
            // without `avoid`.
            let fwd = cycle.arc(net, u, v, true);
            let back = cycle.arc(net, u, v, false);
            let pick = |a: &Vec<LinkId>| !a.contains(&avoid) && !a.contains(&link);
            let links = if pick(&fwd) { fwd } else { back };
            vec![Route {
                cycle: cycle.id,
                links,
                units,
            }]
        }
    }
}

/// Copies of a shared pool split between two links with a common per-copy
/// rate; returns copies for the first link.
fn split_pool(rate: u32, pool: u32, need_x: u32, need_y: u32) -> Option<u32> {
    let ax = need_x.div_ceil(rate);
    (ax <= pool && rate * (pool - ax) >= need_y).then_some(ax)
}

struct Draw {
    cycle: CycleId,
    access: Access,
    copies: u32,
}

/// Units available to `link` from draws, minus what the routes consume.
fn realize(net: &Network, cs: &CycleSet, link: LinkId, demand: u32, draws: &[Draw]) -> LinkRestoration {
    let mut left = demand;
    let mut routes = Vec::new();
    for d in draws {
        if left == 0 {
            break;
        }
        let units = (d.access.rate() * d.copies).min(left);
        left -= units;
        routes.extend(routes_on(net, cs.cycle(d.cycle), link, d.access, units));
    }
    LinkRestoration {
        link,
        demanded: demand,
        restored: demand - left,
        routes,
    }
}

/// Fails both links if restoration shortfalls, route soundness or spare
/// accounting are violated.
fn finish(
    net: &Network,
    spare: &[u32],
    scenario: FailureScenario,
    failed: [LinkId; 2],
    links: Vec<LinkRestoration>,
    split_reason: Option<String>,
) -> RestorationOutcome {
    let mut reason = split_reason;
    if reason.is_none() {
        for r in &links {
            if r.restored < r.demanded {
                reason = Some(format!(
                    "link {} ({}) restored {} of {} units",
                    r.link,
                    net.link_label(r.link),
                    r.restored,
                    r.demanded
                ));
                break;
            }
        }
    }
    let mut usage = vec![0u64; net.link_count()];
    for r in &links {
        for route in &r.routes {
            for &l in &route.links {
                if failed.contains(&l) {
                    reason.get_or_insert_with(|| format!("route on cycle {} crosses failed link {l}", route.cycle));
                }
                usage[l.0] += route.units as u64;
            }
        }
    }
    if reason.is_none() {
        if let Some((l, &u)) = usage.iter().enumerate().find(|&(l, &u)| u > spare[l] as u64) {
            reason = Some(format!(
                "link {l} ({}) needs {u} spare units, plan reserves {}",
                net.link_label(LinkId(l)),
                spare[l]
            ));
        }
    }
    RestorationOutcome {
        scenario,
        restored: reason.is_none(),
        links,
        reason,
    }
}

// ---- single-cycle plans ----

/// Restoration of `e` (and `f`, when given) under a single-cycle plan.
fn sg_pair(plan: &SgPlan, net: &Network, cs: &CycleSet, e: LinkId, f: Option<LinkId>) -> (Vec<LinkRestoration>, Option<String>) {
    let failed: Vec<LinkId> = std::iter::once(e).chain(f).collect();
    let demand = |x: LinkId| net.link(x).working;
    let cycles_of = |x: LinkId| -> Vec<CycleId> {
        plan.allocations
            .range((x, CycleId(0))..=(x, CycleId(usize::MAX)))
            .filter(|(_, &n)| n > 0)
            .map(|(&(_, p), _)| p)
            .collect()
    };
    let lists: Vec<Vec<CycleId>> = failed.iter().map(|&x| cycles_of(x)).collect();
    let contested: Vec<CycleId> = match f {
        Some(_) => lists[0].iter().copied().filter(|p| lists[1].contains(p)).collect(),
        None => Vec::new(),
    };

    let mut draws: Vec<Vec<Draw>> = vec![Vec::new(), Vec::new()];
    for (k, &x) in failed.iter().enumerate() {
        let other = failed.get(1 - k).copied();
        for &p in &lists[k] {
            if contested.contains(&p) {
                continue;
            }
            let n_p = plan.copies[p.0];
            let draw = match other.map(|y| cs.relation(y, p)) {
                Some(Relation::OnCycle) => Draw {
                    cycle: p,
                    access: Access::Arc { avoid: other.unwrap() },
                    copies: n_p,
                },
                _ => Draw {
                    cycle: p,
                    access: Access::BothArcs,
                    copies: plan.allocation(x, p).min(n_p),
                },
            };
            draws[k].push(draw);
        }
    }
    let mut reason = None;
    if !contested.is_empty() {
        let supplied = |k: usize| -> u32 { draws[k].iter().map(|d| d.access.rate() * d.copies).sum() };
        let need: Vec<u32> = (0..2)
            .map(|k| demand(failed[k]).saturating_sub(supplied(k)))
            .collect();
        let pool: u32 = contested.iter().map(|p| plan.copies[p.0]).sum();
        match split_pool(2, pool, need[0], need[1]) {
            Some(ax) => distribute(&contested, &plan.copies, ax, &mut draws),
            None => {
                reason = Some(format!(
                    "insufficient split capacity: {} copies on shared cycles cannot give {} units to link {} and {} to link {}",
                    pool, need[0], failed[0], need[1], failed[1]
                ));
            }
        }
    }
    let links = failed
        .iter()
        .enumerate()
        .map(|(k, &x)| realize(net, cs, x, demand(x), &draws[k]))
        .collect();
    (links, reason)
}

/// Hands `ax` of the pooled copies to the first link, the rest to the second,
/// filling cycles in id order.
fn distribute(pool: &[CycleId], copies: &[u32], mut ax: u32, draws: &mut [Vec<Draw>]) {
    for &p in pool {
        let n = copies[p.0];
        let mine = ax.min(n);
        ax -= mine;
        draws[0].push(Draw {
            cycle: p,
            access: Access::BothArcs,
            copies: mine,
        });
        draws[1].push(Draw {
            cycle: p,
            access: Access::BothArcs,
            copies: n - mine,
        });
    }
}

pub fn verify_sg(plan: &SgPlan, scenario: FailureScenario, net: &Network, cs: &CycleSet) -> Result<RestorationOutcome> {
    check_sg(plan, net, cs)?;
    Ok(verify_sg_unchecked(plan, scenario, net, cs))
}

fn verify_sg_unchecked(plan: &SgPlan, scenario: FailureScenario, net: &Network, cs: &CycleSet) -> RestorationOutcome {
    let (links, reason) = sg_pair(plan, net, cs, scenario.a, Some(scenario.b));
    finish(net, &plan.spare, scenario, [scenario.a, scenario.b], links, reason)
}

// ---- double-cycle plans ----

fn db_access(cs: &CycleSet, x: LinkId, other: Option<LinkId>, p: CycleId) -> Option<Access> {
    let other_on = other.is_some_and(|y| cs.relation(y, p) == Relation::OnCycle);
    match cs.relation(x, p) {
        Relation::OnCycle if other_on => None,
        Relation::OnCycle => Some(Access::Arc { avoid: x }),
        Relation::Straddling if other_on => Some(Access::Arc { avoid: other.unwrap() }),
        Relation::Straddling => Some(Access::BothArcs),
        Relation::Unrelated => None,
    }
}

fn db_pair(plan: &DbPlan, net: &Network, cs: &CycleSet, e: LinkId, f: Option<LinkId>) -> (Vec<LinkRestoration>, Option<String>) {
    let failed: Vec<LinkId> = std::iter::once(e).chain(f).collect();
    let demand = |x: LinkId| net.link(x).working;
    // Usable cycles per failed link with their access mode.
    let usable: Vec<Vec<(CycleId, Access)>> = failed
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let other = failed.get(1 - k).copied();
            plan.per_cycle_allocations
                .range((x, CycleId(0))..=(x, CycleId(usize::MAX)))
                .filter(|(_, &n)| n > 0)
                .filter_map(|(&(_, p), _)| db_access(cs, x, other, p).map(|a| (p, a)))
                .collect()
        })
        .collect();
    let shared = |k: usize, p: CycleId| failed.len() == 2 && usable[1 - k].iter().any(|&(q, _)| q == p);

    let mut draws: Vec<Vec<Draw>> = vec![Vec::new(), Vec::new()];
    let mut pools: [Vec<CycleId>; 2] = [Vec::new(), Vec::new()];
    for k in 0..failed.len() {
        for &(p, access) in &usable[k] {
            if shared(k, p) {
                if k == 0 {
                    // contested cycles always give both links the same rate
                    pools[access.rate() as usize - 1].push(p);
                }
            } else {
                draws[k].push(Draw {
                    cycle: p,
                    access,
                    copies: plan.copies[p.0],
                });
            }
        }
    }
    let mut reason = None;
    if !pools[0].is_empty() || !pools[1].is_empty() {
        let supplied = |k: usize| -> u32 { draws[k].iter().map(|d| d.access.rate() * d.copies).sum() };
        let need: Vec<u32> = (0..2)
            .map(|k| demand(failed[k]).saturating_sub(supplied(k)))
            .collect();
        let n1: u32 = pools[0].iter().map(|p| plan.copies[p.0]).sum();
        let n2: u32 = pools[1].iter().map(|p| plan.copies[p.0]).sum();
        // Choose b2 copies of the two-unit pool and b1 of the one-unit pool
        // for the first link; the second link takes the rest.
        let split = (0..=n2).find_map(|b2| {
            let b1 = need[0].saturating_sub(2 * b2);
            (b1 <= n1 && (n1 - b1) + 2 * (n2 - b2) >= need[1]).then_some((b1, b2))
        });
        match split {
            Some((b1, b2)) => {
                for (pool, mut mine) in [(&pools[0], b1), (&pools[1], b2)] {
                    for &p in pool {
                        let n = plan.copies[p.0];
                        let take = mine.min(n);
                        mine -= take;
                        for (k, c) in [(0, take), (1, n - take)] {
                            let access = usable[k].iter().find(|&&(q, _)| q == p).unwrap().1;
                            draws[k].push(Draw {
                                cycle: p,
                                access,
                                copies: c,
                            });
                        }
                    }
                }
            }
            None => {
                reason = Some(format!(
                    "insufficient split capacity: shared cycles ({n1} one-unit and {n2} two-unit copies) cannot give {} units to link {} and {} to link {}",
                    need[0], failed[0], need[1], failed[1]
                ));
            }
        }
    }
    let links = failed
        .iter()
        .enumerate()
        .map(|(k, &x)| realize(net, cs, x, demand(x), &draws[k]))
        .collect();
    (links, reason)
}

pub fn verify_db(plan: &DbPlan, scenario: FailureScenario, net: &Network, cs: &CycleSet) -> Result<RestorationOutcome> {
    check_db(plan, net, cs)?;
    Ok(verify_db_unchecked(plan, scenario, net, cs))
}

fn verify_db_unchecked(plan: &DbPlan, scenario: FailureScenario, net: &Network, cs: &CycleSet) -> RestorationOutcome {
    let (links, reason) = db_pair(plan, net, cs, scenario.a, Some(scenario.b));
    finish(net, &plan.spare, scenario, [scenario.a, scenario.b], links, reason)
}

// ---- aggregate ----

pub fn verify_scenario(plan: &Plan, scenario: FailureScenario, net: &Network, cs: &CycleSet) -> Result<RestorationOutcome> {
    match plan {
        Plan::Sg(p) => verify_sg(p, scenario, net, cs),
        Plan::Db(p) => verify_db(p, scenario, net, cs),
    }
}

/// Runs every dual-failure scenario against the plan.
pub fn verify_plan(plan: &Plan, net: &Network, cs: &CycleSet) -> Result<VerificationReport> {
    match plan {
        Plan::Sg(p) => check_sg(p, net, cs)?,
        Plan::Db(p) => check_db(p, net, cs)?,
    }
    let scenarios = enumerate_dual_failures(net);
    let failures: Vec<RestorationOutcome> = scenarios
        .iter()
        .map(|&s| match plan {
            Plan::Sg(p) => verify_sg_unchecked(p, s, net, cs),
            Plan::Db(p) => verify_db_unchecked(p, s, net, cs),
        })
        .filter(|o| !o.restored)
        .collect();
    Ok(VerificationReport {
        method: plan.method(),
        scenario_count: scenarios.len(),
        pass: failures.is_empty(),
        failures,
    })
}

/// Restoration of a lone failure of `link` (the second failure is a
/// zero-demand phantom that touches nothing).
pub fn verify_single_failure(plan: &Plan, link: LinkId, net: &Network, cs: &CycleSet) -> Result<LinkRestoration> {
    let (mut links, reason) = match plan {
        Plan::Sg(p) => {
            check_sg(p, net, cs)?;
            sg_pair(p, net, cs, link, None)
        }
        Plan::Db(p) => {
            check_db(p, net, cs)?;
            db_pair(p, net, cs, link, None)
        }
    };
    debug_assert!(reason.is_none());
    let r = links.remove(0);
    let mut usage = vec![0u64; net.link_count()];
    for route in &r.routes {
        for &l in &route.links {
            usage[l.0] += route.units as u64;
        }
    }
    if usage.iter().zip(plan.spare()).any(|(&u, &s)| u > s as u64) {
        return Ok(LinkRestoration { restored: 0, ..r });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::enumerate_simple_cycles;
    use crate::datasets;
    use crate::db::solve_db;
    use crate::sg::solve_sg;
    use std::time::Duration;

    #[test]
    fn scenario_counts() {
        assert_eq!(enumerate_dual_failures(&datasets::triangle()).len(), 3);
        assert_eq!(enumerate_dual_failures(&datasets::k4()).len(), 15);
        assert_eq!(enumerate_dual_failures(&datasets::k5()).len(), 45);
        let s = enumerate_dual_failures(&datasets::k4());
        assert_eq!(s[0], FailureScenario::new(LinkId(1), LinkId(0)));
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    fn k4_sg() -> (Network, CycleSet, SgPlan) {
        let net = datasets::k4();
        let cs = enumerate_simple_cycles(&net, 4).unwrap();
        let plan = solve_sg(&net, &cs, Duration::from_secs(30)).unwrap().plan.unwrap();
        (net, cs, plan)
    }

    #[test]
    fn k4_sg_plan_survives_every_pair() {
        let (net, cs, plan) = k4_sg();
        let report = verify_plan(&Plan::Sg(plan), &net, &cs).unwrap();
        assert!(report.pass, "{:?}", report.failures);
        assert_eq!(report.scenario_count, 15);
    }

    #[test]
    fn tampered_quadrilateral_fails_on_its_chords() {
        let (net, cs, mut plan) = k4_sg();
        let quad = cs.cycles().iter().find(|c| c.len() == 4 && plan.copies[c.id.0] == 2).unwrap();
        plan.copies[quad.id.0] = 1;
        let s = FailureScenario::new(quad.straddling[0], quad.straddling[1]);
        let out = verify_sg(&plan, s, &net, &cs).unwrap();
        assert!(!out.restored);
        assert!(out.reason.unwrap().contains("insufficient split capacity"));
    }

    #[test]
    fn zero_copies_fail_everything() {
        let (net, cs, mut plan) = k4_sg();
        plan.copies.iter_mut().for_each(|n| *n = 0);
        let report = verify_plan(&Plan::Sg(plan), &net, &cs).unwrap();
        assert!(!report.pass);
        assert_eq!(report.failures.len(), 15);
    }

    #[test]
    fn zero_demand_is_vacuous() {
        let net = datasets::k4().with_uniform_working(0);
        let cs = enumerate_simple_cycles(&net, 4).unwrap();
        let plan = solve_sg(&net, &cs, Duration::from_secs(10)).unwrap().plan.unwrap();
        let out = verify_sg(&plan, FailureScenario::new(LinkId(0), LinkId(5)), &net, &cs).unwrap();
        assert!(out.restored);
        let plan = solve_db(&net, &cs, Duration::from_secs(10)).unwrap().plan.unwrap();
        let out = verify_db(&plan, FailureScenario::new(LinkId(0), LinkId(5)), &net, &cs).unwrap();
        assert!(out.restored);
    }

    #[test]
    fn malformed_allocation_is_an_error() {
        let (net, cs, mut plan) = k4_sg();
        let quad = cs.cycles().iter().find(|c| c.len() == 4).unwrap();
        plan.allocations.insert((quad.on_cycle[0], quad.id), 1);
        let err = verify_plan(&Plan::Sg(plan), &net, &cs).unwrap_err();
        assert!(matches!(err, Error::MalformedPlan(_)));
    }

    fn k4_db() -> (Network, CycleSet, DbPlan) {
        let net = datasets::k4();
        let cs = enumerate_simple_cycles(&net, 4).unwrap();
        let plan = solve_db(&net, &cs, Duration::from_secs(30)).unwrap().plan.unwrap();
        (net, cs, plan)
    }

    #[test]
    fn k4_db_plan_survives_every_pair() {
        let (net, cs, plan) = k4_db();
        let report = verify_plan(&Plan::Db(plan), &net, &cs).unwrap();
        assert!(report.pass, "{:?}", report.failures);
    }

    #[test]
    fn dropping_a_triangle_breaks_its_pair() {
        let (net, cs, mut plan) = k4_db();
        let tri: Vec<_> = ["1", "2", "4"].iter().map(|n| net.node_id(n).unwrap()).collect();
        let tri = cs.cycles().iter().find(|c| c.nodes == tri).unwrap().id;
        plan.copies[tri.0] = 0;
        let s = FailureScenario::new(net.link_by_names("1", "2").unwrap(), net.link_by_names("1", "3").unwrap());
        let out = verify_db(&plan, s, &net, &cs).unwrap();
        assert!(!out.restored);
        assert_eq!(out.links.iter().find(|r| r.link == LinkId(0)).unwrap().restored, 0);
    }

    #[test]
    fn routes_avoid_failures_and_fit_spare() {
        let (net, cs, plan) = k4_sg();
        for s in enumerate_dual_failures(&net) {
            let out = verify_sg(&plan, s, &net, &cs).unwrap();
            for r in &out.links {
                assert_eq!(r.restored, r.demanded);
                for route in &r.routes {
                    assert!(!route.links.contains(&s.a) && !route.links.contains(&s.b));
                }
            }
        }
    }

    #[test]
    fn scenario_lines_cover_every_pair() {
        let (net, cs, mut plan) = k4_sg();
        let quad = cs.cycles().iter().find(|c| c.len() == 4 && plan.copies[c.id.0] == 2).unwrap().clone();
        plan.copies[quad.id.0] = 1;
        let report = verify_plan(&Plan::Sg(plan), &net, &cs).unwrap();
        let text = report.scenario_lines(&net);
        assert_eq!(text.lines().count(), 15);
        let fails = text.lines().filter(|l| l.contains(" fail ")).count();
        assert_eq!(fails, report.failures.len());
        assert!(fails >= 1);
    }

    #[test]
    fn single_failures_restore_under_passing_plans() {
        let (net, cs, plan) = k4_sg();
        let plan = Plan::Sg(plan);
        for l in net.links() {
            let r = verify_single_failure(&plan, l.id, &net, &cs).unwrap();
            assert_eq!(r.restored, r.demanded);
        }
    }
}
