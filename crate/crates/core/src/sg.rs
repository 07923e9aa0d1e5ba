//! Single-cycle method: every link is protected as a straddler of p-cycles
//! whose copy counts are doubled so any two simultaneous failures restore.

use std::collections::BTreeMap;
use std::time::Duration;

use log::debug;
use pcycle_ilp::{BranchAndBound, IlpModel, IntSolution, Sense, SolveOptions, VarId};

use crate::cycles::{CycleId, CycleSet, Relation};
use crate::error::{Error, Result};
use crate::plan::{spare_for_copies, MethodOptions, MethodOutcome, SgPlan};
use crate::topology::{LinkId, Network};

/// Smallest copy count that lets a cycle protect straddlers of capacity `w`
/// against any two failures: the smallest even integer not below `w`.
pub fn theorem1_min_copies(w: u32) -> u32 {
    w + (w & 1)
}

/// Which model variable realizes which symbol.
#[derive(Debug, Clone)]
pub struct SgVarMap {
    /// s_i per link.
    pub spare: Vec<VarId>,
    /// n_p per cycle.
    pub copies: Vec<VarId>,
    /// n_{i,p}, in (link, cycle) order.
    pub allocations: Vec<(LinkId, CycleId, VarId)>,
}

/// Shared bound for copy and allocation variables. No optimal plan needs
/// more than ceil(w/2) per allocation, hence at most max w + 1 copies.
pub(crate) fn copy_bound(net: &Network) -> i64 {
    2 * net.max_working() as i64 + 2
}

pub(crate) fn check_cycles_match(net: &Network, cs: &CycleSet) -> Result<()> {
    if cs.link_count() != net.link_count() {
        return Err(Error::InvalidNetwork(format!(
            "cycle set was built for {} links, network has {}",
            cs.link_count(),
            net.link_count()
        )));
    }
    Ok(())
}

/// Builds the straddling-only model with pruned allocation variables.
pub fn build_sg_model(net: &Network, cs: &CycleSet) -> Result<(IlpModel, SgVarMap)> {
    build_sg_model_with(net, cs, true)
}

/// `pruned = false` keeps an allocation variable for every (link, cycle)
/// pair, giving L·P + P + L variables.
pub fn build_sg_model_with(net: &Network, cs: &CycleSet, pruned: bool) -> Result<(IlpModel, SgVarMap)> {
    check_cycles_match(net, cs)?;
    for l in net.links() {
        if l.working > 0 && cs.cycles_straddled_by(l.id).next().is_none() {
            return Err(Error::NoStraddlingCycle {
                link: l.id,
                endpoints: net.link_label(l.id),
            });
        }
    }
    let ub = copy_bound(net);
    let mut model = IlpModel::new(format!("sg_{}", net.name()));
    let mut spare = Vec::with_capacity(net.link_count());
    for l in net.links() {
        let through = cs.cycles_through(l.id).count() as i64;
        spare.push(model.add_var(format!("s{}", l.id), 0, Some(through * ub))?);
    }
    let copies: Vec<VarId> = cs
        .cycles()
        .iter()
        .map(|c| model.add_var(format!("n{}", c.id), 0, Some(ub)))
        .collect::<std::result::Result<_, _>>()?;
    let mut allocations = Vec::new();
    for l in net.links() {
        for c in cs.cycles() {
            if pruned && cs.relation(l.id, c.id) != Relation::Straddling {
                continue;
            }
            let v = model.add_var(format!("n{}_{}", l.id, c.id), 0, Some(ub))?;
            allocations.push((l.id, c.id, v));
        }
    }

    // Demand: 2 units of protection per allocated copy of a straddled cycle.
    let mut k = 0;
    for l in net.links() {
        let start = k;
        while k < allocations.len() && allocations[k].0 == l.id {
            k += 1;
        }
        let terms: Vec<(VarId, f64)> = allocations[start..k]
            .iter()
            .map(|&(i, p, v)| (v, cs.sg_coefficient(i, p).expect("valid ids") as f64))
            .filter(|&(_, x)| x != 0.0)
            .collect();
        if !terms.is_empty() || l.working > 0 {
            model.add_constraint(format!("demand_{}", l.id), terms, Sense::Ge, l.working as f64)?;
        }
    }
    // Copies must cover twice every allocation on the cycle.
    for &(i, p, v) in &allocations {
        model.add_constraint(
            format!("copies_{i}_{p}"),
            [(copies[p.0], 1.0), (v, -2.0)],
            Sense::Ge,
            0.0,
        )?;
    }
    // Spare carries every copy routed over the link.
    for l in net.links() {
        let terms = std::iter::once((spare[l.id.0], 1.0))
            .chain(cs.cycles_through(l.id).map(|p| (copies[p.0], -1.0)));
        model.add_constraint(format!("spare_{}", l.id), terms, Sense::Ge, 0.0)?;
    }
    model.set_objective(net.links().iter().map(|l| (spare[l.id.0], l.unit_cost)))?;
    Ok((
        model,
        SgVarMap {
            spare,
            copies,
            allocations,
        },
    ))
}

/// Feasible plan built link by link: each loaded link takes its cheapest
/// straddled cycle with ceil(w/2) allocated copies.
pub fn constructive_sg_plan(net: &Network, cs: &CycleSet) -> Result<SgPlan> {
    check_cycles_match(net, cs)?;
    let cycle_cost: Vec<f64> = cs
        .cycles()
        .iter()
        .map(|c| c.on_cycle.iter().map(|&i| net.link(i).unit_cost).sum())
        .collect();
    let mut copies = vec![0u32; cs.len()];
    let mut allocations = BTreeMap::new();
    for l in net.links() {
        if l.working == 0 {
            continue;
        }
        let best = cs
            .cycles_straddled_by(l.id)
            .min_by(|a, b| cycle_cost[a.0].total_cmp(&cycle_cost[b.0]).then(a.cmp(b)))
            .ok_or_else(|| Error::NoStraddlingCycle {
                link: l.id,
                endpoints: net.link_label(l.id),
            })?;
        let n = l.working.div_ceil(2);
        allocations.insert((l.id, best), n);
        copies[best.0] = copies[best.0].max(2 * n);
    }
    let spare = spare_for_copies(cs, &copies);
    let mut plan = SgPlan {
        copies,
        allocations,
        spare,
        total_cost: 0.0,
    };
    plan.recompute_cost(net);
    Ok(plan)
}

fn plan_to_values(model: &IlpModel, map: &SgVarMap, plan: &SgPlan) -> Vec<i64> {
    let mut values = vec![0i64; model.var_count()];
    for (i, &v) in map.spare.iter().enumerate() {
        values[v.0] = plan.spare[i] as i64;
    }
    for (p, &v) in map.copies.iter().enumerate() {
        values[v.0] = plan.copies[p] as i64;
    }
    for &(i, p, v) in &map.allocations {
        values[v.0] = plan.allocation(i, p) as i64;
    }
    values
}

/// Reads a plan off an integer assignment of the model.
pub fn extract_sg_plan(net: &Network, map: &SgVarMap, values: &[i64]) -> SgPlan {
    let get = |v: VarId| values[v.0].max(0) as u32;
    let allocations = map
        .allocations
        .iter()
        .filter_map(|&(i, p, v)| (get(v) > 0).then_some(((i, p), get(v))))
        .collect();
    let mut plan = SgPlan {
        copies: map.copies.iter().map(|&v| get(v)).collect(),
        allocations,
        spare: map.spare.iter().map(|&v| get(v)).collect(),
        total_cost: 0.0,
    };
    plan.recompute_cost(net);
    plan
}

pub fn solve_sg(net: &Network, cs: &CycleSet, time_limit: Duration) -> Result<MethodOutcome<SgPlan>> {
    solve_sg_with(net, cs, &MethodOptions::with_time_limit(time_limit))
}

pub fn solve_sg_with(net: &Network, cs: &CycleSet, opts: &MethodOptions) -> Result<MethodOutcome<SgPlan>> {
    let (model, map) = build_sg_model_with(net, cs, opts.pruned)?;
    debug!(
        "sg model for {}: {} variables, {} constraints",
        net.name(),
        model.var_count(),
        model.constraint_count()
    );
    let mut bb = BranchAndBound::new(&model, SolveOptions::with_time_limit(opts.time_limit));
    if opts.warm_start {
        let start = constructive_sg_plan(net, cs)?;
        bb = bb.with_incumbent(plan_to_values(&model, &map, &start));
    }
    let sol: IntSolution = bb.solve()?;
    let plan = sol
        .has_incumbent()
        .then(|| extract_sg_plan(net, &map, &sol.values));
    Ok(MethodOutcome {
        status: sol.status,
        plan,
        best_bound: sol.best_bound,
        stats: sol.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::enumerate_simple_cycles;
    use crate::datasets;
    use pcycle_ilp::SolveStatus;

    #[test]
    fn parity_rule() {
        assert_eq!(theorem1_min_copies(3), 4);
        assert_eq!(theorem1_min_copies(4), 4);
        assert_eq!(theorem1_min_copies(0), 0);
        assert_eq!(theorem1_min_copies(1), 2);
    }

    #[test]
    fn k4_model_sizes() {
        let net = datasets::k4();
        let cs = enumerate_simple_cycles(&net, 4).unwrap();
        let (pruned, map) = build_sg_model(&net, &cs).unwrap();
        assert_eq!(map.allocations.len(), 6);
        assert_eq!(pruned.var_count(), 19);
        let (full, _) = build_sg_model_with(&net, &cs, false).unwrap();
        assert_eq!(full.var_count(), 6 * 7 + 7 + 6);
    }

    #[test]
    fn triangle_is_infeasible_up_front() {
        let net = datasets::triangle();
        let cs = enumerate_simple_cycles(&net, 3).unwrap();
        let err = build_sg_model(&net, &cs).unwrap_err();
        assert!(matches!(err, Error::NoStraddlingCycle { link: LinkId(0), .. }), "{err}");
        assert!(err.to_string().contains("a-b"));
    }

    #[test]
    fn k4_unit_and_double_demand() {
        let net = datasets::k4();
        let cs = enumerate_simple_cycles(&net, 4).unwrap();
        for w in [1, 2] {
            let out = solve_sg(&net.with_uniform_working(w), &cs, Duration::from_secs(30)).unwrap();
            assert_eq!(out.status, SolveStatus::Optimal);
            let plan = out.plan.unwrap();
            assert_eq!(plan.total_spare(), 24, "w={w}");
            assert_eq!(plan.total_cost, 24.0);
        }
    }

    #[test]
    fn zero_demand_costs_nothing() {
        let net = datasets::k4().with_uniform_working(0);
        let cs = enumerate_simple_cycles(&net, 4).unwrap();
        let plan = solve_sg(&net, &cs, Duration::from_secs(10)).unwrap().plan.unwrap();
        assert_eq!(plan.total_cost, 0.0);
        assert!(plan.copies.iter().all(|&n| n == 0));
        assert!(plan.allocations.is_empty());
        // Zero demand is fine even without chords.
        let tri = datasets::triangle().with_uniform_working(0);
        let cs = enumerate_simple_cycles(&tri, 3).unwrap();
        assert_eq!(solve_sg(&tri, &cs, Duration::from_secs(10)).unwrap().status, SolveStatus::Optimal);
    }

    #[test]
    fn constructive_plan_is_model_feasible() {
        for net in [datasets::k4(), datasets::k5(), datasets::ring_chords()] {
            let net = net.with_uniform_working(3);
            let cs = enumerate_simple_cycles(&net, net.node_count()).unwrap();
            let (model, map) = build_sg_model(&net, &cs).unwrap();
            let plan = constructive_sg_plan(&net, &cs).unwrap();
            model.check_assignment(&plan_to_values(&model, &map, &plan), 1e-9).unwrap();
        }
    }
}
