//! Double-cycle method: every loaded link is protected by a pair of p-cycles
//! that stay usable when any second link fails.

use std::collections::{BTreeMap, HashMap};
use std::time::Duration;

use log::{debug, warn};
use pcycle_ilp::{BranchAndBound, IlpModel, Sense, SolveOptions, VarId};

use crate::cycles::{CycleId, CycleSet, Relation};
use crate::error::{Error, Result};
use crate::plan::{spare_for_copies, DbPlan, MethodOptions, MethodOutcome};
use crate::sg::{check_cycles_match, copy_bound};
use crate::topology::{LinkId, Network};

pub const DEFAULT_PAIR_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sharing {
    LinkDisjoint,
    /// The only common link is the protected one, on both cycles.
    ShareOnlyI,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProtectionPair {
    pub link: LinkId,
    /// Always `p < q`.
    pub p: CycleId,
    pub q: CycleId,
    pub sharing: Sharing,
}

/// Protection units per copy of `p` for link `i`: 1 on-cycle, 2 straddling.
pub fn db_coefficient(i: LinkId, p: CycleId, cs: &CycleSet) -> Result<u32> {
    Ok(match cs.classify_link(i, p)? {
        Relation::OnCycle => 1,
        Relation::Straddling => 2,
        Relation::Unrelated => 0,
    })
}

/// On-cycle link sets as bit masks, for fast intersection tests.
struct EdgeMasks {
    words: usize,
    bits: Vec<u64>,
}

impl EdgeMasks {
    fn new(cs: &CycleSet) -> Self {
        let words = cs.link_count().div_ceil(64).max(1);
        let mut bits = vec![0u64; words * cs.len()];
        for c in cs.cycles() {
            for &i in &c.on_cycle {
                bits[c.id.0 * words + i.0 / 64] |= 1 << (i.0 % 64);
            }
        }
        EdgeMasks { words, bits }
    }

    fn mask(&self, p: CycleId) -> &[u64] {
        &self.bits[p.0 * self.words..(p.0 + 1) * self.words]
    }

    fn sharing(&self, i: LinkId, p: CycleId, q: CycleId) -> Option<Sharing> {
        let mut common = 0u32;
        let mut only_i = true;
        for (w, (a, b)) in self.mask(p).iter().zip(self.mask(q)).enumerate() {
            let x = a & b;
            if x != 0 {
                common += x.count_ones();
                if w != i.0 / 64 || x != 1 << (i.0 % 64) {
                    only_i = false;
                }
            }
        }
        match common {
            0 => Some(Sharing::LinkDisjoint),
            1 if only_i => Some(Sharing::ShareOnlyI),
            _ => None,
        }
    }
}

fn pairs_for_link(i: LinkId, cs: &CycleSet, masks: &EdgeMasks, cap: usize) -> Vec<ProtectionPair> {
    let mut covering: Vec<CycleId> = cs.cycles_through(i).chain(cs.cycles_straddled_by(i)).collect();
    covering.sort();
    let mut out = Vec::new();
    for (a, &p) in covering.iter().enumerate() {
        for &q in &covering[a + 1..] {
            if let Some(sharing) = masks.sharing(i, p, q) {
                if out.len() == cap {
                    warn!("link {i}: protection-pair list truncated at {cap}; the design may be suboptimal");
                    return out;
                }
                out.push(ProtectionPair { link: i, p, q, sharing });
            }
        }
    }
    out
}

/// All protection-pairs of link `i`, ordered by (p, q).
pub fn enumerate_protection_pairs(i: LinkId, cs: &CycleSet) -> Result<Vec<ProtectionPair>> {
    enumerate_protection_pairs_capped(i, cs, DEFAULT_PAIR_CAP)
}

/// As [`enumerate_protection_pairs`], keeping at most `cap` pairs (the
/// lexicographically smallest).
pub fn enumerate_protection_pairs_capped(i: LinkId, cs: &CycleSet, cap: usize) -> Result<Vec<ProtectionPair>> {
    if i.0 >= cs.link_count() {
        return Err(Error::UnknownLink(i.0));
    }
    Ok(pairs_for_link(i, cs, &EdgeMasks::new(cs), cap))
}

/// Pair lists for every link.
pub fn all_protection_pairs(cs: &CycleSet, cap: usize) -> Vec<Vec<ProtectionPair>> {
    let masks = EdgeMasks::new(cs);
    (0..cs.link_count())
        .map(|i| pairs_for_link(LinkId(i), cs, &masks, cap))
        .collect()
}

#[derive(Debug, Clone)]
pub struct DbVarMap {
    pub spare: Vec<VarId>,
    pub copies: Vec<VarId>,
    /// n_{i,p} for every cycle appearing in a pair of link i.
    pub per_cycle: Vec<(LinkId, CycleId, VarId)>,
    /// n_{i,p,q} for both orientations of every pair.
    pub pair_vars: Vec<(LinkId, CycleId, CycleId, VarId)>,
}

/// One copy-count requirement: n_cycle ≥ n_{link,cycle} (+ n_{other,cycle,partner}).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct CopyRow {
    cycle: CycleId,
    link: LinkId,
    shared: Option<(LinkId, CycleId)>,
}

/// Copy-count rows. When links i and j share an identical pair (p, q),
/// p must carry i's whole allocation on p plus j's allocation on p within
/// that pair, in both orientations; otherwise n_p ≥ n_{i,p}.
fn copy_rows(pairs: &[Vec<ProtectionPair>]) -> Vec<CopyRow> {
    let mut groups: BTreeMap<(CycleId, CycleId), Vec<LinkId>> = BTreeMap::new();
    for list in pairs {
        for pp in list {
            groups.entry((pp.p, pp.q)).or_default().push(pp.link);
        }
    }
    let mut rows = Vec::new();
    let mut covered: std::collections::HashSet<(LinkId, CycleId)> = Default::default();
    for (&(p, q), links) in &groups {
        if links.len() < 2 {
            continue;
        }
        for &i in links {
            for &j in links {
                if i == j {
                    continue;
                }
                for (a, b) in [(p, q), (q, p)] {
                    rows.push(CopyRow {
                        cycle: a,
                        link: i,
                        shared: Some((j, b)),
                    });
                    covered.insert((i, a));
                }
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    for list in pairs {
        for pp in list {
            for a in [pp.p, pp.q] {
                if !covered.contains(&(pp.link, a)) && seen.insert((pp.link, a)) {
                    rows.push(CopyRow {
                        cycle: a,
                        link: pp.link,
                        shared: None,
                    });
                }
            }
        }
    }
    rows
}

/// A prepared instance: pair lists and derived copy rows.
#[derive(Debug, Clone)]
pub struct DbInstance {
    pub pairs: Vec<Vec<ProtectionPair>>,
    rows: Vec<CopyRow>,
}

impl DbInstance {
    pub fn new(net: &Network, cs: &CycleSet, pair_cap: usize) -> Result<Self> {
        check_cycles_match(net, cs)?;
        let pairs = all_protection_pairs(cs, pair_cap);
        Self::from_pairs(net, pairs)
    }

    pub fn from_pairs(net: &Network, pairs: Vec<Vec<ProtectionPair>>) -> Result<Self> {
        for l in net.links() {
            if l.working > 0 && pairs[l.id.0].is_empty() {
                return Err(Error::NoProtectionPair {
                    link: l.id,
                    endpoints: net.link_label(l.id),
                });
            }
        }
        let rows = copy_rows(&pairs);
        Ok(DbInstance { pairs, rows })
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.iter().map(Vec::len).sum()
    }
}

pub fn build_db_model(net: &Network, cs: &CycleSet, inst: &DbInstance) -> Result<(IlpModel, DbVarMap)> {
    check_cycles_match(net, cs)?;
    let ub = copy_bound(net);
    let mut model = IlpModel::new(format!("db_{}", net.name()));
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

    let mut pair_vars = Vec::new();
    let mut pair_index: HashMap<(LinkId, CycleId, CycleId), VarId> = HashMap::new();
    let mut per_cycle = Vec::new();
    let mut per_cycle_index: HashMap<(LinkId, CycleId), VarId> = HashMap::new();
    for (i, list) in inst.pairs.iter().enumerate() {
        let i = LinkId(i);
        let mut cycles_of_i: Vec<CycleId> = list.iter().flat_map(|pp| [pp.p, pp.q]).collect();
        cycles_of_i.sort();
        cycles_of_i.dedup();
        for p in cycles_of_i {
            let v = model.add_var(format!("n{i}_{p}"), 0, Some(ub))?;
            per_cycle.push((i, p, v));
            per_cycle_index.insert((i, p), v);
        }
        for pp in list {
            for (a, b) in [(pp.p, pp.q), (pp.q, pp.p)] {
                let v = model.add_var(format!("n{i}_{a}_{b}"), 0, Some(ub))?;
                pair_vars.push((i, a, b, v));
                pair_index.insert((i, a, b), v);
            }
        }
    }

    for (i, list) in inst.pairs.iter().enumerate() {
        let i = LinkId(i);
        let w = net.link(i).working;
        // Both cycles of the pairs together give twice the demand.
        let mut terms = Vec::with_capacity(2 * list.len());
        for pp in list {
            terms.push((pair_index[&(i, pp.p, pp.q)], db_coefficient(i, pp.p, cs)? as f64));
            terms.push((pair_index[&(i, pp.q, pp.p)], db_coefficient(i, pp.q, cs)? as f64));
        }
        if !terms.is_empty() || w > 0 {
            model.add_constraint(format!("demand_{i}"), terms, Sense::Ge, 2.0 * w as f64)?;
        }
        // Each cycle of a pair alone must carry the full demand.
        for pp in list {
            let (vp, vq) = (pair_index[&(i, pp.p, pp.q)], pair_index[&(i, pp.q, pp.p)]);
            let (rp, rq) = (cs.relation(i, pp.p), cs.relation(i, pp.q));
            let terms = if rp == rq {
                [(vp, 1.0), (vq, -1.0)]
            } else if rp == Relation::OnCycle {
                [(vp, 1.0), (vq, -2.0)]
            } else {
                [(vq, 1.0), (vp, -2.0)]
            };
            model.add_constraint(format!("balance_{i}_{}_{}", pp.p, pp.q), terms, Sense::Eq, 0.0)?;
        }
    }
    // n_{i,p} sums its pair allocations.
    let mut parts: HashMap<(LinkId, CycleId), Vec<VarId>> = HashMap::new();
    for &(i, a, _, u) in &pair_vars {
        parts.entry((i, a)).or_default().push(u);
    }
    for &(i, p, v) in &per_cycle {
        let terms = std::iter::once((v, 1.0)).chain(parts[&(i, p)].iter().map(|&u| (u, -1.0)));
        model.add_constraint(format!("alloc_{i}_{p}"), terms, Sense::Eq, 0.0)?;
    }
    for row in &inst.rows {
        let mut terms = vec![(copies[row.cycle.0], 1.0), (per_cycle_index[&(row.link, row.cycle)], -1.0)];
        let name = match row.shared {
            Some((j, b)) => {
                terms.push((pair_index[&(j, row.cycle, b)], -1.0));
                format!("copies_{}_{}_{}_{}", row.cycle, row.link, j, b)
            }
            None => format!("copies_{}_{}", row.cycle, row.link),
        };
        model.add_constraint(name, terms, Sense::Ge, 0.0)?;
    }
    for l in net.links() {
        let terms = std::iter::once((spare[l.id.0], 1.0))
            .chain(cs.cycles_through(l.id).map(|p| (copies[p.0], -1.0)));
        model.add_constraint(format!("spare_{}", l.id), terms, Sense::Ge, 0.0)?;
    }
    model.set_objective(net.links().iter().map(|l| (spare[l.id.0], l.unit_cost)))?;
    Ok((
        model,
        DbVarMap {
            spare,
            copies,
            per_cycle,
            pair_vars,
        },
    ))
}

/// Smallest copy counts meeting every copy row for the given allocations.
fn copies_for(cs: &CycleSet, inst: &DbInstance, plan: &DbPlan) -> Vec<u32> {
    let mut copies = vec![0u32; cs.len()];
    for row in &inst.rows {
        let mut need = plan.allocation(row.link, row.cycle);
        if let Some((j, b)) = row.shared {
            need += plan.pair_allocation(j, row.cycle, b);
        }
        copies[row.cycle.0] = copies[row.cycle.0].max(need);
    }
    copies
}

/// Feasible plan: each loaded link uses its first pair with the least
/// allocation that satisfies demand and balance.
pub fn constructive_db_plan(net: &Network, cs: &CycleSet, inst: &DbInstance) -> Result<DbPlan> {
    let mut plan = DbPlan {
        copies: vec![0; cs.len()],
        pair_allocations: BTreeMap::new(),
        per_cycle_allocations: BTreeMap::new(),
        spare: vec![0; net.link_count()],
        total_cost: 0.0,
    };
    for l in net.links() {
        if l.working == 0 {
            continue;
        }
        let pp = inst.pairs[l.id.0].first().ok_or_else(|| Error::NoProtectionPair {
            link: l.id,
            endpoints: net.link_label(l.id),
        })?;
        let w = l.working;
        let (np, nq) = match (cs.relation(l.id, pp.p), cs.relation(l.id, pp.q)) {
            (Relation::OnCycle, Relation::OnCycle) => (w, w),
            (Relation::Straddling, Relation::Straddling) => (w.div_ceil(2), w.div_ceil(2)),
            (Relation::OnCycle, _) => (2 * w.div_ceil(2), w.div_ceil(2)),
            _ => (w.div_ceil(2), 2 * w.div_ceil(2)),
        };
        plan.pair_allocations.insert((l.id, pp.p, pp.q), np);
        plan.pair_allocations.insert((l.id, pp.q, pp.p), nq);
        plan.per_cycle_allocations.insert((l.id, pp.p), np);
        plan.per_cycle_allocations.insert((l.id, pp.q), nq);
    }
    plan.copies = copies_for(cs, inst, &plan);
    plan.spare = spare_for_copies(cs, &plan.copies);
    plan.recompute_cost(net);
    Ok(plan)
}

fn plan_to_values(model: &IlpModel, map: &DbVarMap, plan: &DbPlan) -> Vec<i64> {
    let mut values = vec![0i64; model.var_count()];
    for (i, &v) in map.spare.iter().enumerate() {
        values[v.0] = plan.spare[i] as i64;
    }
    for (p, &v) in map.copies.iter().enumerate() {
        values[v.0] = plan.copies[p] as i64;
    }
    for &(i, p, v) in &map.per_cycle {
        values[v.0] = plan.allocation(i, p) as i64;
    }
    for &(i, p, q, v) in &map.pair_vars {
        values[v.0] = plan.pair_allocation(i, p, q) as i64;
    }
    values
}

pub fn extract_db_plan(net: &Network, map: &DbVarMap, values: &[i64]) -> DbPlan {
    let get = |v: VarId| values[v.0].max(0) as u32;
    let mut plan = DbPlan {
        copies: map.copies.iter().map(|&v| get(v)).collect(),
        pair_allocations: map
            .pair_vars
            .iter()
            .filter_map(|&(i, p, q, v)| (get(v) > 0).then_some(((i, p, q), get(v))))
            .collect(),
        per_cycle_allocations: map
            .per_cycle
            .iter()
            .filter_map(|&(i, p, v)| (get(v) > 0).then_some(((i, p), get(v))))
            .collect(),
        spare: map.spare.iter().map(|&v| get(v)).collect(),
        total_cost: 0.0,
    };
    plan.recompute_cost(net);
    plan
}

pub fn solve_db(net: &Network, cs: &CycleSet, time_limit: Duration) -> Result<MethodOutcome<DbPlan>> {
    solve_db_with(net, cs, &MethodOptions::with_time_limit(time_limit))
}

pub fn solve_db_with(net: &Network, cs: &CycleSet, opts: &MethodOptions) -> Result<MethodOutcome<DbPlan>> {
    let inst = DbInstance::new(net, cs, opts.pair_cap)?;
    let (model, map) = build_db_model(net, cs, &inst)?;
    debug!(
        "db model for {}: {} pairs, {} variables, {} constraints",
        net.name(),
        inst.pair_count(),
        model.var_count(),
        model.constraint_count()
    );
    let mut bb = BranchAndBound::new(&model, SolveOptions::with_time_limit(opts.time_limit));
    if opts.warm_start {
        let start = constructive_db_plan(net, cs, &inst)?;
        bb = bb.with_incumbent(plan_to_values(&model, &map, &start));
    }
    let sol = bb.solve()?;
    let plan = sol
        .has_incumbent()
        .then(|| extract_db_plan(net, &map, &sol.values));
    Ok(MethodOutcome {
        status: sol.status,
        plan,
        best_bound: sol.best_bound,
        stats: sol.stats,
    })
}
