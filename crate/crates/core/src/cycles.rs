//! Simple-cycle enumeration and the link/cycle relation table.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::topology::{LinkId, Network, NodeId};

pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleId(pub usize);

impl std::fmt::Display for CycleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Relation {
    Unrelated = 0,
    OnCycle = 1,
    Straddling = 2,
}

impl Relation {
    pub fn covers(self) -> bool {
        self != Relation::Unrelated
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub id: CycleId,
    /// Canonical node order: smallest node first, second node smaller than
    /// the last.
    pub nodes: Vec<NodeId>,
    /// Sorted link ids on the cycle.
    pub on_cycle: Vec<LinkId>,
    /// Sorted chords of the cycle.
    pub straddling: Vec<LinkId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn position(&self, n: NodeId) -> Option<usize> {
        self.nodes.iter().position(|&m| m == n)
    }

    /// Links of the cycle walked from `from` to `to` in the given direction
    /// (`forward` follows `nodes` order).
    pub fn arc(&self, net: &Network, from: NodeId, to: NodeId, forward: bool) -> Vec<LinkId> {
        let k = self.nodes.len();
        let (Some(mut at), Some(end)) = (self.position(from), self.position(to)) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        while at != end {
            let next = if forward { (at + 1) % k } else { (at + k - 1) % k };
            out.push(
                net.link_between(self.nodes[at], self.nodes[next])
                    .expect("cycle edges exist"),
            );
            at = next;
        }
        out
    }

    /// `a-b-c` rendering with node names.
    pub fn label(&self, net: &Network) -> String {
        self.nodes
            .iter()
            .map(|&n| net.node_name(n))
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Candidate cycles plus a dense L x P relation table.
#[derive(Debug, Clone)]
pub struct CycleSet {
    cycles: Vec<Cycle>,
    max_hops: usize,
    link_count: usize,
    // relation[i * P + p]
    relation: Vec<Relation>,
    straddled_by: Vec<Vec<CycleId>>,
    through: Vec<Vec<CycleId>>,
}

/// Puts a node sequence into canonical rotation and orientation.
pub fn canonicalize(seq: &[NodeId]) -> Vec<NodeId> {
    let k = seq.len();
    let start = (0..k).min_by_key(|&j| seq[j]).unwrap_or(0);
    let mut out: Vec<NodeId> = (0..k).map(|j| seq[(start + j) % k]).collect();
    if k > 2 && out[1] > out[k - 1] {
        out[1..].reverse();
    }
    out
}

/// All simple cycles of length at most `max_hops`, with the default cap.
pub fn enumerate_simple_cycles(net: &Network, max_hops: usize) -> Result<CycleSet> {
    enumerate_simple_cycles_with(net, max_hops, DEFAULT_CYCLE_CAP)
}

pub fn enumerate_simple_cycles_with(net: &Network, max_hops: usize, cap: usize) -> Result<CycleSet> {
    if max_hops < 3 {
        return Err(Error::InvalidNetwork(format!("max_hops must be at least 3, got {max_hops}")));
    }
    let n = net.node_count();
    let mut found: Vec<Vec<NodeId>> = Vec::new();
    let mut on_path = vec![false; n];
    let mut path: Vec<NodeId> = Vec::with_capacity(max_hops);

    // DFS from each start s over nodes greater than s only, so s is the
    // smallest node of every cycle it finds. Each cycle is reached in both
    // directions; keep the one whose second node is below its last.
    fn dfs(
        net: &Network,
        s: NodeId,
        u: NodeId,
        max_hops: usize,
        cap: usize,
        path: &mut Vec<NodeId>,
        on_path: &mut [bool],
        found: &mut Vec<Vec<NodeId>>,
    ) -> Result<()> {
        for &(v, _) in net.neighbors(u) {
            if v == s {
                if path.len() >= 3 && path[1] < path[path.len() - 1] {
                    if found.len() >= cap {
                        return Err(Error::CycleCap { cap });
                    }
                    found.push(path.clone());
                }
            } else if v > s && !on_path[v.0] && path.len() < max_hops {
                on_path[v.0] = true;
                path.push(v);
                dfs(net, s, v, max_hops, cap, path, on_path, found)?;
                path.pop();
                on_path[v.0] = false;
            }
        }
        Ok(())
    }

    for s in 0..n {
        let s = NodeId(s);
        path.clear();
        path.push(s);
        on_path[s.0] = true;
        dfs(net, s, s, max_hops, cap, &mut path, &mut on_path, &mut found)?;
        on_path[s.0] = false;
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(CycleSet::build(net, found, max_hops))
}

impl CycleSet {
    /// Builds a set from explicit node sequences (any rotation/orientation).
    /// Sequences must be simple cycles of `net`; duplicates are rejected.
    pub fn from_node_sequences(net: &Network, seqs: &[Vec<NodeId>]) -> Result<CycleSet> {
        let mut canon: Vec<Vec<NodeId>> = Vec::with_capacity(seqs.len());
        for seq in seqs {
            if seq.len() < 3 {
                return Err(Error::InvalidNetwork(format!("cycle {seq:?} has fewer than 3 nodes")));
            }
            let mut seen = vec![false; net.node_count()];
            for (k, &a) in seq.iter().enumerate() {
                if a.0 >= net.node_count() || seen[a.0] {
                    return Err(Error::InvalidNetwork(format!("cycle {seq:?} is not simple")));
                }
                seen[a.0] = true;
                let b = seq[(k + 1) % seq.len()];
                if b.0 >= net.node_count() || net.link_between(a, b).is_none() {
                    return Err(Error::InvalidNetwork(format!(
                        "cycle {seq:?} uses a missing link"
                    )));
                }
            }
            let c = canonicalize(seq);
            if canon.contains(&c) {
                return Err(Error::InvalidNetwork(format!("duplicate cycle {seq:?}")));
            }
            canon.push(c);
        }
        let max_hops = canon.iter().map(Vec::len).max().unwrap_or(3);
        Ok(CycleSet::build(net, canon, max_hops))
    }

    /// Same as [`CycleSet::from_node_sequences`] with node names.
    pub fn from_named(net: &Network, seqs: &[&[&str]]) -> Result<CycleSet> {
        let ids = seqs
            .iter()
            .map(|seq| {
                seq.iter()
                    .map(|name| {
                        net.node_id(name).ok_or_else(|| Error::UnknownNode {
                            line: 0,
                            node: name.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        CycleSet::from_node_sequences(net, &ids)
    }

    fn build(net: &Network, seqs: Vec<Vec<NodeId>>, max_hops: usize) -> CycleSet {
        let l = net.link_count();
        let p = seqs.len();
        let mut relation = vec![Relation::Unrelated; l * p];
        let mut cycles = Vec::with_capacity(p);
        let mut member = vec![false; net.node_count()];
        for (k, nodes) in seqs.into_iter().enumerate() {
            let len = nodes.len();
            let mut on_cycle: Vec<LinkId> = (0..len)
                .map(|j| {
                    net.link_between(nodes[j], nodes[(j + 1) % len])
                        .expect("cycle edges exist")
                })
                .collect();
            on_cycle.sort();
            for &x in &nodes {
                member[x.0] = true;
            }
            let straddling: Vec<LinkId> = net
                .links()
                .iter()
                .filter(|lk| member[lk.a.0] && member[lk.b.0] && on_cycle.binary_search(&lk.id).is_err())
                .map(|lk| lk.id)
                .collect();
            for &x in &nodes {
                member[x.0] = false;
            }
            for &i in &on_cycle {
                relation[i.0 * p + k] = Relation::OnCycle;
            }
            for &i in &straddling {
                relation[i.0 * p + k] = Relation::Straddling;
            }
            cycles.push(Cycle {
                id: CycleId(k),
                nodes,
                on_cycle,
                straddling,
            });
        }
        let mut straddled_by = vec![Vec::new(); l];
        let mut through = vec![Vec::new(); l];
        for c in &cycles {
            for &i in &c.straddling {
                straddled_by[i.0].push(c.id);
            }
            for &i in &c.on_cycle {
                through[i.0].push(c.id);
            }
        }
        CycleSet {
            cycles,
            max_hops,
            link_count: l,
            relation,
            straddled_by,
            through,
        }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn max_hops(&self) -> usize {
        self.max_hops
    }

    pub fn link_count(&self) -> usize {
        self.link_count
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn cycle(&self, p: CycleId) -> &Cycle {
        &self.cycles[p.0]
    }

    pub fn try_cycle(&self, p: CycleId) -> Result<&Cycle> {
        self.cycles.get(p.0).ok_or(Error::UnknownCycle(p.0))
    }

    /// Unchecked relation lookup; panics on bad ids.
    #[inline]
    pub fn relation(&self, i: LinkId, p: CycleId) -> Relation {
        assert!(i.0 < self.link_count && p.0 < self.cycles.len());
        self.relation[i.0 * self.cycles.len() + p.0]
    }

    fn check(&self, i: LinkId, p: CycleId) -> Result<()> {
        if i.0 >= self.link_count {
            return Err(Error::UnknownLink(i.0));
        }
        if p.0 >= self.cycles.len() {
            return Err(Error::UnknownCycle(p.0));
        }
        Ok(())
    }

    pub fn classify_link(&self, i: LinkId, p: CycleId) -> Result<Relation> {
        self.check(i, p)?;
        Ok(self.relation(i, p))
    }

    /// Protection units per copy under straddling-only protection.
    pub fn sg_coefficient(&self, i: LinkId, p: CycleId) -> Result<u32> {
        Ok(match self.classify_link(i, p)? {
            Relation::Straddling => 2,
            _ => 0,
        })
    }

    /// 1 when the cycle runs over link `i` (and so consumes its spare).
    pub fn delta(&self, i: LinkId, p: CycleId) -> Result<u32> {
        Ok(match self.classify_link(i, p)? {
            Relation::OnCycle => 1,
            _ => 0,
        })
    }

    /// Cycles having `i` as a chord, in id order.
    pub fn cycles_straddled_by(&self, i: LinkId) -> impl Iterator<Item = CycleId> + '_ {
        self.straddled_by[i.0].iter().copied()
    }

    /// Cycles running over `i`, in id order.
    pub fn cycles_through(&self, i: LinkId) -> impl Iterator<Item = CycleId> + '_ {
        self.through[i.0].iter().copied()
    }

    /// One line per cycle: `cycle <id>: a-b-c on=<ids> straddling=<ids>`.
    pub fn dump(&self, net: &Network) -> String {
        let ids = |v: &[LinkId]| {
            v.iter()
                .map(|l| l.0.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = String::new();
        for c in &self.cycles {
            let _ = writeln!(
                out,
                "cycle {}: {} on={} straddling={}",
                c.id,
                c.label(net),
                ids(&c.on_cycle),
                ids(&c.straddling)
            );
        }
        out
    }
}
