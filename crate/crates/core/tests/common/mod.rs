#![allow(dead_code)]

use std::collections::HashSet;

use pcycle_core::db::enumerate_protection_pairs;
use pcycle_core::topology::{link_disjoint_paths, NetworkBuilder};
use pcycle_core::{validate_protectable, CycleSet, Network, NodeId, Relation};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn is_three_edge_connected(net: &Network) -> bool {
    (0..net.node_count()).all(|s| (s + 1..net.node_count()).all(|t| link_disjoint_paths(net, NodeId(s), NodeId(t)) >= 3))
}

fn build(n: usize, edges: &[(usize, usize)], working: &[u32], name: &str) -> Network {
    let mut b = NetworkBuilder::new(name);
    for v in 0..n {
        b.node(format!("v{v}")).unwrap();
    }
    for (k, &(u, v)) in edges.iter().enumerate() {
        b.link(&format!("v{u}"), &format!("v{v}"), working[k], 1.0).unwrap();
    }
    b.build().unwrap()
}

/// Random 3-edge-connected network on `n` nodes in which every link
/// straddles some cycle: a random Hamiltonian ring plus random chords,
/// added until both properties hold. Working capacities are 0..=max_w with
/// at least one positive.
pub fn random_protectable<R: Rng>(rng: &mut R, n: usize, max_w: u32, name: &str) -> Network {
    assert!(n >= 4);
    loop {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut edges: Vec<(usize, usize)> = (0..n)
            .map(|k| {
                let (a, b) = (order[k], order[(k + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect();
        let mut missing: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|e| !edges.contains(e))
            .collect();
        missing.shuffle(rng);
        let ok = |edges: &[(usize, usize)]| {
            let net = build(n, edges, &vec![1; edges.len()], name);
            is_three_edge_connected(&net)
                && validate_protectable(&net, n).unwrap().unstraddled_links.is_empty()
        };
        while !ok(&edges) {
            match missing.pop() {
                Some(e) => edges.push(e),
                None => break,
            }
        }
        if !ok(&edges) {
            continue;
        }
        let mut working: Vec<u32> = (0..edges.len()).map(|_| rng.gen_range(0..=max_w)).collect();
        if working.iter().all(|&w| w == 0) {
            working[0] = 1;
        }
        return build(n, &edges, &working, name);
    }
}

pub fn spare_cost(net: &Network, cs: &CycleSet, copies: &[u32]) -> f64 {
    net.links()
        .iter()
        .map(|l| l.unit_cost * cs.cycles_through(l.id).map(|p| copies[p.0] as f64).sum::<f64>())
        .sum()
}

/// Visits every vector in [0, bound]^len.
fn for_each_vector(len: usize, bound: u32, mut f: impl FnMut(&[u32])) {
    let mut v = vec![0u32; len];
    loop {
        f(&v);
        let mut k = 0;
        loop {
            if k == len {
                return;
            }
            if v[k] < bound {
                v[k] += 1;
                break;
            }
            v[k] = 0;
            k += 1;
        }
    }
}

/// Exhaustive single-cycle optimum over copy vectors. A copy vector is
/// feasible when every link's straddled cycles can hold its demand, each
/// cycle lending at most half its copies (two units each) to one link.
/// Cycles without chords can never help and are held at zero.
pub fn sg_oracle(net: &Network, cs: &CycleSet) -> f64 {
    let bound = 2 * net.max_working() + 2;
    let useful: Vec<usize> = cs.cycles().iter().filter(|c| !c.straddling.is_empty()).map(|c| c.id.0).collect();
    let mut best = f64::INFINITY;
    let mut copies = vec![0u32; cs.len()];
    for_each_vector(useful.len(), bound, |v| {
        for (k, &p) in useful.iter().enumerate() {
            copies[p] = v[k];
        }
        let feasible = net.links().iter().all(|l| {
            let cap: u32 = cs.cycles_straddled_by(l.id).map(|p| 2 * (copies[p.0] / 2)).sum();
            cap >= l.working
        });
        if feasible {
            best = best.min(spare_cost(net, cs, &copies));
        }
    });
    best
}

/// Exhaustive double-cycle optimum for instances where every loaded link has
/// exactly one protection-pair and no two links share a pair: the least
/// allocation is then forced, and a copy vector is feasible iff each cycle
/// of each link's pair holds that allocation.
pub fn db_oracle_single_pairs(net: &Network, cs: &CycleSet) -> f64 {
    let mut need: Vec<Vec<(usize, u32)>> = Vec::new();
    let mut seen_pairs = HashSet::new();
    for l in net.links() {
        let pairs = enumerate_protection_pairs(l.id, cs).unwrap();
        assert_eq!(pairs.len(), 1, "oracle precondition: one pair per link");
        let pp = pairs[0];
        assert!(seen_pairs.insert((pp.p, pp.q)), "oracle precondition: no shared pair");
        let w = l.working;
        let (rp, rq) = (cs.relation(l.id, pp.p), cs.relation(l.id, pp.q));
        let half = w.div_ceil(2);
        let (np, nq) = match (rp, rq) {
            (Relation::OnCycle, Relation::OnCycle) => (w, w),
            (Relation::Straddling, Relation::Straddling) => (half, half),
            (Relation::OnCycle, _) => (2 * half, half),
            _ => (half, 2 * half),
        };
        need.push(vec![(pp.p.0, np), (pp.q.0, nq)]);
    }
    let bound = 2 * net.max_working() + 2;
    let mut best = f64::INFINITY;
    for_each_vector(cs.len(), bound, |copies| {
        if need.iter().flatten().all(|&(p, n)| copies[p] >= n) {
            best = best.min(spare_cost(net, cs, copies));
        }
    });
    best
}
