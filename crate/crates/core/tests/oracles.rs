//! Independent brute-force oracles checked against the library.

mod common;

use common::{db_oracle_single_pairs, sg_oracle};

use std::collections::{BTreeSet, HashSet};
use std::time::Duration;

use pcycle_core::cycles::enumerate_simple_cycles;
use pcycle_core::db::{enumerate_protection_pairs, solve_db, Sharing};
use pcycle_core::sg::{build_sg_model_with, solve_sg};
use pcycle_core::topology::link_disjoint_paths;
use pcycle_core::{datasets, validate_protectable, CycleSet, LinkId, Network, NodeId};

/// Edge subsets forming exactly one simple cycle, as sorted link-id sets.
fn cycles_by_edge_subsets(net: &Network, max_len: usize) -> BTreeSet<Vec<usize>> {
    let l = net.link_count();
    assert!(l <= 20, "oracle is exponential in the link count");
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << l) {
        let k = mask.count_ones() as usize;
        if k < 3 || k > max_len {
            continue;
        }
        let edges: Vec<usize> = (0..l).filter(|&j| mask >> j & 1 == 1).collect();
        let mut deg = vec![0; net.node_count()];
        for &j in &edges {
            let lk = &net.links()[j];
            deg[lk.a.0] += 1;
            deg[lk.b.0] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        // connected: walk from one endpoint over the chosen edges
        let start = net.links()[edges[0]].a;
        let mut seen = HashSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &j in &edges {
                let lk = &net.links()[j];
                if lk.has_endpoint(u) && seen.insert(lk.other(u)) {
                    stack.push(lk.other(u));
                }
            }
        }
        if seen.len() == k {
            out.insert(edges);
        }
    }
    out
}

fn edge_sets(cs: &CycleSet) -> BTreeSet<Vec<usize>> {
    cs.cycles()
        .iter()
        .map(|c| c.on_cycle.iter().map(|l| l.0).collect())
        .collect()
}

fn complete_graph_cycles(n: u64) -> u64 {
    let choose = |n: u64, k: u64| (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1));
    let fact = |k: u64| (1..=k).product::<u64>();
    (3..=n).map(|k| choose(n, k) * fact(k - 1) / 2).sum()
}

#[test]
fn enumeration_matches_edge_subset_oracle() {
    for net in [
        datasets::k4(),
        datasets::k5(),
        datasets::k6(),
        datasets::wheel5(),
        datasets::ring_chords(),
        datasets::bridged_triangles(),
    ] {
        for hops in 3..=net.node_count() {
            let cs = enumerate_simple_cycles(&net, hops).unwrap();
            let oracle = cycles_by_edge_subsets(&net, hops);
            assert_eq!(cs.len(), oracle.len(), "{} hops {hops}", net.name());
            assert_eq!(edge_sets(&cs), oracle, "{} hops {hops}", net.name());
        }
    }
}

#[test]
fn complete_graph_cycle_formula() {
    assert_eq!(complete_graph_cycles(4), 7);
    assert_eq!(complete_graph_cycles(5), 37);
    assert_eq!(complete_graph_cycles(6), 197);
    for (net, n) in [(datasets::k4(), 4), (datasets::k5(), 5), (datasets::k6(), 6)] {
        let cs = enumerate_simple_cycles(&net, n).unwrap();
        assert_eq!(cs.len() as u64, complete_graph_cycles(n as u64));
    }
}

/// Smallest number of links whose removal separates s from t.
fn brute_min_cut(net: &Network, s: NodeId, t: NodeId) -> u32 {
    let l = net.link_count();
    let mut best = u32::MAX;
    for mask in 0u32..(1 << l) {
        let k = mask.count_ones();
        if k >= best {
            continue;
        }
        let mut seen = vec![false; net.node_count()];
        seen[s.0] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(v, lk) in net.neighbors(u) {
                if mask >> lk.0 & 1 == 0 && !seen[v.0] {
                    seen[v.0] = true;
                    stack.push(v);
                }
            }
        }
        if !seen[t.0] {
            best = k;
        }
    }
    best
}

#[test]
fn max_flow_matches_brute_force_min_cut() {
    for net in [
        datasets::k4(),
        datasets::k5(),
        datasets::wheel5(),
        datasets::ring_chords(),
        datasets::ring5(),
        datasets::bridged_triangles(),
    ] {
        for s in 0..net.node_count() {
            for t in s + 1..net.node_count() {
                let (s, t) = (NodeId(s), NodeId(t));
                assert_eq!(
                    link_disjoint_paths(&net, s, t),
                    brute_min_cut(&net, s, t),
                    "{} {s}-{t}",
                    net.name()
                );
            }
        }
    }
}

#[test]
fn protectability_reports() {
    let k4 = validate_protectable(&datasets::k4(), 4).unwrap();
    assert!(k4.three_connected && k4.offending_node_pairs.is_empty() && k4.unstraddled_links.is_empty());

    let ring = datasets::ring5();
    let r = validate_protectable(&ring, 5).unwrap();
    assert!(!r.three_connected);
    for l in ring.links() {
        assert!(r.offending_node_pairs.iter().any(|&(a, b, k)| (a, b) == (l.a.min(l.b), l.a.max(l.b)) && k == 2));
    }

    let net = datasets::bridged_triangles();
    let r = validate_protectable(&net, 6).unwrap();
    let bridge = net.link_by_names("c", "d").unwrap();
    assert!(r.unstraddled_links.contains(&bridge));
    assert!(!r.three_connected);

    for net in [datasets::k4(), datasets::k5(), datasets::k6()] {
        let r = validate_protectable(&net, net.node_count()).unwrap();
        assert!(r.three_connected && r.unstraddled_links.is_empty(), "{}", net.name());
    }
}

/// Protection-pairs by plain set intersection of edge sets.
fn oracle_pairs(cs: &CycleSet, i: LinkId) -> Vec<(usize, usize, Sharing)> {
    let sets: Vec<HashSet<LinkId>> = cs.cycles().iter().map(|c| c.on_cycle.iter().copied().collect()).collect();
    let covers = |p: usize| cs.cycle(pcycle_core::CycleId(p)).on_cycle.contains(&i) || cs.cycle(pcycle_core::CycleId(p)).straddling.contains(&i);
    let mut out = Vec::new();
    for p in 0..cs.len() {
        for q in p + 1..cs.len() {
            if !covers(p) || !covers(q) {
                continue;
            }
            let common: Vec<_> = sets[p].intersection(&sets[q]).collect();
            if common.is_empty() {
                out.push((p, q, Sharing::LinkDisjoint));
            } else if common == [&i] {
                out.push((p, q, Sharing::ShareOnlyI));
            }
        }
    }
    out
}

#[test]
fn protection_pairs_match_intersection_oracle() {
    let mut totals = Vec::new();
    for net in [datasets::k4(), datasets::k5(), datasets::wheel5(), datasets::ring_chords()] {
        let cs = enumerate_simple_cycles(&net, net.node_count()).unwrap();
        let mut total = 0;
        for l in net.links() {
            let got: Vec<_> = enumerate_protection_pairs(l.id, &cs)
                .unwrap()
                .into_iter()
                .map(|pp| (pp.p.0, pp.q.0, pp.sharing))
                .collect();
            assert_eq!(got, oracle_pairs(&cs, l.id), "{} link {}", net.name(), l.id);
            total += got.len();
        }
        totals.push(total);
    }
    assert_eq!(totals[..2], [6, 360]);
}

#[test]
fn sg_optimum_matches_exhaustive_search() {
    for (net, w, expect) in [
        (datasets::k4(), 1, 24.0),
        (datasets::k4(), 2, 24.0),
        (datasets::wheel5(), 1, 40.0),
        (datasets::ring_chords(), 1, 36.0),
    ] {
        let net = net.with_uniform_working(w);
        let cs = enumerate_simple_cycles(&net, net.node_count()).unwrap();
        let oracle = sg_oracle(&net, &cs);
        assert_eq!(oracle, expect, "{} w={w}", net.name());
        let out = solve_sg(&net, &cs, Duration::from_secs(60)).unwrap();
        assert!(out.is_optimal());
        assert_eq!(out.plan.unwrap().total_cost, oracle, "{} w={w}", net.name());
    }
}

#[test]
fn db_optimum_matches_exhaustive_search_on_k4() {
    for (w, expect) in [(1, 12.0), (2, 24.0)] {
        let net = datasets::k4().with_uniform_working(w);
        let cs = enumerate_simple_cycles(&net, 4).unwrap();
        let oracle = db_oracle_single_pairs(&net, &cs);
        assert_eq!(oracle, expect);
        let out = solve_db(&net, &cs, Duration::from_secs(60)).unwrap();
        assert!(out.is_optimal());
        assert_eq!(out.plan.unwrap().total_cost, oracle);
    }
}

#[test]
fn sg_variable_counts() {
    for (net, pruned_expect) in [(datasets::k4(), 19), (datasets::k5(), 137), (datasets::k6(), 1202)] {
        let cs = enumerate_simple_cycles(&net, net.node_count()).unwrap();
        let (l, p) = (net.link_count(), cs.len());
        let (full, _) = build_sg_model_with(&net, &cs, false).unwrap();
        assert_eq!(full.var_count(), l * p + p + l);
        let (pruned, _) = build_sg_model_with(&net, &cs, true).unwrap();
        // one allocation per (link, straddled cycle)
        let straddles: usize = cs.cycles().iter().map(|c| c.straddling.len()).sum();
        assert_eq!(pruned.var_count(), straddles + p + l);
        assert_eq!(pruned.var_count(), pruned_expect);
    }
}
