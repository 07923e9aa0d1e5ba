//! Network topologies: parsing, serialization and protectability checks.
//!
//! The text format is line oriented:
//!
//! ```text
//! network <name>            # optional
//! nodes: <id> <id> ...
//! link <u> <v> <w> [<c>]    # w: working capacity, c: unit cost (default 1)
//! ```
//!
//! `#` starts a comment. Links are numbered in file order from 0.

use std::collections::HashMap;
use std::fmt;

use crate::cycles::enumerate_simple_cycles_with;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: LinkId,
    pub a: NodeId,
    pub b: NodeId,
    /// Working capacity in wavelength-channel units.
    pub working: u32,
    pub unit_cost: f64,
}

impl Link {
    pub fn has_endpoint(&self, n: NodeId) -> bool {
        self.a == n || self.b == n
    }

    pub fn other(&self, n: NodeId) -> NodeId {
        if self.a == n {
            self.b
        } else {
            self.a
        }
    }
}

/// Undirected simple graph with per-link working capacity and unit cost.
/// Immutable once built.
#[derive(Debug, Clone)]
pub struct Network {
    name: String,
    nodes: Vec<String>,
    links: Vec<Link>,
    node_index: HashMap<String, NodeId>,
    pair_index: HashMap<(NodeId, NodeId), LinkId>,
    adjacency: Vec<Vec<(NodeId, LinkId)>>,
}

fn key(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Incremental construction with the same checks as the parser.
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    name: String,
    nodes: Vec<String>,
    node_index: HashMap<String, NodeId>,
    links: Vec<(NodeId, NodeId, u32, f64)>,
    pairs: HashMap<(NodeId, NodeId), LinkId>,
}

impl NetworkBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NetworkBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn node(&mut self, id: impl Into<String>) -> Result<NodeId> {
        self.node_at(id.into(), 0)
    }

    fn node_at(&mut self, id: String, line: usize) -> Result<NodeId> {
        if self.node_index.contains_key(&id) {
            return Err(Error::Syntax {
                line,
                message: format!("duplicate node `{id}`"),
            });
        }
        let n = NodeId(self.nodes.len());
        self.node_index.insert(id.clone(), n);
        self.nodes.push(id);
        Ok(n)
    }

    pub fn link(&mut self, u: &str, v: &str, working: u32, unit_cost: f64) -> Result<LinkId> {
        self.link_at(u, v, working, unit_cost, 0)
    }

    fn link_at(&mut self, u: &str, v: &str, working: u32, cost: f64, line: usize) -> Result<LinkId> {
        let lookup = |name: &str| {
            self.node_index.get(name).copied().ok_or_else(|| Error::UnknownNode {
                line,
                node: name.to_string(),
            })
        };
        let a = lookup(u)?;
        let b = lookup(v)?;
        if a == b {
            return Err(Error::SelfLoop {
                line,
                node: u.to_string(),
            });
        }
        if !(cost.is_finite() && cost > 0.0) {
            return Err(Error::Syntax {
                line,
                message: format!("unit cost must be positive, got {cost}"),
            });
        }
        if self.pairs.contains_key(&key(a, b)) {
            return Err(Error::DuplicateLink {
                line,
                a: u.to_string(),
                b: v.to_string(),
            });
        }
        let id = LinkId(self.links.len());
        self.pairs.insert(key(a, b), id);
        self.links.push((a, b, working, cost));
        Ok(id)
    }

    pub fn build(self) -> Result<Network> {
        if self.nodes.len() < 3 {
            return Err(Error::InvalidNetwork(format!(
                "need at least 3 nodes, found {}",
                self.nodes.len()
            )));
        }
        if self.links.len() < 3 {
            return Err(Error::InvalidNetwork(format!(
                "need at least 3 links, found {}",
                self.links.len()
            )));
        }
        let links: Vec<Link> = self
            .links
            .into_iter()
            .enumerate()
            .map(|(k, (a, b, working, unit_cost))| Link {
                id: LinkId(k),
                a,
                b,
                working,
                unit_cost,
            })
            .collect();
        let mut adjacency = vec![Vec::new(); self.nodes.len()];
        for l in &links {
            adjacency[l.a.0].push((l.b, l.id));
            adjacency[l.b.0].push((l.a, l.id));
        }
        for adj in &mut adjacency {
            adj.sort();
        }
        Ok(Network {
            name: self.name,
            nodes: self.nodes,
            links,
            node_index: self.node_index,
            pair_index: self.pairs,
            adjacency,
        })
    }
}

impl Network {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn node_names(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_name(&self, n: NodeId) -> &str {
        &self.nodes[n.0]
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.node_index.get(name).copied()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.0]
    }

    pub fn try_link(&self, id: LinkId) -> Result<&Link> {
        self.links.get(id.0).ok_or(Error::UnknownLink(id.0))
    }

    pub fn link_between(&self, a: NodeId, b: NodeId) -> Option<LinkId> {
        self.pair_index.get(&key(a, b)).copied()
    }

    /// Link lookup by endpoint names, in either order.
    pub fn link_by_names(&self, u: &str, v: &str) -> Option<LinkId> {
        self.link_between(self.node_id(u)?, self.node_id(v)?)
    }

    /// Neighbours of `n` with the connecting link, sorted by node id.
    pub fn neighbors(&self, n: NodeId) -> &[(NodeId, LinkId)] {
        &self.adjacency[n.0]
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.adjacency[n.0].len()
    }

    /// `u-v` label for messages.
    pub fn link_label(&self, id: LinkId) -> String {
        let l = self.link(id);
        format!("{}-{}", self.nodes[l.a.0], self.nodes[l.b.0])
    }

    pub fn total_working(&self) -> u64 {
        self.links.iter().map(|l| l.working as u64).sum()
    }

    pub fn max_working(&self) -> u32 {
        self.links.iter().map(|l| l.working).max().unwrap_or(0)
    }

    /// Copy of this network with new working capacities, one per link.
    pub fn with_working(&self, working: &[u32]) -> Network {
        assert_eq!(working.len(), self.links.len(), "one capacity per link");
        let mut net = self.clone();
        for (l, &w) in net.links.iter_mut().zip(working) {
            l.working = w;
        }
        net
    }

    pub fn with_uniform_working(&self, w: u32) -> Network {
        self.with_working(&vec![w; self.links.len()])
    }

    /// Renders the network in the topology file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("network {}\nnodes:", self.name);
        for n in &self.nodes {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        for l in &self.links {
            out.push_str(&format!(
                "link {} {} {} {}\n",
                self.nodes[l.a.0], self.nodes[l.b.0], l.working, l.unit_cost
            ));
        }
        out
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

/// Parses topology text. Link ids follow file order.
pub fn parse_network(text: &str) -> Result<Network> {
    let mut builder = NetworkBuilder::new("");
    let mut named = false;
    let mut seen_content = false;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax {
            line: line_no,
            message,
        };
        if let Some(rest) = line.strip_prefix("nodes:") {
            for id in rest.split_whitespace() {
                builder.node_at(id.to_string(), line_no)?;
            }
        } else {
            let mut words = line.split_whitespace();
            match words.next() {
                Some("network") => {
                    if named || seen_content {
                        return Err(syntax("`network` must be the first line".into()));
                    }
                    let name: Vec<&str> = words.collect();
                    if name.is_empty() {
                        return Err(syntax("missing network name".into()));
                    }
                    builder.name = name.join(" ");
                    named = true;
                }
                Some("link") => {
                    let args: Vec<&str> = words.collect();
                    if !(3..=4).contains(&args.len()) {
                        return Err(syntax(format!(
                            "expected `link <u> <v> <w> [<c>]`, got {} fields",
                            args.len()
                        )));
                    }
                    let working: u32 = args[2].parse().map_err(|_| {
                        syntax(format!("working capacity `{}` is not a non-negative integer", args[2]))
                    })?;
                    let cost: f64 = match args.get(3) {
                        Some(c) => c
                            .parse()
                            .map_err(|_| syntax(format!("unit cost `{c}` is not a number")))?,
                        None => 1.0,
                    };
                    builder.link_at(args[0], args[1], working, cost, line_no)?;
                }
                Some(other) => return Err(syntax(format!("unknown directive `{other}`"))),
                None => unreachable!("blank lines skipped"),
            }
        }
        seen_content = true;
    }
    if builder.name.is_empty() {
        builder.name = "unnamed".to_string();
    }
    builder.build()
}

/// Average nodal degree, 2L/N.
pub fn avg_nodal_degree(net: &Network) -> f64 {
    2.0 * net.link_count() as f64 / net.node_count() as f64
}

/// Maximum number of link-disjoint paths between `s` and `t`
/// (unit-capacity max-flow, augmenting along shortest paths).
pub fn link_disjoint_paths(net: &Network, s: NodeId, t: NodeId) -> u32 {
    if s == t {
        return 0;
    }
    // Each undirected link is a pair of opposite unit arcs; flow[l] is the
    // net flow from `a` to `b` on link l, in {-1, 0, 1}.
    let mut flow = vec![0i8; net.link_count()];
    let mut total = 0;
    loop {
        let mut prev: Vec<Option<(NodeId, LinkId)>> = vec![None; net.node_count()];
        let mut seen = vec![false; net.node_count()];
        seen[s.0] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &(v, l) in net.neighbors(u) {
                if seen[v.0] {
                    continue;
                }
                let forward = net.link(l).a == u;
                let residual = if forward { 1 - flow[l.0] } else { 1 + flow[l.0] };
                if residual > 0 {
                    seen[v.0] = true;
                    prev[v.0] = Some((u, l));
                    queue.push_back(v);
                }
            }
        }
        if !seen[t.0] {
            return total;
        }
        let mut v = t;
        while let Some((u, l)) = prev[v.0] {
            if net.link(l).a == u {
                flow[l.0] += 1;
            } else {
                flow[l.0] -= 1;
            }
            v = u;
        }
        total += 1;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtectabilityReport {
    pub three_connected: bool,
    /// Node pairs with fewer than three link-disjoint paths, with the count.
    pub offending_node_pairs: Vec<(NodeId, NodeId, u32)>,
    /// Links that are a chord of no enumerated cycle.
    pub unstraddled_links: Vec<LinkId>,
}

/// Checks 3-edge-connectivity over all node pairs and lists links that no
/// cycle of length up to `max_hops` straddles.
pub fn validate_protectable(net: &Network, max_hops: usize) -> Result<ProtectabilityReport> {
    validate_protectable_with_cap(net, max_hops, crate::cycles::DEFAULT_CYCLE_CAP)
}

pub fn validate_protectable_with_cap(
    net: &Network,
    max_hops: usize,
    cycle_cap: usize,
) -> Result<ProtectabilityReport> {
    let mut offending = Vec::new();
    for s in 0..net.node_count() {
        for t in s + 1..net.node_count() {
            let k = link_disjoint_paths(net, NodeId(s), NodeId(t));
            if k < 3 {
                offending.push((NodeId(s), NodeId(t), k));
            }
        }
    }
    let cycles = enumerate_simple_cycles_with(net, max_hops, cycle_cap)?;
    let unstraddled = net
        .links()
        .iter()
        .map(|l| l.id)
        .filter(|&l| cycles.cycles_straddled_by(l).next().is_none())
        .collect();
    Ok(ProtectabilityReport {
        three_connected: offending.is_empty(),
        offending_node_pairs: offending,
        unstraddled_links: unstraddled,
    })
}
