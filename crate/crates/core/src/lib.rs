//! Dual-link-failure p-cycle protection design.
//!
//! Two methods are offered. The single-cycle method ([`sg`]) protects every
//! link as a straddler of doubled p-cycles; the double-cycle method ([`db`])
//! gives each link a pair of p-cycles that cannot both be hit by one extra
//! failure. Plans from either are checked against every pair of link
//! failures by [`sim`].

pub mod config;
pub mod cycles;
pub mod datasets;
pub mod db;
pub mod error;
pub mod plan;
pub mod report;
pub mod sg;
pub mod sim;
pub mod topology;

pub use cycles::{enumerate_simple_cycles, CycleId, CycleSet, Relation};
pub use error::{Error, Result};
pub use plan::{DbPlan, Method, MethodOptions, MethodOutcome, Plan, SgPlan};
pub use topology::{avg_nodal_degree, parse_network, validate_protectable, LinkId, Network, NodeId};

/// Default cycle length bound: the node count, i.e. every simple cycle.
pub fn default_max_hops(net: &Network) -> usize {
    net.node_count().max(3)
}
