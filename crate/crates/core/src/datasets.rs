//! Bundled topologies. All carry unit working capacity and unit cost.

use crate::topology::{parse_network, Network};

pub const K4: &str = include_str!("../data/k4.topo");
pub const K5: &str = include_str!("../data/k5.topo");
pub const K6: &str = include_str!("../data/k6.topo");
pub const RING_CHORDS: &str = include_str!("../data/ring_chords.topo");
pub const WHEEL5: &str = include_str!("../data/wheel5.topo");
pub const COST239: &str = include_str!("../data/cost239.topo");
pub const TRIANGLE: &str = include_str!("../data/triangle.topo");
pub const RING5: &str = include_str!("../data/ring5.topo");
pub const BRIDGED_TRIANGLES: &str = include_str!("../data/bridged_triangles.topo");

/// Name and source text of every bundled dataset.
pub const ALL: &[(&str, &str)] = &[
    ("k4", K4),
    ("k5", K5),
    ("k6", K6),
    ("ring6-chords", RING_CHORDS),
    ("wheel5", WHEEL5),
    ("cost239", COST239),
    ("triangle", TRIANGLE),
    ("ring5", RING5),
    ("bridged-triangles", BRIDGED_TRIANGLES),
];

fn load(text: &str) -> Network {
    parse_network(text).expect("bundled dataset parses")
}

pub fn by_name(name: &str) -> Option<Network> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| load(t))
}

pub fn k4() -> Network {
    load(K4)
}

pub fn k5() -> Network {
    load(K5)
}

pub fn k6() -> Network {
    load(K6)
}

pub fn ring_chords() -> Network {
    load(RING_CHORDS)
}

pub fn wheel5() -> Network {
    load(WHEEL5)
}

pub fn cost239() -> Network {
    load(COST239)
}

pub fn triangle() -> Network {
    load(TRIANGLE)
}

pub fn ring5() -> Network {
    load(RING5)
}

pub fn bridged_triangles() -> Network {
    load(BRIDGED_TRIANGLES)
}
