//! Classic and refined r-divisions built from a recursion tree of simple
//! cycle separators, plus an independent verifier and overcount statistic.
//!
//! Every node `x` of the recursion tree carries a connected edge-induced
//! region `R_x` and the counts
//!
//! * `n(x) = |V(R_x)|`,
//! * `b(x)`, the vertices of `R_x` already on some ancestor separator,
//! * `p(x)`, the prescribed vertices of `R_x` that are not in `b(x)`.
//!
//! A node is a leaf when `n <= c0 r`, `b <= c0 sqrt(r)` and `p <= c0 t`.
//! Otherwise its region is fan-triangulated and split along a cycle that
//! balances one over-threshold parameter, chosen by depth.

mod build;
mod overcount;
mod verify;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::planar::{EmbeddedGraph, Region, VertexId};
use crate::separator::Balance;

pub use build::{classic_r_division, refined_r_division};
pub use overcount::{compute_overcount, OvercountError};
pub use verify::{verify_division, CycleFlags, DivisionReport, RegionStats, VerifyFailure};

/// Threshold on the number of interior prescribed vertices; `Infinite`
/// disables point balancing.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    Finite(u64),
    Infinite,
}

impl Threshold {
    pub fn as_f64(self) -> f64 {
        match self {
            Threshold::Finite(t) => t as f64,
            Threshold::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(t) => write!(f, "{t}"),
            Threshold::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Threshold {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "infinity" | "∞" => Ok(Threshold::Infinite),
            _ => s
                .parse::<u64>()
                .map_err(|e| format!("threshold must be a positive integer or 'inf': {e}"))
                .and_then(|t| if t == 0 { Err("threshold must be at least 1".into()) } else { Ok(Threshold::Finite(t)) }),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Threshold::Finite(t) => s.serialize_u64(*t),
            Threshold::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(t) => Ok(Threshold::Finite(t)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// The parameter a separator was chosen to balance.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Vertices,
    Boundary,
    Points,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisionConfig {
    pub c0: f64,
    pub balance: Balance,
    pub seed: u64,
    /// Smallest accepted `r`.
    pub r_min: u64,
    /// A node that cannot be split without losing progress becomes a leaf
    /// when it has at most this many vertices.
    pub leaf_floor: usize,
    pub extra_roots: usize,
    /// Balanced cycles examined per node before giving up.
    pub candidate_limit: usize,
    /// Ceiling `C` in `|R| <= C (N/r + |P|/t)`.
    pub region_ceiling: f64,
    pub parallel: bool,
}

impl Default for DivisionConfig {
    fn default() -> Self {
        DivisionConfig {
            c0: 4.0,
            balance: Balance::THREE_QUARTERS,
            seed: 0,
            r_min: 16,
            leaf_floor: 12,
            extra_roots: 2,
            candidate_limit: 48,
            region_ceiling: 48.0,
            parallel: true,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisionError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("r = {r} is below the minimum r0 = {r_min}")]
    RBelowMinimum { r: u64, r_min: u64 },
    #[error("prescribed vertex {0} is not a vertex of the graph")]
    PointOutOfRange(VertexId),
    #[error("no separator makes progress at a node with {n} vertices (depth {depth})")]
    ProgressFailure { n: usize, depth: usize },
}

/// A separator cycle as recorded on the tree, in host vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub vertices: Vec<VertexId>,
    /// Cycle edges that are triangulation diagonals rather than graph edges.
    pub diagonals: Vec<[VertexId; 2]>,
    /// Fan apexes the cycle passed through inside a single face, replaced
    /// by a chord of that face.
    pub shortcuts: usize,
}

impl CycleRecord {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub region: Region,
    pub n: usize,
    pub b: usize,
    pub p: usize,
    /// `[inside, outside]` children of an internal node.
    pub children: Option<[usize; 2]>,
    pub separator: Option<CycleRecord>,
    pub balanced: Option<Parameter>,
    /// Leaf created by the progress guard rather than by the thresholds.
    #[serde(default)]
    pub forced_leaf: bool,
}

impl RecursionNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

/// Recursion tree in preorder; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionTree {
    pub nodes: Vec<RecursionNode>,
}

impl RecursionTree {
    pub fn root(&self) -> &RecursionNode {
        &self.nodes[0]
    }

    pub fn leaves(&self) -> impl Iterator<Item = &RecursionNode> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }

    pub fn internal(&self) -> impl Iterator<Item = &RecursionNode> {
        self.nodes.iter().filter(|n| !n.is_leaf())
    }

    pub fn is_ancestor(&self, a: usize, mut b: usize) -> bool {
        loop {
            if a == b {
                return true;
            }
            match self.nodes[b].parent {
                Some(p) => b = p,
                None => return false,
            }
        }
    }
}

/// The leaf regions of a recursion tree plus the boundary vertex set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Division {
    pub regions: Vec<Region>,
    /// Recursion node id of each region.
    pub leaf_nodes: Vec<usize>,
    /// Vertices lying in two or more regions.
    pub boundary: Vec<VertexId>,
    /// Ids of the internal nodes, whose cycles form the separator set.
    pub separators: Vec<usize>,
    pub tree: RecursionTree,
    /// Set when the progress guard forced any leaf.
    pub flagged: bool,
}

impl Division {
    pub fn from_tree(g: &EmbeddedGraph, tree: RecursionTree) -> Division {
        let mut count = vec![0usize; g.vertex_count()];
        let mut regions = Vec::new();
        let mut leaf_nodes = Vec::new();
        for node in tree.leaves() {
            for &v in &node.region.vertices {
                count[v] += 1;
            }
            regions.push(node.region.clone());
            leaf_nodes.push(node.id);
        }
        let boundary = (0..g.vertex_count()).filter(|&v| count[v] >= 2).collect();
        let separators = tree.internal().map(|n| n.id).collect();
        let flagged = tree.nodes.iter().any(|n| n.forced_leaf);
        Division { regions, leaf_nodes, boundary, separators, tree, flagged }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("division serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Leaf thresholds `c0 r`, `c0 sqrt(r)`, `c0 t`.
#[derive(Copy, Clone, Debug)]
pub(crate) struct Limits {
    pub n: f64,
    pub b: f64,
    pub p: f64,
}

impl Limits {
    pub fn new(c0: f64, r: u64, t: Threshold) -> Self {
        Limits { n: c0 * r as f64, b: c0 * (r as f64).sqrt(), p: c0 * t.as_f64() }
    }

    pub fn exceeded(&self, n: usize, b: usize, p: usize) -> [bool; 3] {
        [n as f64 > self.n, b as f64 > self.b, p as f64 > self.p]
    }
}
