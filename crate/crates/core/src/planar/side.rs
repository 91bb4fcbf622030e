use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::graph::{Dart, EdgeId, EmbeddedGraph, VertexId};

/// A simple cycle in a host embedding, as a closed dart sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleCycle {
    pub darts: Vec<Dart>,
}

impl SimpleCycle {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn vertices(&self, g: &EmbeddedGraph) -> Vec<VertexId> {
        self.darts.iter().map(|&d| g.origin(d)).collect()
    }

    /// Checks closure and vertex distinctness.
    pub fn validate(&self, g: &EmbeddedGraph) -> Result<(), SideError> {
        let k = self.darts.len();
        if k < 2 {
            return Err(SideError::NonSimpleCycle("fewer than two darts".into()));
        }
        let mut seen = vec![false; g.vertex_count()];
        for i in 0..k {
            let d = self.darts[i];
            if d.0 >= g.dart_count() {
                return Err(SideError::NonSimpleCycle(format!("dart {} out of range", d.0)));
            }
            let next = self.darts[(i + 1) % k];
            if g.head(d) != g.origin(next) {
                return Err(SideError::NonSimpleCycle(format!("darts {} and {} are not consecutive", d.0, next.0)));
            }
            let v = g.origin(d);
            if seen[v] {
                return Err(SideError::NonSimpleCycle(format!("vertex {v} repeats")));
            }
            seen[v] = true;
        }
        if k == 2 && self.darts[0].edge() == self.darts[1].edge() {
            return Err(SideError::NonSimpleCycle("digon traverses one edge twice".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SideError {
    #[error("not a simple cycle: {0}")]
    NonSimpleCycle(String),
    #[error("graph has no designated outer face")]
    NoOuterFace,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inside,
    Outside,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EdgeSide {
    Inside,
    Outside,
    On,
}

/// Face and edge sides relative to a cycle; the outer face is outside.
#[derive(Clone, Debug)]
pub struct SideClassification {
    pub face_inside: Vec<bool>,
    pub edge_side: Vec<EdgeSide>,
    pub on_cycle: Vec<bool>,
}

impl SideClassification {
    pub fn vertex_strictly_inside(&self, g: &EmbeddedGraph, faces_of_dart: &[usize], v: VertexId) -> Option<bool> {
        if self.on_cycle[v] {
            return None;
        }
        g.rotation(v).first().map(|d| self.face_inside[faces_of_dart[d.0]])
    }
}

/// 2-colours the faces by a dual BFS from the outer face, with the cycle's
/// edges as walls.
pub fn classify_sides(g: &EmbeddedGraph, cycle: &SimpleCycle) -> Result<SideClassification, SideError> {
    cycle.validate(g)?;
    let outer = g.outer_dart().ok_or(SideError::NoOuterFace)?;
    let faces = g.faces();
    let mut wall = vec![false; g.edge_count()];
    for d in &cycle.darts {
        wall[d.edge()] = true;
    }
    let mut reached = vec![false; faces.len()];
    let start = faces.of_dart[outer.0];
    reached[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        for &d in &faces.walks[f].darts {
            if wall[d.edge()] {
                continue;
            }
            let h = faces.of_dart[d.twin().0];
            if !reached[h] {
                reached[h] = true;
                queue.push_back(h);
            }
        }
    }
    for d in &cycle.darts {
        let a = reached[faces.of_dart[d.0]];
        let b = reached[faces.of_dart[d.twin().0]];
        if a == b {
            return Err(SideError::NonSimpleCycle(format!("edge {} does not separate two sides", d.edge())));
        }
    }
    let face_inside: Vec<bool> = reached.iter().map(|r| !r).collect();
    let edge_side = (0..g.edge_count())
        .map(|e| {
            if wall[e] {
                EdgeSide::On
            } else if face_inside[faces.of_dart[2 * e]] {
                EdgeSide::Inside
            } else {
                EdgeSide::Outside
            }
        })
        .collect();
    let mut on_cycle = vec![false; g.vertex_count()];
    for &d in &cycle.darts {
        on_cycle[g.origin(d)] = true;
    }
    Ok(SideClassification { face_inside, edge_side, on_cycle })
}

/// An edge-induced subgraph of some host, by host ids.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Region {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

impl Region {
    pub fn from_edges(g: &EmbeddedGraph, mut edges: Vec<EdgeId>) -> Region {
        edges.sort_unstable();
        edges.dedup();
        let mut vertices: Vec<VertexId> = edges.iter().flat_map(|&e| g.endpoints(e)).collect();
        vertices.sort_unstable();
        vertices.dedup();
        Region { edges, vertices }
    }

    /// Number of connected components of the edge-induced subgraph.
    pub fn component_count(&self, g: &EmbeddedGraph) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let idx = |v: VertexId| self.vertices.binary_search(&v).expect("edge endpoint outside region");
        let mut count = self.vertices.len();
        for &e in &self.edges {
            let [u, v] = g.endpoints(e);
            let (a, b) = (find(&mut parent, idx(u)), find(&mut parent, idx(v)));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }
}

/// Edges of `g` on the requested side of `cycle` or on it. With
/// `original_edges_only`, only edges with id below that bound are kept
/// (the ids of a triangulation's input edges).
pub fn subgraph_on_side(
    g: &EmbeddedGraph,
    cycle: &SimpleCycle,
    side: Side,
    original_edges_only: Option<usize>,
) -> Result<Region, SideError> {
    let cls = classify_sides(g, cycle)?;
    Ok(region_from_classification(g, &cls, side, original_edges_only))
}

pub(crate) fn region_from_classification(
    g: &EmbeddedGraph,
    cls: &SideClassification,
    side: Side,
    original_edges_only: Option<usize>,
) -> Region {
    let limit = original_edges_only.unwrap_or(g.edge_count());
    let want = match side {
        Side::Inside => EdgeSide::Inside,
        Side::Outside => EdgeSide::Outside,
    };
    let edges = (0..limit).filter(|&e| cls.edge_side[e] == want || cls.edge_side[e] == EdgeSide::On).collect();
    Region::from_edges(g, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::gen;

    fn cycle_from_vertices(g: &EmbeddedGraph, vs: &[VertexId]) -> SimpleCycle {
        let darts = (0..vs.len())
            .map(|i| {
                let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
                *g.rotation(a).iter().find(|&&d| g.head(d) == b).expect("not adjacent")
            })
            .collect();
        SimpleCycle { darts }
    }

    #[test]
    fn outer_boundary_inside_is_whole_graph() {
        let g = gen::triangulated_grid(4, 4);
        let boundary = [0, 1, 2, 3, 7, 11, 15, 14, 13, 12, 8, 4];
        let c = cycle_from_vertices(&g, &boundary);
        let r = subgraph_on_side(&g, &c, Side::Inside, None).unwrap();
        assert_eq!(r.edges.len(), g.edge_count());
        let out = subgraph_on_side(&g, &c, Side::Outside, None).unwrap();
        assert_eq!(out.edges.len(), boundary.len());
    }

    #[test]
    fn inner_triangle_inside_is_itself() {
        let g = gen::triangulated_grid(4, 4);
        let c = cycle_from_vertices(&g, &[5, 6, 10]);
        let r = subgraph_on_side(&g, &c, Side::Inside, None).unwrap();
        assert_eq!(r.edges.len(), 3);
        assert_eq!(r.vertices, vec![5, 6, 10]);
    }

    #[test]
    fn rejects_repeated_vertex() {
        let g = gen::triangulated_grid(3, 3);
        let c = cycle_from_vertices(&g, &[0, 1, 4, 3, 4, 1]);
        assert!(matches!(classify_sides(&g, &c), Err(SideError::NonSimpleCycle(_))));
    }
}
