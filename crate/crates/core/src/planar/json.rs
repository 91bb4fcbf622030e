use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::graph::{EmbeddedGraph, GraphError, VertexId};

/// Serialized form of an embedded graph plus an optional prescribed vertex
/// set. Field order is alphabetical so the output has sorted keys.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    #[serde(rename = "P", default)]
    pub p: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
    pub n: usize,
    pub outer_face: usize,
    pub rotations: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Error)]
pub enum GraphJsonError {
    #[error("malformed graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("rotation key {0:?} is not a vertex id")]
    BadKey(String),
    #[error("prescribed vertex {0} is out of range")]
    BadPoint(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl GraphDocument {
    pub fn from_graph(g: &EmbeddedGraph, p: &[VertexId]) -> Self {
        let faces = g.faces();
        let rotations = g
            .rotations_as_edges()
            .into_iter()
            .enumerate()
            .map(|(v, r)| (v.to_string(), r))
            .collect();
        let mut p = p.to_vec();
        p.sort_unstable();
        p.dedup();
        GraphDocument {
            p,
            edges: g.edges().to_vec(),
            n: g.vertex_count(),
            outer_face: g.outer_face(&faces).unwrap_or(0),
            rotations,
        }
    }

    pub fn to_graph(&self) -> Result<(EmbeddedGraph, Vec<VertexId>), GraphJsonError> {
        let mut rotations = vec![Vec::new(); self.n];
        for (k, r) in &self.rotations {
            let v: usize = k.parse().map_err(|_| GraphJsonError::BadKey(k.clone()))?;
            if v >= self.n {
                return Err(GraphJsonError::BadKey(k.clone()));
            }
            rotations[v] = r.clone();
        }
        let mut g = EmbeddedGraph::build(self.n, self.edges.clone(), rotations)?;
        if g.edge_count() > 0 {
            g.set_outer_face(self.outer_face)?;
        }
        if let Some(&bad) = self.p.iter().find(|&&v| v >= self.n) {
            return Err(GraphJsonError::BadPoint(bad));
        }
        Ok((g, self.p.clone()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, GraphJsonError> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::gen;

    #[test]
    fn round_trip_preserves_embedding() {
        let g = gen::triangulated_grid(4, 5);
        let doc = GraphDocument::from_graph(&g, &[3, 1, 3]);
        let text = doc.to_json();
        let (h, p) = GraphDocument::from_json(&text).unwrap().to_graph().unwrap();
        assert_eq!(p, vec![1, 3]);
        assert_eq!(h.rotations_as_edges(), g.rotations_as_edges());
        assert_eq!(h.outer_face(&h.faces()), g.outer_face(&g.faces()));
        assert!(text.find("\"P\"").unwrap() < text.find("\"edges\"").unwrap());
    }
}
