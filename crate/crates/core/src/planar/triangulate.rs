use thiserror::Error;

use super::graph::{Dart, EmbeddedGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulateError {
    #[error("face {face} has no vertex that occurs exactly once on its walk")]
    NoApex { face: usize },
}

/// A triangulated copy of a graph. Edge ids `0..original_edges` are the
/// input edges; the rest are added diagonals.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub graph: EmbeddedGraph,
    pub original_edges: usize,
}

impl Triangulation {
    pub fn is_diagonal(&self, e: usize) -> bool {
        e >= self.original_edges
    }

    pub fn diagonals(&self) -> std::ops::Range<usize> {
        self.original_edges..self.graph.edge_count()
    }
}

/// Fan-triangulates every face of size greater than three from a single
/// apex, the first vertex of the walk that occurs on it exactly once. Faces
/// of size two or three are left alone, so the operation is idempotent.
pub fn triangulate_faces(g: &EmbeddedGraph) -> Result<Triangulation, TriangulateError> {
    let faces = g.faces();
    let original_edges = g.edge_count();
    let mut edges: Vec<[VertexId; 2]> = g.edges().to_vec();
    let mut inserts: Vec<Vec<Dart>> = vec![Vec::new(); g.dart_count()];

    for (fid, walk) in faces.walks.iter().enumerate() {
        let f = walk.size();
        if f <= 3 {
            continue;
        }
        let verts: Vec<VertexId> = walk.darts.iter().map(|&d| g.origin(d)).collect();
        let apex = (0..f)
            .find(|&i| verts.iter().filter(|&&v| v == verts[i]).count() == 1)
            .ok_or(TriangulateError::NoApex { face: fid })?;
        let h: Vec<Dart> = (0..f).map(|i| walk.darts[(apex + i) % f]).collect();
        let v0 = g.origin(h[0]);
        let mut apex_darts = Vec::with_capacity(f - 3);
        for i in (2..=f - 2).rev() {
            let vi = g.origin(h[i]);
            let e = edges.len();
            edges.push([v0, vi]);
            inserts[h[i - 1].twin().0].push(Dart(2 * e + 1));
            apex_darts.push(Dart(2 * e));
        }
        inserts[h[f - 1].twin().0].extend(apex_darts);
    }

    if edges.len() == original_edges {
        return Ok(Triangulation { graph: g.clone(), original_edges });
    }

    let rotation: Vec<Vec<Dart>> = (0..g.vertex_count())
        .map(|v| {
            let mut rot = Vec::with_capacity(g.degree(v));
            for &d in g.rotation(v) {
                rot.push(d);
                rot.extend_from_slice(&inserts[d.0]);
            }
            rot
        })
        .collect();
    let graph = EmbeddedGraph::from_darts(edges, rotation, g.outer_dart());
    Ok(Triangulation { graph, original_edges })
}

/// True when every face has size two or three.
pub fn is_triangulated(g: &EmbeddedGraph) -> bool {
    g.faces().walks.iter().all(|w| w.size() <= 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::gen;

    #[test]
    fn square_gets_one_diagonal() {
        let g = gen::cycle(4);
        let t = triangulate_faces(&g).unwrap();
        // both the inner and the outer face are squares
        assert_eq!(t.diagonals().len(), 2);
        assert!(is_triangulated(&t.graph));
        assert!(t.graph.euler_holds());
    }

    #[test]
    fn triangulated_input_is_fixed_point() {
        let g = triangulate_faces(&gen::triangulated_grid(5, 5)).unwrap().graph;
        let t = triangulate_faces(&g).unwrap();
        assert_eq!(t.diagonals().len(), 0);
        assert_eq!(t.graph, g);
    }

    #[test]
    fn face_of_size_f_gets_f_minus_3_diagonals() {
        for f in 3..12 {
            let g = gen::cycle(f);
            let t = triangulate_faces(&g).unwrap();
            assert_eq!(t.diagonals().len(), 2 * (f - 3));
            assert!(is_triangulated(&t.graph));
        }
    }

    #[test]
    fn tree_faces_triangulate() {
        // a path has one face that visits interior vertices twice
        let g = gen::path(6);
        let t = triangulate_faces(&g).unwrap();
        assert!(is_triangulated(&t.graph));
        assert!(t.graph.euler_holds());
        assert!(t.graph.check_invariants().is_ok());
    }
}
