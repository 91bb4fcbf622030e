use std::collections::VecDeque;

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

/// A half-edge. Edge `e` owns darts `2e` (from `edges[e][0]`) and `2e + 1`
/// (from `edges[e][1]`), so the twin of a dart is obtained by flipping the
/// low bit.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart(pub usize);

impl Dart {
    #[inline]
    pub fn edge(self) -> EdgeId {
        self.0 / 2
    }

    #[inline]
    pub fn twin(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    #[inline]
    pub fn forward(edge: EdgeId) -> Dart {
        Dart(2 * edge)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} references vertex {vertex}, but the graph has {n} vertices")]
    DanglingEdge { edge: EdgeId, vertex: VertexId, n: usize },
    #[error("rotation at vertex {vertex} is not a permutation of its incident edges")]
    RotationMismatch { vertex: VertexId },
    #[error("face {0} does not exist")]
    UnknownFace(FaceId),
}

/// Combinatorial planar embedding given by a rotation system.
///
/// `rotation[v]` lists the darts leaving `v` in counterclockwise order.
/// Face walks follow `next(h) = rot_next(twin(h))`, which keeps each face
/// on the right of its walk. One face is designated as the outer face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedGraph {
    edges: Vec<[VertexId; 2]>,
    rotation: Vec<Vec<Dart>>,
    rot_pos: Vec<usize>,
    outer: Option<Dart>,
}

/// A closed face walk, stored as its darts in walk order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceWalk {
    pub darts: Vec<Dart>,
}

impl FaceWalk {
    pub fn size(&self) -> usize {
        self.darts.len()
    }
}

/// All face walks of a graph plus the dart-to-face map.
#[derive(Clone, Debug)]
pub struct Faces {
    pub walks: Vec<FaceWalk>,
    pub of_dart: Vec<FaceId>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
}

impl EmbeddedGraph {
    /// Builds and validates an embedding. `rotations[v]` lists the ids of the
    /// edges incident to `v` in counterclockwise order.
    pub fn build(
        vertex_count: usize,
        edges: Vec<[VertexId; 2]>,
        rotations: Vec<Vec<EdgeId>>,
    ) -> Result<Self, GraphError> {
        for (e, &[u, v]) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::DanglingEdge { edge: e, vertex: w, n: vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { edge: e, vertex: u });
            }
        }
        if rotations.len() != vertex_count {
            return Err(GraphError::RotationMismatch { vertex: rotations.len().min(vertex_count) });
        }
        let mut rotation = Vec::with_capacity(vertex_count);
        let mut seen = vec![false; 2 * edges.len()];
        for (v, rot) in rotations.iter().enumerate() {
            let mut darts = Vec::with_capacity(rot.len());
            for &e in rot {
                if e >= edges.len() {
                    return Err(GraphError::RotationMismatch { vertex: v });
                }
                let d = if edges[e][0] == v {
                    Dart(2 * e)
                } else if edges[e][1] == v {
                    Dart(2 * e + 1)
                } else {
                    return Err(GraphError::RotationMismatch { vertex: v });
                };
                if seen[d.0] {
                    return Err(GraphError::RotationMismatch { vertex: v });
                }
                seen[d.0] = true;
                darts.push(d);
            }
            rotation.push(darts);
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            let e = d / 2;
            return Err(GraphError::RotationMismatch { vertex: edges[e][d % 2] });
        }
        let mut g = EmbeddedGraph { edges, rotation, rot_pos: Vec::new(), outer: None };
        g.reindex();
        g.outer = (!g.edges.is_empty()).then_some(Dart(0));
        Ok(g)
    }

    /// Builds an embedding from rotations already expressed as darts.
    /// Callers inside the crate use this after surgery; validity is checked
    /// in debug builds.
    pub(crate) fn from_darts(
        edges: Vec<[VertexId; 2]>,
        rotation: Vec<Vec<Dart>>,
        outer: Option<Dart>,
    ) -> Self {
        let mut g = EmbeddedGraph { edges, rotation, rot_pos: Vec::new(), outer };
        g.reindex();
        debug_assert!(g.check_invariants().is_ok());
        g
    }

    fn reindex(&mut self) {
        self.rot_pos = vec![usize::MAX; 2 * self.edges.len()];
        for rot in &self.rotation {
            for (i, d) in rot.iter().enumerate() {
                self.rot_pos[d.0] = i;
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[e]
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    #[inline]
    pub fn origin(&self, d: Dart) -> VertexId {
        self.edges[d.edge()][d.0 & 1]
    }

    #[inline]
    pub fn head(&self, d: Dart) -> VertexId {
        self.edges[d.edge()][1 - (d.0 & 1)]
    }

    pub fn rotation(&self, v: VertexId) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    pub fn rot_position(&self, d: Dart) -> usize {
        self.rot_pos[d.0]
    }

    #[inline]
    pub fn rot_next(&self, d: Dart) -> Dart {
        let rot = &self.rotation[self.origin(d)];
        rot[(self.rot_pos[d.0] + 1) % rot.len()]
    }

    #[inline]
    pub fn rot_prev(&self, d: Dart) -> Dart {
        let rot = &self.rotation[self.origin(d)];
        rot[(self.rot_pos[d.0] + rot.len() - 1) % rot.len()]
    }

    /// Successor of `d` along its face walk.
    #[inline]
    pub fn face_next(&self, d: Dart) -> Dart {
        self.rot_next(d.twin())
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.rotation[v].iter().map(move |&d| self.head(d))
    }

    /// A dart whose face is the designated outer face.
    pub fn outer_dart(&self) -> Option<Dart> {
        self.outer
    }

    pub fn set_outer_dart(&mut self, d: Dart) {
        assert!(d.0 < self.dart_count(), "dart out of range");
        self.outer = Some(d);
    }

    /// Designates the outer face by its id in `faces()` order.
    pub fn set_outer_face(&mut self, face: FaceId) -> Result<(), GraphError> {
        let faces = self.faces();
        let walk = faces.walks.get(face).ok_or(GraphError::UnknownFace(face))?;
        self.outer = Some(walk.darts[0]);
        Ok(())
    }

    pub fn outer_face(&self, faces: &Faces) -> Option<FaceId> {
        self.outer.map(|d| faces.of_dart[d.0])
    }

    /// Enumerates face walks. Faces are numbered in order of their smallest
    /// dart, and each walk starts at that dart.
    pub fn faces(&self) -> Faces {
        let mut of_dart = vec![usize::MAX; self.dart_count()];
        let mut walks = Vec::new();
        for start in 0..self.dart_count() {
            if of_dart[start] != usize::MAX {
                continue;
            }
            let id = walks.len();
            let mut darts = Vec::new();
            let mut d = Dart(start);
            loop {
                of_dart[d.0] = id;
                darts.push(d);
                d = self.face_next(d);
                if d.0 == start {
                    break;
                }
            }
            walks.push(FaceWalk { darts });
        }
        Faces { walks, of_dart }
    }

    /// Connected components as a vertex labelling; returns (labels, count).
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.components().1 == 1
    }

    /// Euler's relation summed over components: `V - E + F = 2C`, where an
    /// isolated vertex contributes a single face.
    pub fn euler_holds(&self) -> bool {
        let faces = self.faces().len();
        let isolated = (0..self.vertex_count()).filter(|&v| self.degree(v) == 0).count();
        let (_, c) = self.components();
        self.vertex_count() + faces + isolated == 2 * c + self.edge_count()
    }

    /// Checks the twin involution, rotation permutation, and self-loop
    /// invariants.
    pub fn check_invariants(&self) -> Result<(), GraphError> {
        let mut seen = vec![false; self.dart_count()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d.0 >= seen.len() || seen[d.0] || self.origin(d) != v || self.rot_pos[d.0] != i {
                    return Err(GraphError::RotationMismatch { vertex: v });
                }
                seen[d.0] = true;
                debug_assert_eq!(d.twin().twin(), d);
            }
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(GraphError::RotationMismatch { vertex: self.origin(Dart(d)) });
        }
        for (e, &[u, v]) in self.edges.iter().enumerate() {
            if u == v {
                return Err(GraphError::SelfLoop { edge: e, vertex: u });
            }
        }
        Ok(())
    }

    /// Rotation of every vertex expressed as edge ids (the serialized form).
    pub fn rotations_as_edges(&self) -> Vec<Vec<EdgeId>> {
        self.rotation.iter().map(|r| r.iter().map(|d| d.edge()).collect()).collect()
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.rotation.push(Vec::new());
        self.rotation.len() - 1
    }

    /// Adds an edge between `u` and `v`. The new dart at `u` is placed right after
    /// `after_u` in the rotation of `u` (or becomes the only dart when `u`
    /// is isolated), and likewise at `v`.
    pub fn add_edge(
        &mut self,
        u: VertexId,
        after_u: Option<Dart>,
        v: VertexId,
        after_v: Option<Dart>,
    ) -> EdgeId {
        assert_ne!(u, v, "self-loops are not allowed");
        let e = self.edges.len();
        self.edges.push([u, v]);
        self.rot_pos.extend([usize::MAX, usize::MAX]);
        self.insert_dart(u, after_u, Dart(2 * e));
        self.insert_dart(v, after_v, Dart(2 * e + 1));
        if self.outer.is_none() {
            self.outer = Some(Dart(0));
        }
        e
    }

    fn insert_dart(&mut self, v: VertexId, after: Option<Dart>, d: Dart) {
        let at = match after {
            Some(a) => {
                assert_eq!(self.origin(a), v, "anchor dart must leave the vertex");
                self.rot_pos[a.0] + 1
            }
            None => {
                assert!(self.rotation[v].is_empty(), "vertex {v} needs an anchor dart");
                0
            }
        };
        self.rotation[v].insert(at, d);
        for (i, x) in self.rotation[v].iter().enumerate().skip(at) {
            self.rot_pos[x.0] = i;
        }
    }

    /// Subgraph formed by the given edges of `self`, with vertices and edges
    /// renumbered compactly in increasing order of their host ids. Rotations
    /// are restricted, so the result inherits the embedding.
    pub fn edge_subgraph(&self, edge_ids: &[EdgeId]) -> SubgraphMap {
        let mut keep = vec![false; self.edge_count()];
        for &e in edge_ids {
            keep[e] = true;
        }
        let mut vmap = vec![usize::MAX; self.vertex_count()];
        let mut vertices = Vec::new();
        let mut edges_host = Vec::new();
        for e in 0..self.edge_count() {
            if !keep[e] {
                continue;
            }
            edges_host.push(e);
        }
        let mut used = vec![false; self.vertex_count()];
        for &e in &edges_host {
            for w in self.edges[e] {
                used[w] = true;
            }
        }
        for v in 0..self.vertex_count() {
            if used[v] {
                vmap[v] = vertices.len();
                vertices.push(v);
            }
        }
        let mut emap = vec![usize::MAX; self.edge_count()];
        for (i, &e) in edges_host.iter().enumerate() {
            emap[e] = i;
        }
        let edges: Vec<[VertexId; 2]> =
            edges_host.iter().map(|&e| [vmap[self.edges[e][0]], vmap[self.edges[e][1]]]).collect();
        let rotation: Vec<Vec<Dart>> = vertices
            .iter()
            .map(|&v| {
                self.rotation[v]
                    .iter()
                    .filter(|d| keep[d.edge()])
                    .map(|d| Dart(2 * emap[d.edge()] + (d.0 & 1)))
                    .collect()
            })
            .collect();
        let outer = self.locate_outer_in_subgraph(&keep).map(|d| Dart(2 * emap[d.edge()] + (d.0 & 1)));
        let graph = EmbeddedGraph::from_darts(edges, rotation, outer);
        SubgraphMap { graph, vertices, edges: edges_host }
    }

    /// Finds a host dart of a kept edge whose face, in the subgraph, contains
    /// the host outer face: grow the host outer face across removed edges
    /// and return the first kept dart on the grown region's boundary.
    fn locate_outer_in_subgraph(&self, keep: &[bool]) -> Option<Dart> {
        let outer = self.outer?;
        if keep[outer.edge()] {
            return Some(outer);
        }
        let faces = self.faces();
        let mut reached = vec![false; faces.len()];
        let start = faces.of_dart[outer.0];
        reached[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut best: Option<Dart> = None;
        while let Some(f) = queue.pop_front() {
            for &d in &faces.walks[f].darts {
                if keep[d.edge()] {
                    if best.is_none_or(|b| d < b) {
                        best = Some(d);
                    }
                    continue;
                }
                let g = faces.of_dart[d.twin().0];
                if !reached[g] {
                    reached[g] = true;
                    queue.push_back(g);
                }
            }
        }
        best
    }
}

/// An edge-induced subgraph together with the maps back to host ids.
#[derive(Clone, Debug)]
pub struct SubgraphMap {
    pub graph: EmbeddedGraph,
    /// Host id of each subgraph vertex.
    pub vertices: Vec<VertexId>,
    /// Host id of each subgraph edge.
    pub edges: Vec<EdgeId>,
}
