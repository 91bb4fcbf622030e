//! Embedded planar multigraphs: rotation systems, faces, fan
//! triangulation, and cycle-side subgraphs.

pub mod gen;
mod graph;
mod json;
mod side;
mod triangulate;

pub use graph::{Dart, EdgeId, EmbeddedGraph, FaceId, FaceWalk, Faces, GraphError, SubgraphMap, VertexId};
pub use json::{GraphDocument, GraphJsonError};
pub use side::{
    classify_sides, subgraph_on_side, EdgeSide, Region, Side, SideClassification, SideError, SimpleCycle,
};
pub use triangulate::{is_triangulated, triangulate_faces, TriangulateError, Triangulation};
