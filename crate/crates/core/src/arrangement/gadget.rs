use thiserror::Error;

use crate::planar::{Dart, EmbeddedGraph, VertexId};

use super::graph::{ArrangementGraph, VertexKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("vertex {0} is not a marked point of the arrangement")]
    NotMarked(VertexId),
    #[error("vertex {vertex} has degree {degree}; every incident curve must pass through it exactly once")]
    DegreeMismatch { vertex: VertexId, degree: usize },
    #[error("the number of nested cycles must be at least 1")]
    ZeroWidth,
}

#[derive(Clone, Debug)]
pub struct Gadget {
    pub arrangement: ArrangementGraph,
    /// `cycles[i]` is the vertex sequence of cycle `i + 1`, innermost first.
    pub cycles: Vec<Vec<VertexId>>,
}

/// Surrounds marked vertex `p` with `w` nested cycles: each of the `2|p|`
/// edges at `p` is subdivided `w` times and the `i`-th subdivision vertices
/// are joined, in rotation order, into cycle `Z_i`.
pub fn add_nested_cycles(arr: &ArrangementGraph, p: VertexId, w: usize) -> Result<Gadget, GadgetError> {
    if w == 0 {
        return Err(GadgetError::ZeroWidth);
    }
    if !matches!(arr.kind.get(p), Some(VertexKind::Point(_))) {
        return Err(GadgetError::NotMarked(p));
    }
    let g = &arr.graph;
    let darts: Vec<Dart> = g.rotation(p).to_vec();
    let deg = darts.len();
    let mut per_curve = std::collections::BTreeMap::new();
    for d in &darts {
        match arr.edge_curve[d.edge()] {
            Some(c) => *per_curve.entry(c).or_insert(0usize) += 1,
            None => return Err(GadgetError::DegreeMismatch { vertex: p, degree: deg }),
        }
    }
    if deg < 2 || per_curve.values().any(|&m| m != 2) {
        return Err(GadgetError::DegreeMismatch { vertex: p, degree: deg });
    }

    let n = g.vertex_count();
    let s = |j: usize, i: usize| n + j * w + (i - 1);
    let mut edges = g.edges().to_vec();
    let mut rotations = g.rotations_as_edges();
    let mut edge_curve = arr.edge_curve.clone();
    let mut kind = arr.kind.clone();
    let mut coords = arr.coords.clone();
    rotations.resize(n + deg * w, Vec::new());
    kind.resize(n + deg * w, VertexKind::Synthetic);
    coords.resize(n + deg * w, None);

    let mut add_edge = |edges: &mut Vec<[VertexId; 2]>, ends: [VertexId; 2], curve: Option<usize>| {
        edges.push(ends);
        edge_curve.push(curve);
        edges.len() - 1
    };
    // spokes[j][i] joins s(j, i) to s(j, i + 1); spokes[j][w] is the last leg
    let mut spokes: Vec<Vec<usize>> = Vec::with_capacity(deg);
    let mut outer_remap: Option<(usize, bool)> = None;
    for (j, &d) in darts.iter().enumerate() {
        let e = d.edge();
        let u = g.head(d);
        let curve = arr.edge_curve[e];
        edges[e] = [p, s(j, 1)];
        let mut legs = vec![e];
        for i in 1..w {
            legs.push(add_edge(&mut edges, [s(j, i), s(j, i + 1)], curve));
        }
        let last = add_edge(&mut edges, [s(j, w), u], curve);
        legs.push(last);
        let pos = rotations[u].iter().position(|&x| x == e).expect("edge at its head");
        rotations[u][pos] = last;
        if let Some(od) = g.outer_dart() {
            if od.edge() == e {
                outer_remap = Some((last, g.origin(od) == p));
            }
        }
        spokes.push(legs);
    }
    let mut ring: Vec<Vec<usize>> = vec![Vec::with_capacity(deg); w + 1];
    for i in 1..=w {
        for j in 0..deg {
            let e = add_edge(&mut edges, [s(j, i), s((j + 1) % deg, i)], None);
            ring[i].push(e);
        }
    }
    for j in 0..deg {
        for i in 1..=w {
            let v = s(j, i);
            kind[v] = VertexKind::Gadget { center: p, level: i };
            rotations[v] = vec![spokes[j][i], ring[i][j], spokes[j][i - 1], ring[i][(j + deg - 1) % deg]];
        }
    }

    let total = n + deg * w;
    let mut graph = EmbeddedGraph::build(total, edges, rotations).expect("gadget surgery keeps the embedding valid");
    match outer_remap {
        // outward dart s(j, w) -> u, or inward u -> s(j, w)
        Some((e, from_p)) => graph.set_outer_dart(if from_p { Dart(2 * e) } else { Dart(2 * e + 1) }),
        None => {
            if let Some(od) = g.outer_dart() {
                graph.set_outer_dart(od);
            }
        }
    }
    let cycles = (1..=w).map(|i| (0..deg).map(|j| s(j, i)).collect()).collect();
    Ok(Gadget {
        arrangement: ArrangementGraph { graph, kind, coords, edge_curve, crossings: arr.crossings },
        cycles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_arrangement_graph, int, Curve, Point};

    fn star(lines: i64) -> ArrangementGraph {
        let curves: Vec<Curve> = (0..lines).map(|a| Curve::line(int(a), int(0))).collect();
        build_arrangement_graph(&[Point::from_ints(0, 0)], &curves, 1).unwrap()
    }

    #[test]
    fn one_curve_gives_a_digon() {
        let a = star(1);
        let gd = add_nested_cycles(&a, 0, 1).unwrap();
        assert_eq!(gd.arrangement.graph.vertex_count(), a.graph.vertex_count() + 2);
        assert_eq!(gd.cycles, vec![vec![3, 4]]);
        assert!(gd.arrangement.graph.euler_holds());
        let f = gd.arrangement.graph.faces();
        // the two ring edges and p bound one triangle on each side of the curve
        assert_eq!(f.walks.iter().filter(|w| w.size() == 3).count(), 2);
    }

    #[test]
    fn two_curves_three_levels() {
        let a = star(2);
        let gd = add_nested_cycles(&a, 0, 3).unwrap();
        let g = &gd.arrangement.graph;
        assert_eq!(g.vertex_count(), a.graph.vertex_count() + 12);
        assert!(g.euler_holds());
        assert!(g.check_invariants().is_ok());
        let f = g.faces();
        // 4 triangles at p, 4 quadrilaterals between each consecutive pair
        assert_eq!(f.walks.iter().filter(|w| w.size() == 3).count(), 4);
        assert_eq!(f.walks.iter().filter(|w| w.size() == 4).count(), 8);
    }

    #[test]
    fn rejects_crossings_and_bad_width() {
        let curves = [Curve::line(int(1), int(0)), Curve::line(int(-1), int(0))];
        let a = build_arrangement_graph(&[], &curves, 1).unwrap();
        assert_eq!(add_nested_cycles(&a, 0, 1).unwrap_err(), GadgetError::NotMarked(0));
        assert_eq!(add_nested_cycles(&star(2), 0, 0).unwrap_err(), GadgetError::ZeroWidth);
    }
}
