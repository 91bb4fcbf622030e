use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::planar::{EmbeddedGraph, VertexId};

use super::geometry::{cmp_direction, int, Curve, Point, Rational, Side};
use super::{validate_k_intersecting, ArrangementError};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    /// A marked point, by its index in the input list.
    Point(usize),
    Crossing,
    /// Clipped curve end; excluded from all counts.
    Synthetic,
    /// Subdivision vertex of a nested-cycles gadget around `center`.
    Gadget { center: VertexId, level: usize },
}

/// Embedded graph of an arrangement together with its geometric tags.
#[derive(Clone, Debug)]
pub struct ArrangementGraph {
    pub graph: EmbeddedGraph,
    pub kind: Vec<VertexKind>,
    pub coords: Vec<Option<Point>>,
    /// Curve carrying each edge; `None` for gadget cycle edges.
    pub edge_curve: Vec<Option<usize>>,
    /// Number of pairwise crossings, marked or not.
    pub crossings: usize,
}

impl ArrangementGraph {
    pub fn is_synthetic(&self, v: VertexId) -> bool {
        self.kind[v] == VertexKind::Synthetic
    }

    pub fn real_vertex_count(&self) -> usize {
        (0..self.kind.len()).filter(|&v| !self.is_synthetic(v)).count()
    }

    /// Edges with no synthetic endpoint.
    pub fn real_edge_count(&self) -> usize {
        self.graph.edges().iter().filter(|[u, v]| !self.is_synthetic(*u) && !self.is_synthetic(*v)).count()
    }

    pub fn crossing_vertex_count(&self) -> usize {
        self.kind.iter().filter(|k| **k == VertexKind::Crossing).count()
    }

    /// Vertex of marked point `i`.
    pub fn point_vertex(&self, i: usize) -> Option<VertexId> {
        self.kind.iter().position(|k| *k == VertexKind::Point(i))
    }
}

/// Builds the arrangement graph of marked points `points` and `curves`.
/// Vertices are the marked points (in input order), then unmarked crossing
/// points in lexicographic order, then synthetic curve ends. Unbounded
/// lines are clipped one unit outside the bounding box of everything else.
pub fn build_arrangement_graph(
    points: &[Point],
    curves: &[Curve],
    k: usize,
) -> Result<ArrangementGraph, ArrangementError> {
    let crossings = validate_k_intersecting(curves, k)?;

    let mut marked: BTreeMap<&Point, usize> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        if marked.insert(p, i).is_some() {
            return Err(ArrangementError::DuplicatePoint(i));
        }
    }

    let mut kind = Vec::new();
    let mut coords = Vec::new();
    let mut stations: Vec<Vec<(Rational, VertexId)>> = vec![Vec::new(); curves.len()];
    for (i, p) in points.iter().enumerate() {
        kind.push(VertexKind::Point(i));
        coords.push(Some(p.clone()));
        let mut on_any = false;
        for (c, curve) in curves.iter().enumerate() {
            if curve.contains(p) {
                stations[c].push((p.x.clone(), i));
                on_any = true;
            }
        }
        if !on_any {
            return Err(ArrangementError::IsolatedPoint(i));
        }
    }

    let mut unmarked: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for c in &crossings {
        if marked.contains_key(&c.point) {
            continue;
        }
        let entry = unmarked.entry(c.point.clone()).or_default();
        for id in [c.curves.0, c.curves.1] {
            if !entry.contains(&id) {
                entry.push(id);
            }
        }
    }
    for (p, mut ids) in unmarked {
        if ids.len() > 2 {
            ids.sort_unstable();
            return Err(ArrangementError::TripleCrossing { point: p, curves: ids });
        }
        let v = kind.len();
        kind.push(VertexKind::Crossing);
        for &c in &ids {
            stations[c].push((p.x.clone(), v));
        }
        coords.push(Some(p));
    }

    // clipping box in x
    let xs = coords
        .iter()
        .flatten()
        .map(|p| &p.x)
        .chain(curves.iter().flat_map(|c| match c {
            Curve::Line { .. } => Vec::new(),
            Curve::Polyline { polyline } => polyline.iter().map(|p| &p.x).collect(),
        }));
    let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
    for x in xs {
        if lo.as_ref().is_none_or(|l| x < l) {
            lo = Some(x.clone());
        }
        if hi.as_ref().is_none_or(|h| x > h) {
            hi = Some(x.clone());
        }
    }
    let box_lo = lo.unwrap_or_else(Rational::zero) - Rational::one();
    let box_hi = hi.unwrap_or_else(Rational::zero) + Rational::one();

    struct Arc {
        ends: [VertexId; 2],
        curve: usize,
        x: [Rational; 2],
    }
    let mut arcs: Vec<Arc> = Vec::new();
    for (c, curve) in curves.iter().enumerate() {
        let st = &mut stations[c];
        if st.is_empty() {
            continue;
        }
        st.sort();
        st.dedup_by(|a, b| a.1 == b.1);
        let (dlo, dhi) = curve.domain();
        let left = dlo.cloned().unwrap_or_else(|| box_lo.clone());
        let right = dhi.cloned().unwrap_or_else(|| box_hi.clone());
        let mut chain: Vec<(Rational, VertexId)> = Vec::with_capacity(st.len() + 2);
        if st[0].0 > left {
            chain.push((left.clone(), kind.len()));
            coords.push(Some(Point::new(left.clone(), curve.eval(&left))));
            kind.push(VertexKind::Synthetic);
        }
        chain.extend(st.iter().cloned());
        if st[st.len() - 1].0 < right {
            chain.push((right.clone(), kind.len()));
            coords.push(Some(Point::new(right.clone(), curve.eval(&right))));
            kind.push(VertexKind::Synthetic);
        }
        for w in chain.windows(2) {
            arcs.push(Arc { ends: [w[0].1, w[1].1], curve: c, x: [w[0].0.clone(), w[1].0.clone()] });
        }
    }

    // rotations by exact outgoing direction
    let n = kind.len();
    let mut incident: Vec<Vec<((Rational, Rational), usize)>> = vec![Vec::new(); n];
    for (e, arc) in arcs.iter().enumerate() {
        let curve = &curves[arc.curve];
        let right = curve.slope(&arc.x[0], Side::Right);
        let left = curve.slope(&arc.x[1], Side::Left);
        incident[arc.ends[0]].push(((int(1), right), e));
        incident[arc.ends[1]].push(((int(-1), -left), e));
    }
    let rotations: Vec<Vec<usize>> = incident
        .into_iter()
        .map(|mut inc| {
            inc.sort_by(|a, b| cmp_direction(&a.0, &b.0).then(a.1.cmp(&b.1)));
            inc.into_iter().map(|(_, e)| e).collect()
        })
        .collect();
    let edges: Vec<[VertexId; 2]> = arcs.iter().map(|a| a.ends).collect();
    let mut graph = EmbeddedGraph::build(n, edges, rotations).expect("arrangement arcs form a valid embedding");

    // the outer face has the largest signed area
    let faces = graph.faces();
    let chain_of = |d: crate::planar::Dart| -> Vec<Point> {
        let arc = &arcs[d.edge()];
        let curve = &curves[arc.curve];
        let mut pts = vec![coords[arc.ends[0]].clone().unwrap()];
        pts.extend(curve.bends_between(&arc.x[0], &arc.x[1]));
        pts.push(coords[arc.ends[1]].clone().unwrap());
        if d.0 % 2 == 1 {
            pts.reverse();
        }
        pts
    };
    let area = |darts: &[crate::planar::Dart]| -> Rational {
        let mut s = Rational::zero();
        for &d in darts {
            for w in chain_of(d).windows(2) {
                s += &w[0].x * &w[1].y - &w[1].x * &w[0].y;
            }
        }
        s
    };
    let mut best: Option<(Rational, usize)> = None;
    for (i, w) in faces.walks.iter().enumerate() {
        let a = area(&w.darts);
        if best.as_ref().is_none_or(|(b, _)| a > *b) {
            best = Some((a, i));
        }
    }
    if let Some((_, f)) = best {
        graph.set_outer_face(f).expect("face exists");
    }

    Ok(ArrangementGraph {
        graph,
        kind,
        coords,
        edge_curve: arcs.iter().map(|a| Some(a.curve)).collect(),
        crossings: crossings.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::geometry::int;

    #[test]
    fn two_lines_make_one_crossing_and_four_ends() {
        let lines = [Curve::line(int(1), int(0)), Curve::line(int(-1), int(0))];
        let a = build_arrangement_graph(&[], &lines, 1).unwrap();
        assert_eq!(a.real_vertex_count(), 1);
        assert_eq!(a.crossing_vertex_count(), 1);
        assert_eq!(a.graph.vertex_count(), 5);
        assert_eq!(a.graph.degree(0), 4);
        assert_eq!(a.real_edge_count(), 0);
        assert!(a.graph.euler_holds());
    }

    #[test]
    fn three_lines_make_a_triangle() {
        let lines = [Curve::line(int(0), int(0)), Curve::line(int(1), int(0)), Curve::line(int(-1), int(2))];
        let a = build_arrangement_graph(&[], &lines, 1).unwrap();
        assert_eq!(a.crossings, 3);
        assert_eq!(a.crossing_vertex_count(), 3);
        assert_eq!(a.real_edge_count(), 3);
        let f = a.graph.faces();
        let outer = a.graph.outer_face(&f).unwrap();
        assert_eq!(f.walks.iter().enumerate().filter(|(i, w)| *i != outer && w.size() == 3).count(), 1);
    }

    #[test]
    fn marked_points_and_errors() {
        let lines = [Curve::line(int(0), int(0)), Curve::line(int(1), int(0)), Curve::line(int(2), int(0))];
        // all three lines pass through the origin
        assert!(matches!(build_arrangement_graph(&[], &lines, 1), Err(ArrangementError::TripleCrossing { .. })));
        let a = build_arrangement_graph(&[Point::from_ints(0, 0)], &lines, 1).unwrap();
        assert_eq!(a.graph.degree(0), 6);
        assert_eq!(a.crossings, 3);
        assert_eq!(a.crossing_vertex_count(), 0);
        assert!(matches!(
            build_arrangement_graph(&[Point::from_ints(5, -1)], &lines, 1),
            Err(ArrangementError::IsolatedPoint(0))
        ));
    }
}
