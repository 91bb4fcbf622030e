use crate::planar::{
    classify_sides, triangulate_faces, Dart, EdgeId, EdgeSide, EmbeddedGraph, Region, Triangulation,
    VertexId,
};
use crate::separator::{balanced_cycles, SeparatorConfig, WeightAssignment};

use super::{
    CycleRecord, Division, DivisionConfig, DivisionError, Limits, Parameter, RecursionNode, RecursionTree, Threshold,
};

/// Below this many vertices sibling subtrees are built on the current thread.
const PARALLEL_CUTOFF: usize = 4096;

/// Refined r-division of a connected embedded graph with prescribed vertex
/// set `p`. The balanced parameter cycles through vertices, boundary
/// vertices and interior prescribed vertices with the depth; `t = Infinite`
/// disables the third.
pub fn refined_r_division(
    g: &EmbeddedGraph,
    p: &[VertexId],
    r: u64,
    t: Threshold,
    cfg: &DivisionConfig,
) -> Result<Division, DivisionError> {
    let schedule = [Parameter::Vertices, Parameter::Boundary, Parameter::Points];
    divide(g, p, r, t, cfg, &schedule)
}

/// Classic r-division: vertices and boundary vertices alternate, no
/// prescribed set.
pub fn classic_r_division(g: &EmbeddedGraph, r: u64, cfg: &DivisionConfig) -> Result<Division, DivisionError> {
    let schedule = [Parameter::Vertices, Parameter::Boundary];
    divide(g, &[], r, Threshold::Infinite, cfg, &schedule)
}

fn divide(
    g: &EmbeddedGraph,
    p: &[VertexId],
    r: u64,
    t: Threshold,
    cfg: &DivisionConfig,
    schedule: &[Parameter],
) -> Result<Division, DivisionError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(DivisionError::Empty);
    }
    if r < cfg.r_min {
        return Err(DivisionError::RBelowMinimum { r, r_min: cfg.r_min });
    }
    if !g.is_connected() {
        return Err(DivisionError::Disconnected);
    }
    let mut in_p = vec![false; n];
    for &v in p {
        *in_p.get_mut(v).ok_or(DivisionError::PointOutOfRange(v))? = true;
    }
    let ctx = Ctx {
        in_p,
        limits: Limits::new(cfg.c0, r, t),
        cfg,
        schedule,
    };
    let root = Frame {
        graph: g.clone(),
        host_vertex: (0..n).collect(),
        host_edge: (0..g.edge_count()).collect(),
        boundary: vec![false; n],
        depth: 0,
    };
    let tree = ctx.grow(root)?;
    let mut nodes = Vec::new();
    flatten(tree, None, &mut nodes);
    Ok(Division::from_tree(g, RecursionTree { nodes }))
}

struct Ctx<'a> {
    in_p: Vec<bool>,
    limits: Limits,
    cfg: &'a DivisionConfig,
    schedule: &'a [Parameter],
}

/// A region in its own compact embedding, with maps back to the host.
struct Frame {
    graph: EmbeddedGraph,
    host_vertex: Vec<VertexId>,
    host_edge: Vec<EdgeId>,
    /// Local vertices already on an ancestor cycle.
    boundary: Vec<bool>,
    depth: usize,
}

impl Frame {
    fn region(&self) -> Region {
        let mut edges = self.host_edge.clone();
        edges.sort_unstable();
        let mut vertices = self.host_vertex.clone();
        vertices.sort_unstable();
        Region { edges, vertices }
    }
}

struct Subtree {
    node: RecursionNode,
    children: Option<Box<(Subtree, Subtree)>>,
}

struct Split {
    cycle: CycleRecord,
    children: [Frame; 2],
}

impl Ctx<'_> {
    fn grow(&self, frame: Frame) -> Result<Subtree, DivisionError> {
        let n = frame.graph.vertex_count();
        let b = frame.boundary.iter().filter(|&&x| x).count();
        let p = (0..n).filter(|&v| !frame.boundary[v] && self.in_p[frame.host_vertex[v]]).count();
        let mut node = RecursionNode {
            id: 0,
            parent: None,
            depth: frame.depth,
            region: frame.region(),
            n,
            b,
            p,
            children: None,
            separator: None,
            balanced: None,
            forced_leaf: false,
        };
        let exceeded = self.limits.exceeded(n, b, p);
        let over = |q: Parameter| match q {
            Parameter::Vertices => exceeded[0],
            Parameter::Boundary => exceeded[1],
            Parameter::Points => exceeded[2],
        };
        let designated = self.schedule[frame.depth % self.schedule.len()];
        let mut order: Vec<Parameter> = Vec::with_capacity(3);
        if over(designated) {
            order.push(designated);
        }
        for q in [Parameter::Vertices, Parameter::Boundary, Parameter::Points] {
            if over(q) && q != designated && self.schedule.contains(&q) {
                order.push(q);
            }
        }
        if order.is_empty() {
            return Ok(Subtree { node, children: None });
        }

        let tri = triangulate_faces(&frame.graph).ok();
        let split = tri.and_then(|tri| order.iter().find_map(|&q| self.try_split(&frame, &tri, q).map(|s| (q, s))));
        let Some((param, split)) = split else {
            if n <= self.cfg.leaf_floor {
                node.forced_leaf = true;
                return Ok(Subtree { node, children: None });
            }
            return Err(DivisionError::ProgressFailure { n, depth: frame.depth });
        };
        drop(frame);
        node.balanced = Some(param);
        node.separator = Some(split.cycle);
        let [inside, outside] = split.children;
        let (a, b) = if self.cfg.parallel && n >= PARALLEL_CUTOFF {
            rayon::join(|| self.grow(inside), || self.grow(outside))
        } else {
            (self.grow(inside), self.grow(outside))
        };
        Ok(Subtree { node, children: Some(Box::new((a?, b?))) })
    }

    fn weights(&self, frame: &Frame, q: Parameter) -> WeightAssignment {
        let n = frame.graph.vertex_count();
        match q {
            Parameter::Vertices => WeightAssignment::unit(n),
            Parameter::Boundary => WeightAssignment::indicator(n, (0..n).filter(|&v| frame.boundary[v])),
            Parameter::Points => WeightAssignment::indicator(
                n,
                (0..n).filter(|&v| !frame.boundary[v] && self.in_p[frame.host_vertex[v]]),
            ),
        }
    }

    /// Tries balanced cycles in preference order and returns the first that
    /// splits the region into two strictly smaller connected regions
    /// meeting exactly in the recorded cycle's vertices.
    fn try_split(&self, frame: &Frame, tri: &Triangulation, q: Parameter) -> Option<Split> {
        let w = self.weights(frame, q);
        let sep_cfg = SeparatorConfig {
            balance: self.cfg.balance,
            extra_roots: self.cfg.extra_roots,
            seed: self.cfg.seed ^ (frame.depth as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
        };
        let candidates = balanced_cycles(&tri.graph, &w, &sep_cfg, self.cfg.candidate_limit).ok()?;
        let tg = &tri.graph;
        let faces = tg.faces();
        let total = w.total();
        let m = frame.graph.edge_count();
        let nv = frame.graph.vertex_count();
        for sep in candidates {
            let darts = &sep.cycle.darts;
            let k = darts.len();
            let Ok(cls) = classify_sides(tg, &sep.cycle) else { continue };
            let pinched: Vec<bool> = (0..k).map(|i| is_pinch(tri, darts[(i + k - 1) % k].twin(), darts[i])).collect();
            let kept = pinched.iter().filter(|&&x| !x).count();
            if kept < 2 || (kept == 2 && k == 2) {
                continue;
            }
            let (mut inside, mut outside) = (0u128, 0u128);
            let mut add = |side_inside: bool, v: VertexId| {
                if side_inside {
                    inside += w.numerator(v) as u128;
                } else {
                    outside += w.numerator(v) as u128;
                }
            };
            for v in 0..nv {
                if let Some(s) = cls.vertex_strictly_inside(tg, &faces.of_dart, v) {
                    add(s, v);
                }
            }
            // a pinched apex keeps all of its graph edges on one side
            let mut on_cycle = cls.on_cycle.clone();
            for i in (0..k).filter(|&i| pinched[i]) {
                let v = tg.origin(darts[i]);
                let e = frame.graph.rotation(v).first()?.edge();
                add(cls.edge_side[e] == EdgeSide::Inside, v);
                on_cycle[v] = false;
            }
            if !self.cfg.balance.admits(inside, total) || !self.cfg.balance.admits(outside, total) {
                continue;
            }
            let side_edges = |want: EdgeSide| -> Vec<EdgeId> {
                (0..m).filter(|&e| cls.edge_side[e] == want || cls.edge_side[e] == EdgeSide::On).collect()
            };
            let (ein, eout) = (side_edges(EdgeSide::Inside), side_edges(EdgeSide::Outside));
            if ein.is_empty() || eout.is_empty() || ein.len() >= m || eout.len() >= m {
                continue;
            }
            let touched = |edges: &[EdgeId]| {
                let mut seen = vec![false; nv];
                for &e in edges {
                    for v in frame.graph.endpoints(e) {
                        seen[v] = true;
                    }
                }
                seen
            };
            let (tin, tout) = (touched(&ein), touched(&eout));
            if (0..nv).any(|v| (tin[v] && tout[v]) != on_cycle[v]) {
                continue;
            }
            let children = [self.child(frame, &ein, &on_cycle), self.child(frame, &eout, &on_cycle)];
            if children.iter().any(|c| !c.graph.is_connected()) {
                continue;
            }
            return Some(Split { cycle: record(frame, tri, darts, &pinched), children });
        }
        None
    }

    fn child(&self, frame: &Frame, local_edges: &[EdgeId], on_cycle: &[bool]) -> Frame {
        let sub = frame.graph.edge_subgraph(local_edges);
        Frame {
            host_vertex: sub.vertices.iter().map(|&v| frame.host_vertex[v]).collect(),
            host_edge: sub.edges.iter().map(|&e| frame.host_edge[e]).collect(),
            boundary: sub.vertices.iter().map(|&v| frame.boundary[v] || on_cycle[v]).collect(),
            graph: sub.graph,
            depth: frame.depth + 1,
        }
    }
}

/// The cycle passage `u -> v -> x`, with `a = v->u` and `b = v->x`, is
/// pinched when both are diagonals and one of the two angles between them
/// at `v` holds nothing but diagonals: `v` is then a fan apex whose graph
/// edges all lie on one side, and the passage is replaced by the chord
/// `u x` of the same face.
fn is_pinch(tri: &Triangulation, a: Dart, b: Dart) -> bool {
    if !tri.is_diagonal(a.edge()) || !tri.is_diagonal(b.edge()) {
        return false;
    }
    let g = &tri.graph;
    let only_diagonals = |from: Dart, to: Dart| {
        let mut d = g.rot_next(from);
        while d != to {
            if !tri.is_diagonal(d.edge()) {
                return false;
            }
            d = g.rot_next(d);
        }
        true
    };
    only_diagonals(b, a) || only_diagonals(a, b)
}

/// Host-id record of a cycle with pinched vertices shortcut.
fn record(frame: &Frame, tri: &Triangulation, darts: &[Dart], pinched: &[bool]) -> CycleRecord {
    let g = &tri.graph;
    let k = darts.len();
    let host = |v: VertexId| frame.host_vertex[v];
    let mut vertices = Vec::with_capacity(k);
    let mut diagonals = Vec::new();
    for i in (0..k).filter(|&i| !pinched[i]) {
        let v = g.origin(darts[i]);
        vertices.push(host(v));
        let next = (i + 1) % k;
        if pinched[next] {
            let x = g.head(darts[next]);
            diagonals.push([host(v), host(x)]);
        } else if tri.is_diagonal(darts[i].edge()) {
            diagonals.push([host(v), host(g.head(darts[i]))]);
        }
    }
    let shortcuts = pinched.iter().filter(|&&p| p).count();
    CycleRecord { vertices, diagonals, shortcuts }
}

fn flatten(sub: Subtree, parent: Option<usize>, nodes: &mut Vec<RecursionNode>) -> usize {
    let id = nodes.len();
    let mut node = sub.node;
    node.id = id;
    node.parent = parent;
    nodes.push(node);
    if let Some(children) = sub.children {
        let (a, b) = *children;
        let ia = flatten(a, Some(id), nodes);
        let ib = flatten(b, Some(id), nodes);
        nodes[id].children = Some([ia, ib]);
    }
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::gen;

    #[test]
    fn small_grid_is_one_region() {
        let g = gen::triangulated_grid(5, 5);
        let d = refined_r_division(&g, &[], 1000, Threshold::Finite(1000), &DivisionConfig::default()).unwrap();
        assert_eq!(d.regions.len(), 1);
        assert_eq!(d.regions[0].edges.len(), g.edge_count());
        assert!(d.boundary.is_empty());
        assert!(d.separators.is_empty());
    }

    #[test]
    fn rejects_small_r() {
        let g = gen::triangulated_grid(5, 5);
        let e = refined_r_division(&g, &[], 4, Threshold::Infinite, &DivisionConfig::default()).unwrap_err();
        assert_eq!(e, DivisionError::RBelowMinimum { r: 4, r_min: 16 });
    }

    #[test]
    fn children_meet_in_cycle_vertices() {
        let g = gen::triangulated_grid(20, 20);
        let d = classic_r_division(&g, 16, &DivisionConfig::default()).unwrap();
        for node in d.tree.internal() {
            let [a, b] = node.children.unwrap();
            let (ra, rb) = (&d.tree.nodes[a].region, &d.tree.nodes[b].region);
            let common: Vec<_> = ra.vertices.iter().filter(|v| rb.vertices.binary_search(v).is_ok()).copied().collect();
            let mut cyc = node.separator.as_ref().unwrap().vertices.clone();
            cyc.sort_unstable();
            assert_eq!(common, cyc);
        }
    }

    #[test]
    fn square_grid_split_identity() {
        // untriangulated grid: every separator runs through fan diagonals
        let g = gen::grid(24, 24);
        let d = classic_r_division(&g, 16, &DivisionConfig::default()).unwrap();
        assert!(d.regions.len() > 1);
        for node in d.tree.internal() {
            let [a, b] = node.children.unwrap();
            let n_sum = d.tree.nodes[a].n + d.tree.nodes[b].n;
            assert_eq!(n_sum, node.n + node.separator.as_ref().unwrap().len());
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let g = gen::triangulated_grid(70, 70);
        let par = DivisionConfig::default();
        let seq = DivisionConfig { parallel: false, ..par.clone() };
        let a = refined_r_division(&g, &[], 64, Threshold::Infinite, &par).unwrap();
        let b = refined_r_division(&g, &[], 64, Threshold::Infinite, &seq).unwrap();
        assert_eq!(a, b);
    }
}
