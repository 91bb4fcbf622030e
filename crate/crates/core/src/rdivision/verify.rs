use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::planar::{EmbeddedGraph, VertexId};

use super::{compute_overcount, Division, DivisionConfig, Limits, Threshold};

/// A failed assertion together with its witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerifyFailure {
    EdgeCoverage { edge: usize },
    RegionInvalid { region: usize, detail: String },
    RegionDisconnected { region: usize, components: usize },
    BoundaryMismatch { vertex: VertexId, regions: usize, on_cycle: bool },
    BoundaryListMismatch { vertex: VertexId },
    RegionVertices { region: usize, count: usize, limit: f64 },
    RegionBoundary { region: usize, count: usize, limit: f64 },
    RegionPoints { region: usize, count: usize, limit: f64 },
    CycleInvalid { node: usize, detail: String },
    CycleProperties { node: usize, vertices: usize, boundary: usize, points: usize },
    LeafRule { node: usize },
    InternalRule { node: usize },
    SplitIdentity { node: usize, detail: String },
    TreeShape { node: usize, detail: String },
    RegionCount { count: usize, limit: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionStats {
    pub vertices: usize,
    pub boundary: usize,
    pub interior_points: usize,
}

/// Counts on the inside child of one separator and which of the three
/// lower bounds it meets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleFlags {
    pub node: usize,
    pub length: usize,
    pub vertices: usize,
    pub boundary: usize,
    pub points: usize,
    pub properties: [bool; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedConstants {
    /// `|R| / (N/r + |P|/t)`.
    pub region_count: f64,
    pub max_vertices_over_r: f64,
    pub max_boundary_over_sqrt_r: f64,
    /// Absent when `t` is infinite.
    pub max_points_over_t: Option<f64>,
    /// `L(root, leaves) sqrt(r) / N`; absent without separators.
    pub overcount: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisionReport {
    pub vertices: usize,
    pub edges: usize,
    pub points: usize,
    pub r: u64,
    pub t: Threshold,
    pub c0: f64,
    pub region_count: usize,
    pub boundary_count: usize,
    pub separator_count: usize,
    pub regions: Vec<RegionStats>,
    pub cycles: Vec<CycleFlags>,
    pub overcount: i64,
    pub fitted: FittedConstants,
    pub flagged: bool,
    pub failures: Vec<VerifyFailure>,
}

impl DivisionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks a division against its graph from scratch: edge coverage, region
/// connectivity, the boundary characterization, region bounds, separator
/// lower bounds, the leaf rule, split identities, and the region count.
pub fn verify_division(
    g: &EmbeddedGraph,
    p: &[VertexId],
    division: &Division,
    r: u64,
    t: Threshold,
    cfg: &DivisionConfig,
) -> DivisionReport {
    let n = g.vertex_count();
    let mut failures = Vec::new();
    let mut in_p = vec![false; n];
    for &v in p.iter().filter(|&&v| v < n) {
        in_p[v] = true;
    }
    let p_count = in_p.iter().filter(|&&x| x).count();

    // coverage and region sanity
    let mut covered = vec![false; g.edge_count()];
    let mut region_ok = vec![true; division.regions.len()];
    let mut membership = vec![0usize; n];
    for (i, region) in division.regions.iter().enumerate() {
        if let Some(&e) = region.edges.iter().find(|&&e| e >= g.edge_count()) {
            failures.push(VerifyFailure::RegionInvalid { region: i, detail: format!("edge {e} out of range") });
            region_ok[i] = false;
            continue;
        }
        let mut expect: Vec<VertexId> = region.edges.iter().flat_map(|&e| g.endpoints(e)).collect();
        expect.sort_unstable();
        expect.dedup();
        let lone_vertex = region.edges.is_empty() && region.vertices.len() == 1 && region.vertices[0] < n;
        if expect != region.vertices && !lone_vertex {
            failures.push(VerifyFailure::RegionInvalid {
                region: i,
                detail: "vertex set is not the edge-induced vertex set".into(),
            });
            region_ok[i] = false;
            continue;
        }
        for &e in &region.edges {
            covered[e] = true;
        }
        for &v in &region.vertices {
            membership[v] += 1;
        }
        if !lone_vertex {
            let components = region.component_count(g);
            if components != 1 {
                failures.push(VerifyFailure::RegionDisconnected { region: i, components });
            }
        }
    }
    for (e, _) in covered.iter().enumerate().filter(|(_, &c)| !c) {
        failures.push(VerifyFailure::EdgeCoverage { edge: e });
    }

    // boundary characterization against the union of separator vertices
    let tree = &division.tree;
    let mut on_cycle = vec![false; n];
    for node in tree.internal() {
        if let Some(c) = &node.separator {
            for &v in c.vertices.iter().filter(|&&v| v < n) {
                on_cycle[v] = true;
            }
        }
    }
    let is_boundary: Vec<bool> = membership.iter().map(|&m| m >= 2).collect();
    for v in 0..n {
        if is_boundary[v] != on_cycle[v] {
            failures.push(VerifyFailure::BoundaryMismatch { vertex: v, regions: membership[v], on_cycle: on_cycle[v] });
        }
    }
    let listed: HashSet<VertexId> = division.boundary.iter().copied().collect();
    for v in 0..n {
        if listed.contains(&v) != is_boundary[v] {
            failures.push(VerifyFailure::BoundaryListMismatch { vertex: v });
        }
    }

    // per-region bounds
    let limits = Limits::new(cfg.c0, r, t);
    let regions: Vec<RegionStats> = division
        .regions
        .iter()
        .map(|region| RegionStats {
            vertices: region.vertices.len(),
            boundary: region.vertices.iter().filter(|&&v| v < n && is_boundary[v]).count(),
            interior_points: region.vertices.iter().filter(|&&v| v < n && !is_boundary[v] && in_p[v]).count(),
        })
        .collect();
    for (i, s) in regions.iter().enumerate().filter(|(i, _)| region_ok[*i]) {
        if s.vertices as f64 > limits.n {
            failures.push(VerifyFailure::RegionVertices { region: i, count: s.vertices, limit: limits.n });
        }
        if s.boundary as f64 > limits.b {
            failures.push(VerifyFailure::RegionBoundary { region: i, count: s.boundary, limit: limits.b });
        }
        if s.interior_points as f64 > limits.p {
            failures.push(VerifyFailure::RegionPoints { region: i, count: s.interior_points, limit: limits.p });
        }
    }

    let cycles = check_tree(g, division, &in_p, &is_boundary, r, t, &limits, &mut failures);

    let sqrt_r = (r as f64).sqrt();
    let scale = n as f64 / r as f64 + if t == Threshold::Infinite { 0.0 } else { p_count as f64 / t.as_f64() };
    // a division has at least one region however large r and t are
    let region_limit = (cfg.region_ceiling * scale).max(1.0);
    if division.regions.len() as f64 > region_limit {
        failures.push(VerifyFailure::RegionCount { count: division.regions.len(), limit: region_limit });
    }

    let overcount = if tree.nodes.is_empty() { 0 } else { compute_overcount(tree, 0, &division.leaf_nodes).unwrap_or(0) };
    let max_of = |f: &dyn Fn(&RegionStats) -> f64| regions.iter().map(f).fold(0.0, f64::max);
    let fitted = FittedConstants {
        region_count: division.regions.len() as f64 / scale,
        max_vertices_over_r: max_of(&|s| s.vertices as f64 / r as f64),
        max_boundary_over_sqrt_r: max_of(&|s| s.boundary as f64 / sqrt_r),
        max_points_over_t: match t {
            Threshold::Finite(t) => Some(max_of(&|s| s.interior_points as f64 / t as f64)),
            Threshold::Infinite => None,
        },
        overcount: (!division.separators.is_empty()).then(|| overcount as f64 * sqrt_r / n as f64),
    };

    DivisionReport {
        vertices: n,
        edges: g.edge_count(),
        points: p_count,
        r,
        t,
        c0: cfg.c0,
        region_count: division.regions.len(),
        boundary_count: is_boundary.iter().filter(|&&x| x).count(),
        separator_count: division.separators.len(),
        regions,
        cycles,
        overcount,
        fitted,
        flagged: division.flagged,
        failures,
    }
}

#[allow(clippy::too_many_arguments)]
fn check_tree(
    g: &EmbeddedGraph,
    division: &Division,
    in_p: &[bool],
    is_boundary: &[bool],
    r: u64,
    t: Threshold,
    limits: &Limits,
    failures: &mut Vec<VerifyFailure>,
) -> Vec<CycleFlags> {
    let n = g.vertex_count();
    let tree = &division.tree;
    let mut cycles = Vec::new();
    if tree.nodes.is_empty() {
        failures.push(VerifyFailure::TreeShape { node: 0, detail: "empty recursion tree".into() });
        return cycles;
    }
    for (i, node) in tree.nodes.iter().enumerate() {
        if node.id != i || node.region.vertices.iter().any(|&v| v >= n) {
            failures.push(VerifyFailure::TreeShape { node: i, detail: "bad id or vertex out of range".into() });
            return cycles;
        }
        if let Some(kids) = node.children {
            if kids.iter().any(|&c| c >= tree.nodes.len() || tree.nodes[c].parent != Some(i)) {
                failures.push(VerifyFailure::TreeShape { node: i, detail: "child does not point back".into() });
                return cycles;
            }
        }
    }

    // b(x) from the ancestors' cycles, maintained along a depth-first walk
    let mut ancestor_marks = vec![0u32; n];
    let mut stack: Vec<(usize, bool)> = vec![(0, true)];
    let mut b_of = vec![0usize; tree.nodes.len()];
    let mut p_of = vec![0usize; tree.nodes.len()];
    while let Some((x, enter)) = stack.pop() {
        let node = &tree.nodes[x];
        let cycle = node.separator.as_ref().map(|c| c.vertices.as_slice()).unwrap_or(&[]);
        if !enter {
            for &v in cycle.iter().filter(|&&v| v < n) {
                ancestor_marks[v] -= 1;
            }
            continue;
        }
        b_of[x] = node.region.vertices.iter().filter(|&&v| ancestor_marks[v] > 0).count();
        p_of[x] = node.region.vertices.iter().filter(|&&v| ancestor_marks[v] == 0 && in_p[v]).count();
        let recorded = (node.n, node.b, node.p);
        if recorded != (node.region.vertices.len(), b_of[x], p_of[x]) {
            failures.push(VerifyFailure::TreeShape {
                node: x,
                detail: format!("recorded counts {recorded:?} differ from recount"),
            });
        }
        let exceeded = limits.exceeded(node.region.vertices.len(), b_of[x], p_of[x]);
        match node.children {
            None => {
                if exceeded.iter().any(|&e| e) && !node.forced_leaf {
                    failures.push(VerifyFailure::LeafRule { node: x });
                }
            }
            Some([a, b]) => {
                if !exceeded.iter().any(|&e| e) {
                    failures.push(VerifyFailure::InternalRule { node: x });
                }
                for &v in cycle.iter().filter(|&&v| v < n) {
                    ancestor_marks[v] += 1;
                }
                stack.push((x, false));
                stack.push((b, true));
                stack.push((a, true));
            }
        }
    }

    for node in tree.internal() {
        let x = node.id;
        let Some(cycle) = &node.separator else {
            failures.push(VerifyFailure::CycleInvalid { node: x, detail: "internal node without a cycle".into() });
            continue;
        };
        if let Err(detail) = check_cycle(g, cycle) {
            failures.push(VerifyFailure::CycleInvalid { node: x, detail });
            continue;
        }
        let [a, b] = node.children.expect("internal");
        let (na, nb) = (&tree.nodes[a], &tree.nodes[b]);
        if na.region.vertices.len() + nb.region.vertices.len() > node.region.vertices.len() + cycle.len() {
            failures.push(VerifyFailure::SplitIdentity { node: x, detail: "n(x0) + n(x1) > n(x) + |C|".into() });
        }
        if p_of[a] + p_of[b] > p_of[x] {
            failures.push(VerifyFailure::SplitIdentity { node: x, detail: "p(x0) + p(x1) > p(x)".into() });
        }
        let inside = &na.region.vertices;
        let vertices = inside.len();
        let boundary = inside.iter().filter(|&&v| is_boundary[v]).count();
        let points = inside.iter().filter(|&&v| in_p[v]).count();
        let properties = [
            8 * vertices as u128 >= r as u128,
            64 * (boundary as u128).pow(2) >= r as u128,
            match t {
                Threshold::Finite(t) => 8 * points as u128 >= t as u128,
                Threshold::Infinite => false,
            },
        ];
        if !properties.iter().any(|&q| q) {
            failures.push(VerifyFailure::CycleProperties { node: x, vertices, boundary, points });
        }
        cycles.push(CycleFlags { node: x, length: cycle.len(), vertices, boundary, points, properties });
    }
    cycles
}

/// Distinct vertices, each consecutive pair an edge of `g` or a recorded
/// diagonal.
fn check_cycle(g: &EmbeddedGraph, cycle: &super::CycleRecord) -> Result<(), String> {
    let vs = &cycle.vertices;
    let k = vs.len();
    if k < 2 {
        return Err("fewer than two vertices".into());
    }
    let mut seen = HashSet::new();
    if let Some(v) = vs.iter().find(|&&v| v >= g.vertex_count() || !seen.insert(v)) {
        return Err(format!("vertex {v} repeats or is out of range"));
    }
    let diagonals: HashSet<(VertexId, VertexId)> =
        cycle.diagonals.iter().flat_map(|&[a, b]| [(a, b), (b, a)]).collect();
    for i in 0..k {
        let (a, b) = (vs[i], vs[(i + 1) % k]);
        if !diagonals.contains(&(a, b)) && !g.neighbors(a).any(|w| w == b) {
            return Err(format!("{a} and {b} are not adjacent"));
        }
    }
    Ok(())
}
