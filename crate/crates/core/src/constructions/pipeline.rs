use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{
    add_nested_cycles, block_partition, build_arrangement_graph, high_degree_truncation, int, validate_k_intersecting,
    ArrangementError, ArrangementGraph, Block, BlockError, CurveItem, CurveItemKind, GadgetError, Point, Truncation,
};
use crate::planar::VertexId;
use crate::rdivision::{refined_r_division, verify_division, DivisionConfig, DivisionError, Threshold};

use super::hypergraph::{build_block_hypergraph, CopyCensus, HypergraphError};
use super::lattice::{pach_sharir_bound, st_lattice, LatticeError};
use super::params::ExperimentParams;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Blocks(#[from] BlockError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncidenceSummary {
    pub points: usize,
    pub curves: usize,
    pub incidences: u64,
    pub crossings: usize,
    pub bound: f64,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    /// Multi-curve points outside the kept set, marked so the arrangement
    /// has no unmarked triple crossings.
    pub auxiliary_points: usize,
    pub vertices: usize,
    pub edges: usize,
    pub gadget_centers: usize,
    pub gadget_vertices: usize,
    pub expected_gadget_vertices: usize,
    pub euler_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisionSummary {
    pub r: u64,
    pub t: u64,
    pub regions: usize,
    pub boundary: usize,
    /// Kept points that ended on the boundary.
    pub boundary_points: usize,
    pub verified: bool,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub blocks: usize,
    pub discarded: usize,
    /// Sum over curves of `s (b + 1)`.
    pub discard_bound: usize,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartSummary {
    pub part: usize,
    pub points: usize,
    pub curves: usize,
    pub copies: usize,
    pub edges: usize,
    pub census: CopyCensus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub params: ExperimentParams,
    pub incidences: IncidenceSummary,
    pub truncation: Truncation,
    pub graph: GraphSummary,
    pub division: DivisionSummary,
    pub blocks: BlockSummary,
    pub parts: Vec<PartSummary>,
}

/// Lattice, truncation at `ell`, arrangement of the lattice segments with
/// `w` nested cycles around every kept point, refined division, blocks along
/// every curve and one block hypergraph per part.
pub fn run_pipeline(
    params: &ExperimentParams,
    division_cfg: &DivisionConfig,
    census_limit: usize,
) -> Result<PipelineReport, PipelineError> {
    let (k, s) = (params.k, params.s);
    let lattice = st_lattice(params.n)?;
    let n = lattice.size();
    let structure = lattice.structure();
    let curves = lattice.geometric_lines(true);
    let coords = lattice.geometric_points();

    let degrees: Vec<usize> = (0..n).map(|p| lattice.lines_through(p).count()).collect();
    let truncation = high_degree_truncation(&degrees, n, params.ell, k, params.constants.c3);

    // marked points: kept ones first, then every other multi-curve point
    let crossings = validate_k_intersecting(&curves, 1)?;
    let kept_at: BTreeMap<&Point, usize> = truncation.kept.iter().map(|&p| (&coords[p], p)).collect();
    let mut through: BTreeMap<Point, BTreeSet<usize>> = BTreeMap::new();
    for c in &crossings {
        let e = through.entry(c.point.clone()).or_default();
        e.insert(c.curves.0);
        e.insert(c.curves.1);
    }
    let mut marked: Vec<Point> = truncation.kept.iter().map(|&p| coords[p].clone()).collect();
    let aux: Vec<Point> =
        through.into_iter().filter(|(p, cs)| cs.len() >= 3 && !kept_at.contains_key(p)).map(|(p, _)| p).collect();
    let auxiliary_points = aux.len();
    marked.extend(aux);
    let mut arr = build_arrangement_graph(&marked, &curves, 1)?;
    let kept_count = truncation.kept.len();

    let mut expected_gadget_vertices = 0;
    let before = arr.graph.vertex_count();
    for v in 0..kept_count {
        expected_gadget_vertices += params.w * arr.graph.degree(v);
        arr = add_nested_cycles(&arr, v, params.w)?.arrangement;
    }
    let graph = GraphSummary {
        auxiliary_points,
        vertices: arr.graph.vertex_count(),
        edges: arr.graph.edge_count(),
        gadget_centers: kept_count,
        gadget_vertices: arr.graph.vertex_count() - before,
        expected_gadget_vertices,
        euler_holds: arr.graph.euler_holds(),
    };

    let incidences = {
        let count = lattice.incidence_count();
        let bound = pach_sharir_bound(n as u64, n as u64, k as u64, Some(crossings.len() as u64), params.constants.c6);
        IncidenceSummary {
            points: n,
            curves: n,
            incidences: count,
            crossings: crossings.len(),
            bound,
            within_bound: count as f64 <= bound,
        }
    };

    let r = params.r.max(division_cfg.r_min);
    let prescribed: Vec<VertexId> = (0..kept_count).collect();
    let division = refined_r_division(&arr.graph, &prescribed, r, Threshold::Finite(params.t), division_cfg)?;
    let report = verify_division(&arr.graph, &prescribed, &division, r, Threshold::Finite(params.t), division_cfg);
    let on_boundary: BTreeSet<VertexId> = division.boundary.iter().copied().collect();
    let mut region_of = vec![usize::MAX; arr.graph.vertex_count()];
    for (i, region) in division.regions.iter().enumerate() {
        for &v in &region.vertices {
            if !on_boundary.contains(&v) {
                region_of[v] = i;
            }
        }
    }
    let division_summary = DivisionSummary {
        r,
        t: params.t,
        regions: division.regions.len(),
        boundary: division.boundary.len(),
        boundary_points: prescribed.iter().filter(|v| on_boundary.contains(v)).count(),
        verified: report.passed(),
        failures: report.failures.len(),
    };

    let mut all_blocks: Vec<(usize, Block)> = Vec::new();
    let (mut discarded, mut discard_bound) = (0, 0);
    for (c, path) in curve_paths(&arr, curves.len()).into_iter().enumerate() {
        let items: Vec<CurveItem> = path
            .iter()
            .enumerate()
            .filter_map(|(i, &v)| {
                let kind = if on_boundary.contains(&v) {
                    CurveItemKind::Boundary(v)
                } else if v < kept_count {
                    CurveItemKind::Point { id: truncation.kept[v], part: region_of[v] }
                } else {
                    return None;
                };
                Some(CurveItem { position: int(i as i64), kind })
            })
            .collect();
        let bp = block_partition(&items, s)?;
        discarded += bp.discarded.len();
        discard_bound += s * (bp.boundary_count + 1);
        all_blocks.extend(bp.blocks.into_iter().map(|b| (c, b)));
    }
    let blocks = BlockSummary {
        blocks: all_blocks.len(),
        discarded,
        discard_bound,
        within_bound: discarded <= discard_bound,
    };

    let mut points_in_part = vec![0usize; division.regions.len()];
    for v in 0..kept_count {
        if region_of[v] != usize::MAX {
            points_in_part[region_of[v]] += 1;
        }
    }
    let used: BTreeSet<usize> = all_blocks.iter().map(|(_, b)| b.part).collect();
    let mut parts = Vec::new();
    for part in used {
        let h = build_block_hypergraph(part, points_in_part[part], &all_blocks, k, s)?;
        parts.push(PartSummary {
            part,
            points: points_in_part[part],
            curves: h.curves.len(),
            copies: h.copies.len(),
            edges: h.edge_count(),
            census: h.census(&structure, census_limit),
        });
    }

    Ok(PipelineReport {
        params: params.clone(),
        incidences,
        truncation,
        graph,
        division: division_summary,
        blocks,
        parts,
    })
}

/// Vertex sequence of each curve from its left end to its right end.
pub fn curve_paths(arr: &ArrangementGraph, curve_count: usize) -> Vec<Vec<VertexId>> {
    let g = &arr.graph;
    let mut incident: Vec<BTreeMap<VertexId, Vec<VertexId>>> = vec![BTreeMap::new(); curve_count];
    for (e, &[u, v]) in g.edges().iter().enumerate() {
        if let Some(c) = arr.edge_curve[e] {
            incident[c].entry(u).or_default().push(v);
            incident[c].entry(v).or_default().push(u);
        }
    }
    incident
        .into_iter()
        .map(|adj| {
            // the two ends are the synthetic vertices; start at the left one
            let start = adj
                .iter()
                .filter(|(_, nb)| nb.len() == 1)
                .map(|(&v, _)| v)
                .min_by(|&a, &b| match (&arr.coords[a], &arr.coords[b]) {
                    (Some(pa), Some(pb)) => pa.x.cmp(&pb.x),
                    _ => a.cmp(&b),
                });
            let Some(mut cur) = start else { return Vec::new() };
            let mut path = vec![cur];
            let mut prev = usize::MAX;
            loop {
                let next = adj[&cur].iter().copied().find(|&x| x != prev);
                match next {
                    Some(x) if path.len() <= adj.len() => {
                        path.push(x);
                        prev = cur;
                        cur = x;
                    }
                    _ => break,
                }
                if adj[&cur].len() == 1 {
                    break;
                }
            }
            path
        })
        .collect()
}
