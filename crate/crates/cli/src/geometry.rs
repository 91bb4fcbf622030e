use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use planar_incidence::arrangement::{
    add_nested_cycles, build_arrangement_graph, format_rational, GeometryDocument, VertexKind,
};
use planar_incidence::planar::GraphDocument;
use serde::Serialize;
use serde_json::json;

use crate::manifest::RunManifest;
use crate::output::{col, Column, Report, Table};

pub const VERTEX_COLUMNS: &[Column] = &[
    col("vertex", "vertex id in the arrangement graph"),
    col("kind", "point, crossing, synthetic (clipped curve end) or gadget"),
    col("label", "input index of a point; centre vertex of a gadget vertex; empty otherwise"),
    col("level", "nested-cycle index of a gadget vertex, from 1 nearest the centre"),
    col("x", "exact x coordinate as num/den; empty for gadget vertices"),
    col("y", "exact y coordinate as num/den; empty for gadget vertices"),
    col("degree", "number of incident edge ends"),
];

#[derive(Args, Debug, Serialize)]
pub struct ArrangeArgs {
    /// Geometry JSON: {"curves": [...], "points": [...], "k": K}
    #[arg(long)]
    pub geometry: PathBuf,
    /// Maximum crossings per pair of curves; overrides the file's k (default 1)
    #[arg(long)]
    pub k: Option<usize>,
    /// Surround marked point IDX with nested cycles (repeatable)
    #[arg(long = "gadget", value_name = "IDX")]
    pub gadgets: Vec<usize>,
    /// Number of nested cycles per gadget
    #[arg(long, default_value_t = 1)]
    pub w: usize,
}

#[derive(Serialize)]
struct Counts {
    vertices: usize,
    real_vertices: usize,
    edges: usize,
    real_edges: usize,
    crossing_vertices: usize,
    crossings: usize,
    euler_holds: bool,
}

pub fn arrange(args: &ArrangeArgs, m: &mut RunManifest) -> Result<Report> {
    let text = m.read_input(&args.geometry)?;
    let doc = GeometryDocument::from_json(&text).with_context(|| format!("parsing {}", args.geometry.display()))?;
    let k = args.k.or(doc.k).unwrap_or(1);
    let mut arr = build_arrangement_graph(&doc.points, &doc.curves, k).with_context(|| format!("arrangement of {}", args.geometry.display()))?;

    let mut cycles = Vec::new();
    for &i in &args.gadgets {
        let Some(v) = arr.point_vertex(i) else { bail!("--gadget {i}: no marked point with that index") };
        let g = add_nested_cycles(&arr, v, args.w).with_context(|| format!("gadget around point {i}"))?;
        cycles.push(json!({ "point": i, "vertex": v, "cycles": g.cycles }));
        arr = g.arrangement;
    }

    let marked: Vec<usize> = (0..doc.points.len()).filter_map(|i| arr.point_vertex(i)).collect();
    let counts = Counts {
        vertices: arr.graph.vertex_count(),
        real_vertices: arr.real_vertex_count(),
        edges: arr.graph.edge_count(),
        real_edges: arr.real_edge_count(),
        crossing_vertices: arr.crossing_vertex_count(),
        crossings: arr.crossings,
        euler_holds: arr.graph.euler_holds(),
    };

    let mut table = Table::new(VERTEX_COLUMNS);
    for (v, kind) in arr.kind.iter().enumerate() {
        let (name, label, level) = match *kind {
            VertexKind::Point(i) => ("point", i.to_string(), String::new()),
            VertexKind::Crossing => ("crossing", String::new(), String::new()),
            VertexKind::Synthetic => ("synthetic", String::new(), String::new()),
            VertexKind::Gadget { center, level } => ("gadget", center.to_string(), level.to_string()),
        };
        let (x, y) = match &arr.coords[v] {
            Some(p) => (format_rational(&p.x), format_rational(&p.y)),
            None => Default::default(),
        };
        table.push(vec![v.to_string(), name.into(), label, level, x, y, arr.graph.degree(v).to_string()]);
    }

    let result = json!({
        "k": k,
        "counts": counts,
        "graph": GraphDocument::from_graph(&arr.graph, &marked),
        "kind": arr.kind,
        "coords": arr.coords,
        "edge_curve": arr.edge_curve,
        "gadgets": cycles,
    });
    Ok(Report::new(result, table))
}
