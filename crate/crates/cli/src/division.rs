use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use planar_incidence::planar::gen::triangulated_grid;
use planar_incidence::planar::{EmbeddedGraph, GraphDocument, VertexId};
use planar_incidence::rdivision::{
    classic_r_division, refined_r_division, verify_division, Division, DivisionConfig, DivisionReport, Threshold,
    VerifyFailure,
};
use planar_incidence::separator::Balance;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::manifest::RunManifest;
use crate::output::{col, num, Column, Report, Table};

pub const REGION_COLUMNS: &[Column] = &[
    col("region", "index of the region in the division"),
    col("node", "recursion-tree node the region is a leaf of"),
    col("vertices", "vertices of the region"),
    col("boundary", "region vertices shared with another region"),
    col("interior_points", "prescribed vertices of the region not on the boundary"),
    col("vertices_over_r", "vertices / r"),
    col("boundary_over_sqrt_r", "boundary / sqrt(r)"),
];

#[derive(Args, Debug, Serialize)]
pub struct RdivArgs {
    /// Graph JSON file (rotation-system format)
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    pub graph: Option<PathBuf>,
    /// Triangulated grid instead of a file, as ROWSxCOLS or K for K x K
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Prescribed vertices: none, all, half (seeded random half) or a file
    /// of vertex ids; defaults to the graph file's P
    #[arg(long = "p")]
    pub points: Option<String>,
    /// Target region size
    #[arg(long)]
    pub r: u64,
    /// Interior-point threshold, a positive integer or "inf"
    #[arg(long, default_value = "inf")]
    pub t: Threshold,
    /// Leaf constant: a node stops splitting at c0 r vertices, c0 sqrt(r) boundary, c0 t points
    #[arg(long, default_value_t = 4.0)]
    pub c0: f64,
    /// Separator balance as num/den
    #[arg(long, default_value = "3/4", value_parser = parse_balance)]
    #[serde(serialize_with = "crate::display")]
    pub balance: Balance,
    /// Seed for `--p half` and separator tie-breaking
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Alternate only vertices and boundary; ignores P and t
    #[arg(long)]
    pub classic: bool,
    /// Ceiling C in |R| <= C (N/r + |P|/t)
    #[arg(long, default_value_t = 48.0)]
    pub region_ceiling: f64,
    /// Include every separator cycle in the JSON result
    #[arg(long)]
    pub emit_separators: bool,
    /// Also write the division (graph, parameters, regions, tree) for `verify`
    #[arg(long)]
    #[serde(skip)]
    pub division_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Division file written by `rdiv --division-out`
    #[arg(long)]
    pub division: PathBuf,
}

/// Everything `verify` needs to re-check a division from scratch.
#[derive(Serialize, Deserialize)]
pub struct DivisionFile {
    pub manifest: RunManifest,
    pub graph: GraphDocument,
    pub r: u64,
    pub t: Threshold,
    pub config: DivisionConfig,
    pub division: Division,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).unwrap_or((s, s));
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("bad grid size {s:?}: {e}"));
    let (rows, cols) = (parse(a)?, parse(b)?);
    if rows < 2 || cols < 2 {
        return Err("grid needs at least 2 rows and 2 columns".into());
    }
    Ok((rows, cols))
}

fn parse_balance(s: &str) -> Result<Balance, String> {
    let (a, b) = s.split_once('/').ok_or_else(|| format!("balance must be num/den, got {s:?}"))?;
    let num: u64 = a.trim().parse().map_err(|e| format!("bad balance numerator: {e}"))?;
    let den: u64 = b.trim().parse().map_err(|e| format!("bad balance denominator: {e}"))?;
    if den == 0 || 2 * num < den || num >= den {
        return Err(format!("balance must lie in [1/2, 1), got {s}"));
    }
    Ok(Balance { num, den })
}

fn prescribed(choice: &str, n: usize, seed: u64, m: &mut RunManifest) -> Result<Vec<VertexId>> {
    Ok(match choice {
        "none" => Vec::new(),
        "all" => (0..n).collect(),
        "half" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = sample(&mut rng, n, n / 2).into_vec();
            v.sort_unstable();
            v
        }
        path => {
            let text = m.read_input(path.as_ref())?;
            let ids: Vec<VertexId> = serde_json::from_str(&text)
                .or_else(|_| text.split_whitespace().map(str::parse).collect::<Result<_, _>>())
                .map_err(|_| anyhow!("{path}: expected a JSON array or whitespace-separated vertex ids"))?;
            if let Some(&bad) = ids.iter().find(|&&v| v >= n) {
                bail!("{path}: vertex {bad} is out of range for {n} vertices");
            }
            ids
        }
    })
}

fn load_graph(args: &RdivArgs, m: &mut RunManifest) -> Result<(EmbeddedGraph, Vec<VertexId>)> {
    match (&args.graph, args.grid) {
        (Some(path), _) => {
            let text = m.read_input(path)?;
            GraphDocument::from_json(&text)
                .and_then(|d| d.to_graph())
                .with_context(|| format!("parsing {}", path.display()))
        }
        (None, Some((rows, cols))) => Ok((triangulated_grid(rows, cols), Vec::new())),
        (None, None) => bail!("one of --graph or --grid is required"),
    }
}

/// One sentence naming a failed check and its witness.
pub fn describe(f: &VerifyFailure) -> String {
    let witness = serde_json::to_string(f).expect("failure serializes");
    match f {
        VerifyFailure::EdgeCoverage { edge } => format!("edge {edge} is covered by no region {witness}"),
        _ => format!("check failed {witness}"),
    }
}

fn report_table(report: &DivisionReport, leaf_nodes: &[usize]) -> Table {
    let mut table = Table::new(REGION_COLUMNS);
    let r = report.r as f64;
    for (i, s) in report.regions.iter().enumerate() {
        table.push(vec![
            i.to_string(),
            leaf_nodes.get(i).map(|n| n.to_string()).unwrap_or_default(),
            s.vertices.to_string(),
            s.boundary.to_string(),
            s.interior_points.to_string(),
            num(s.vertices as f64 / r),
            num(s.boundary as f64 / r.sqrt()),
        ]);
    }
    table
}

fn failure_of(report: &DivisionReport) -> Option<String> {
    report.failures.first().map(|f| {
        format!("verification failed ({} failures); first: {}", report.failures.len(), describe(f))
    })
}

#[derive(Serialize)]
struct SeparatorRow<'a> {
    node: usize,
    depth: usize,
    balanced: &'a Option<planar_incidence::rdivision::Parameter>,
    vertices: &'a [VertexId],
    diagonals: &'a [[VertexId; 2]],
    shortcuts: usize,
}

pub fn rdiv(args: &RdivArgs, m: &mut RunManifest) -> Result<Report> {
    let (g, file_p) = load_graph(args, m)?;
    let n = g.vertex_count();
    let p = match &args.points {
        Some(choice) => prescribed(choice, n, args.seed, m)?,
        None => file_p,
    };
    let cfg = DivisionConfig {
        c0: args.c0,
        balance: args.balance,
        seed: args.seed,
        region_ceiling: args.region_ceiling,
        ..DivisionConfig::default()
    };
    let (p, t) = if args.classic { (Vec::new(), Threshold::Infinite) } else { (p, args.t) };
    let division = if args.classic {
        classic_r_division(&g, args.r, &cfg)
    } else {
        refined_r_division(&g, &p, args.r, t, &cfg)
    }
    .context("building the division")?;
    let report = verify_division(&g, &p, &division, args.r, t, &cfg);

    if let Some(path) = &args.division_out {
        let file = DivisionFile {
            manifest: m.clone(),
            graph: GraphDocument::from_graph(&g, &p),
            r: args.r,
            t,
            config: cfg.clone(),
            division: division.clone(),
        };
        fs::write(path, serde_json::to_string_pretty(&file)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }

    let separators: Option<Vec<SeparatorRow>> = args.emit_separators.then(|| {
        division
            .tree
            .internal()
            .filter_map(|node| {
                node.separator.as_ref().map(|c| SeparatorRow {
                    node: node.id,
                    depth: node.depth,
                    balanced: &node.balanced,
                    vertices: &c.vertices,
                    diagonals: &c.diagonals,
                    shortcuts: c.shortcuts,
                })
            })
            .collect()
    });
    let mut result = serde_json::json!({ "report": report, "leaf_nodes": division.leaf_nodes });
    if let Some(s) = separators {
        result["separators"] = serde_json::to_value(s)?;
    }
    let mut out = Report::new(result, report_table(&report, &division.leaf_nodes));
    out.failure = failure_of(&report);
    Ok(out)
}

pub fn verify(args: &VerifyArgs, m: &mut RunManifest) -> Result<Report> {
    let text = m.read_input(&args.division)?;
    let file: DivisionFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", args.division.display()))?;
    let (g, p) = file.graph.to_graph().with_context(|| format!("graph in {}", args.division.display()))?;
    let report = verify_division(&g, &p, &file.division, file.r, file.t, &file.config);
    let mut out = Report::new(serde_json::json!({ "report": report }), report_table(&report, &file.division.leaf_nodes));
    out.failure = failure_of(&report);
    Ok(out)
}
