use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use planar_incidence::arrangement::GeometryDocument;
use planar_incidence::constructions::{
    check_witness, deletion_probability, forbidden_config_scan, pach_sharir_bound, point_graph, run_pipeline,
    sample_and_delete, st_lattice, trial_seed, AuditLog, Constants, ExperimentParams, IncidenceStructure, Provenance,
    ScanOptions, Witness, DEFAULT_CAP,
};
use planar_incidence::rdivision::DivisionConfig;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::manifest::RunManifest;
use crate::output::{col, num, Column, Report, Table};

pub const LATTICE_COLUMNS: &[Column] = &[
    col("n", "number of points (and of lines), a perfect cube m^3"),
    col("m", "cube root of n"),
    col("incidences", "point-line incidences, counted over the incidence lists"),
    col("closed_form", "m^4 - (m(m-1)/2)^2"),
    col("ratio", "incidences / n^(4/3)"),
    col("bound", "crossing-lemma incidence bound for n points and n lines, k = 1"),
    col("max_degree", "largest point-graph degree (empty without --point-graph)"),
    col("degree_bound", "n^(2/3)"),
    col("max_codegree", "largest number of common neighbours of two points"),
    col("codegree_ceiling", "slack * n^(1/3) * log2(n)^log_power"),
];

pub const TRIAL_COLUMNS: &[Column] = &[
    col("trial", "trial index i, from 0"),
    col("seed", "trial seed: SplitMix64 finalizer of (seed + i)"),
    col("p", "keep probability of each incidence"),
    col("selected", "incidences kept by the random selection"),
    col("bad", "forbidden configurations met during deletion"),
    col("deleted", "incidences removed to destroy them"),
    col("surviving", "incidences left at the end"),
    col("ratio", "surviving / (p * incidences of the full lattice)"),
    col("clean", "an independent scan of the result finds no forbidden configuration"),
];

pub const SCAN_COLUMNS: &[Column] = &[
    col("tuple", "index of a (k+1)-tuple of the witness"),
    col("points", "the tuple's points, space separated"),
    col("curve", "the distinct curve representing the tuple"),
];

pub const PART_COLUMNS: &[Column] = &[
    col("part", "division region (part) index"),
    col("points", "kept points whose gadget lies in the part"),
    col("curves", "curves contributing at least one block"),
    col("copies", "planted copies, one per block"),
    col("edges", "hyperedges of the block hypergraph"),
    col("census_copies", "copies of the complete (k+1)-graph on s vertices found"),
    col("census_bad", "found copies with k + 2 vertices on one curve"),
    col("census_truncated", "census stopped at --census-limit"),
];

#[derive(Args, Debug, Serialize)]
pub struct LatticeArgs {
    /// Lattice size, a perfect cube (repeatable)
    #[arg(long, required = true)]
    pub n: Vec<u64>,
    /// Print only the incidence count(s), one per line
    #[arg(long)]
    pub count: bool,
    /// Also build the point graph and check its degree and codegree bounds
    #[arg(long)]
    pub point_graph: bool,
    /// Constant in the codegree ceiling
    #[arg(long, default_value_t = 4.0)]
    pub slack: f64,
    /// Power of log2(n) in the codegree ceiling
    #[arg(long, default_value_t = 1.0)]
    pub log_power: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct LowerBoundArgs {
    /// Lattice size, a perfect cube
    #[arg(long)]
    pub n: u64,
    /// Size of the forbidden configuration (s points on s curves)
    #[arg(long)]
    pub s: usize,
    /// Multiplier on the keep probability n^(-(s-1)/(3(s^2-s-1)))
    #[arg(long, default_value_t = 1.0)]
    pub p_mult: f64,
    /// Number of trials
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    /// Base seed; trial i uses a seed derived from seed + i
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct ForbidScanArgs {
    /// Incidence structure JSON: {"point_count": N, "curves": [[points...]...], "k": K}
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    /// Geometry JSON; incidences are exact point-on-curve tests
    #[arg(long, group = "source")]
    pub geometry: Option<PathBuf>,
    /// The point-line lattice of this size
    #[arg(long, group = "source")]
    pub lattice: Option<u64>,
    /// Defaults to the input's k, else 1
    #[arg(long)]
    pub k: Option<usize>,
    /// Size of the forbidden configuration
    #[arg(long)]
    pub s: usize,
    /// Largest point count scanned without --force
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Scan even above --cap
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct PipelineArgs {
    /// Lattice size, a perfect cube
    #[arg(long)]
    pub n: u64,
    /// Maximum crossings per pair of curves
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Size of the forbidden configuration; must exceed k + 1
    #[arg(long, default_value_t = 3)]
    pub s: usize,
    /// Accuracy parameter; sets block length, gadget depth, r and t
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Seed for sampling and the division
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Multiplier on the keep probability
    #[arg(long, default_value_t = 1.0)]
    pub p_mult: f64,
    /// Copies enumerated per part before the census stops
    #[arg(long, default_value_t = 100_000)]
    pub census_limit: usize,
}

fn closed_form(m: u64) -> u64 {
    let t = m * (m - 1) / 2;
    m.pow(4) - t * t
}

pub fn lattice(args: &LatticeArgs) -> Result<Report> {
    let mut rows = Vec::new();
    let mut table = Table::new(LATTICE_COLUMNS);
    let mut failure = None;
    for &n in &args.n {
        let l = st_lattice(n)?;
        let incidences = l.structure().incidence_count() as u64;
        let expected = closed_form(l.m);
        let ratio = incidences as f64 / (n as f64).powf(4.0 / 3.0);
        let bound = pach_sharir_bound(n, n, 1, None, 1.0);
        let stats = args.point_graph.then(|| point_graph(&l).stats(&l, args.slack, args.log_power));
        if incidences != expected {
            failure.get_or_insert(format!("n = {n}: counted {incidences} incidences, closed form gives {expected}"));
        }
        if let Some(s) = &stats {
            if !s.degree_ok {
                failure.get_or_insert(format!("n = {n}: max degree {} exceeds {}", s.max_degree, s.degree_bound));
            }
            if !s.codegree_ok {
                failure.get_or_insert(format!(
                    "n = {n}: points {:?} have {} common neighbours, above {}",
                    s.codegree_pair, s.max_codegree, s.codegree_ceiling
                ));
            }
        }
        let opt = |f: &dyn Fn(&planar_incidence::constructions::PointGraphStats) -> String| {
            stats.as_ref().map(f).unwrap_or_default()
        };
        table.push(vec![
            n.to_string(),
            l.m.to_string(),
            incidences.to_string(),
            expected.to_string(),
            num(ratio),
            num(bound),
            opt(&|s| s.max_degree.to_string()),
            opt(&|s| s.degree_bound.to_string()),
            opt(&|s| s.max_codegree.to_string()),
            opt(&|s| num(s.codegree_ceiling)),
        ]);
        rows.push(json!({
            "n": n, "m": l.m, "incidences": incidences, "closed_form": expected,
            "ratio": ratio, "bound": bound, "point_graph": stats,
        }));
    }
    let counts: String = table.rows.iter().map(|r| format!("{}\n", r[2])).collect();
    let mut out = Report::new(json!({ "lattices": rows }), table);
    out.failure = failure;
    if args.count {
        out.bare = Some(counts);
    }
    Ok(out)
}

#[derive(Serialize)]
struct Trial {
    trial: u64,
    audit: AuditLog,
    ratio: f64,
    half_bound_met: bool,
    clean: bool,
    witness: Option<Witness>,
}

pub fn lower_bound(args: &LowerBoundArgs) -> Result<Report> {
    let lattice = st_lattice(args.n)?;
    let base = lattice.structure();
    let params =
        ExperimentParams::with_constants(args.n, 1, args.s, 1.0, args.seed, Constants::default(), args.p_mult);
    let p = deletion_probability(args.n, args.s, args.p_mult);
    let total = base.incidence_count() as f64;
    let opts = ScanOptions { cap: DEFAULT_CAP, force: true };
    let trials: Vec<Trial> = (0..args.seeds)
        .into_par_iter()
        .map(|i| -> Result<Trial> {
            let out = sample_and_delete(&base, args.s, p, trial_seed(args.seed, i))?;
            let witness = forbidden_config_scan(&out.structure, 1, args.s, opts)?;
            let ratio = out.audit.surviving as f64 / (p * total);
            Ok(Trial { trial: i, ratio, half_bound_met: ratio >= 0.5, clean: witness.is_none(), witness, audit: out.audit })
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(TRIAL_COLUMNS);
    for t in &trials {
        let a = &t.audit;
        table.push(vec![
            t.trial.to_string(),
            a.seed.to_string(),
            num(a.p),
            a.selected.to_string(),
            a.bad.to_string(),
            a.deleted.to_string(),
            a.surviving.to_string(),
            num(t.ratio),
            t.clean.to_string(),
        ]);
    }
    let failure = trials.iter().find(|t| !t.clean).map(|t| {
        format!(
            "trial {} (seed {}) still has a forbidden configuration {}",
            t.trial,
            t.audit.seed,
            serde_json::to_string(&t.witness).expect("witness serializes")
        )
    });
    let result = json!({
        "params": params,
        "lattice_incidences": base.incidence_count(),
        "clean_runs": trials.iter().filter(|t| t.clean).count(),
        "half_bound_runs": trials.iter().filter(|t| t.half_bound_met).count(),
        "trials": trials,
    });
    let mut out = Report::new(result, table);
    out.failure = failure;
    Ok(out)
}

#[derive(Deserialize)]
struct ScanInput {
    point_count: usize,
    curves: Vec<Vec<usize>>,
    #[serde(default)]
    k: Option<usize>,
}

fn scan_source(args: &ForbidScanArgs, m: &mut RunManifest) -> Result<(IncidenceStructure, Option<usize>)> {
    if let Some(path) = &args.input {
        let text = m.read_input(path)?;
        let input: ScanInput = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if let Some((c, &p)) =
            input.curves.iter().enumerate().find_map(|(c, pts)| pts.iter().find(|&&p| p >= input.point_count).map(|p| (c, p)))
        {
            bail!("{}: curve {c} lists point {p}, but there are {} points", path.display(), input.point_count);
        }
        let mut curves = input.curves;
        for c in &mut curves {
            c.sort_unstable();
            c.dedup();
        }
        let st = IncidenceStructure {
            point_count: input.point_count,
            curves,
            k: input.k.unwrap_or(1),
            provenance: Provenance::Geometric,
        };
        return Ok((st, input.k));
    }
    if let Some(path) = &args.geometry {
        let text = m.read_input(path)?;
        let doc = GeometryDocument::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
        let curves = doc
            .curves
            .iter()
            .map(|c| (0..doc.points.len()).filter(|&i| c.contains(&doc.points[i])).collect())
            .collect();
        let st = IncidenceStructure {
            point_count: doc.points.len(),
            curves,
            k: doc.k.unwrap_or(1),
            provenance: Provenance::Geometric,
        };
        return Ok((st, doc.k));
    }
    if let Some(n) = args.lattice {
        return Ok((st_lattice(n)?.structure(), Some(1)));
    }
    bail!("one of --input, --geometry or --lattice is required")
}

pub fn forbid_scan(args: &ForbidScanArgs, m: &mut RunManifest) -> Result<Report> {
    let (st, file_k) = scan_source(args, m)?;
    let k = args.k.or(file_k).unwrap_or(1);
    let witness = forbidden_config_scan(&st, k, args.s, ScanOptions { cap: args.cap, force: args.force })?;
    let verified = witness.as_ref().map(|w| check_witness(&st, k, args.s, w));
    let mut table = Table::new(SCAN_COLUMNS);
    if let Some(w) = &witness {
        for (i, (t, c)) in w.tuples.iter().zip(&w.curves).enumerate() {
            let pts: Vec<String> = t.iter().map(|p| p.to_string()).collect();
            table.push(vec![i.to_string(), pts.join(" "), c.to_string()]);
        }
    }
    let failure = witness.as_ref().map(|w| {
        format!("forbidden configuration on points {:?} {}", w.points, serde_json::to_string(w).expect("serializes"))
    });
    let result = json!({
        "points": st.point_count,
        "curves": st.curves.len(),
        "incidences": st.incidence_count(),
        "k": k,
        "s": args.s,
        "found": witness.is_some(),
        "witness": witness,
        "witness_verified": verified,
    });
    let mut out = Report::new(result, table);
    out.failure = failure;
    Ok(out)
}

pub fn pipeline(args: &PipelineArgs) -> Result<Report> {
    if args.k == 0 || args.s <= args.k + 1 || args.eps <= 0.0 {
        bail!("need k >= 1, s > k + 1 and eps > 0");
    }
    let params =
        ExperimentParams::with_constants(args.n, args.k, args.s, args.eps, args.seed, Constants::default(), args.p_mult);
    let cfg = DivisionConfig { seed: args.seed, ..DivisionConfig::default() };
    let report = run_pipeline(&params, &cfg, args.census_limit)?;

    let mut table = Table::new(PART_COLUMNS);
    for p in &report.parts {
        table.push(vec![
            p.part.to_string(),
            p.points.to_string(),
            p.curves.to_string(),
            p.copies.to_string(),
            p.edges.to_string(),
            p.census.copies.to_string(),
            p.census.bad.to_string(),
            p.census.truncated.to_string(),
        ]);
    }
    let g = &report.graph;
    let failure = if !report.division.verified {
        Some(format!("division failed {} verification checks", report.division.failures))
    } else if g.gadget_vertices != g.expected_gadget_vertices {
        Some(format!("gadgets added {} vertices, expected {}", g.gadget_vertices, g.expected_gadget_vertices))
    } else if !g.euler_holds {
        Some("arrangement graph violates Euler's formula".into())
    } else if !report.blocks.within_bound {
        Some(format!("{} points discarded, above the bound {}", report.blocks.discarded, report.blocks.discard_bound))
    } else {
        None
    };
    let mut out = Report::new(&report, table);
    out.failure = failure;
    Ok(out)
}
