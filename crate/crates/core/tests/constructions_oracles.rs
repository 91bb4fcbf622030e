use itertools::Itertools;
use planar_incidence::arrangement::{int, Curve, Point};
use planar_incidence::constructions::*;
use planar_incidence::rdivision::DivisionConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn closed_form(m: u64) -> u64 {
    let t = m * (m - 1) / 2;
    m.pow(4) - t * t
}

fn brute_incidences(l: &Lattice) -> u64 {
    let (m, h) = (l.m as i64, (l.m * l.m) as i64);
    let mut count = 0;
    for x in 0..m {
        for y in 0..h {
            for a in 0..m {
                for b in 0..h {
                    count += (y == a * x + b) as u64;
                }
            }
        }
    }
    count
}

#[test]
fn lattice_counts() {
    for (n, want) in [(8u64, 15u64), (64, 220), (512, 3312)] {
        let l = st_lattice(n).unwrap();
        assert_eq!(l.incidence_count(), want);
        assert_eq!(closed_form(l.m), want);
        assert_eq!(brute_incidences(&l), want);
        assert_eq!(l.structure().incidence_count() as u64, want);
    }
    for m in 2..=32u64 {
        let l = st_lattice(m * m * m).unwrap();
        assert_eq!(l.incidence_count(), closed_form(m));
        assert!(l.incidence_count() as f64 / (l.n as f64).powf(4.0 / 3.0) >= 0.75);
    }
}

#[test]
fn geometric_incidences() {
    let pts: Vec<Point> = (0..10).map(|i| Point::from_ints(i, if i < 5 { 2 * i } else { 0 })).collect();
    let line = Curve::line(int(2), int(0));
    assert_eq!(incidence_count(&pts[..0], std::slice::from_ref(&line)), 0);
    // (0, 0) through (4, 8) lie on y = 2x
    assert_eq!(incidence_count(&pts, &[line]), 5);
    let l = st_lattice(64).unwrap();
    assert_eq!(incidence_count(&l.geometric_points(), &l.geometric_lines(false)), 220);
}

#[test]
fn bound_covers_lattice() {
    let n = 512u64;
    assert!(3312.0 <= (n as f64).powf(4.0 / 3.0));
    assert!(3312.0 <= pach_sharir_bound(n, n, 1, None, 1.0));
}

/// Common line of two lattice points, found by solving for slope and intercept.
fn joined(l: &Lattice, p: usize, q: usize) -> bool {
    let ((x1, y1), (x2, y2)) = (l.point(p), l.point(q));
    let (x1, y1, x2, y2) = (x1 as i64, y1 as i64, x2 as i64, y2 as i64);
    if x1 == x2 || (y2 - y1) % (x2 - x1) != 0 {
        return false;
    }
    let a = (y2 - y1) / (x2 - x1);
    let b = y1 - a * x1;
    (0..l.m as i64).contains(&a) && (0..(l.m * l.m) as i64).contains(&b)
}

#[test]
fn point_graph_matches_all_pairs() {
    for n in [8u64, 64] {
        let l = st_lattice(n).unwrap();
        let g = point_graph(&l);
        let size = l.size();
        let adj: Vec<Vec<bool>> = (0..size).map(|p| (0..size).map(|q| p != q && joined(&l, p, q)).collect()).collect();
        let degrees: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
        let mut max_co = 0;
        for p in 0..size {
            assert_eq!(g.degree(p), degrees[p]);
            for q in p + 1..size {
                let co = (0..size).filter(|&w| adj[p][w] && adj[q][w]).count();
                assert_eq!(g.codegree(p, q), co);
                max_co = max_co.max(co);
            }
        }
        let stats = g.stats(&l, 4.0, 1.0);
        assert_eq!(stats.max_degree, *degrees.iter().max().unwrap());
        assert!(stats.max_degree as u64 <= l.m * l.m);
        assert_eq!(stats.max_codegree, max_co);
    }
}

/// Every injective tuple-to-curve assignment, tried exhaustively.
fn assign(tuples: &[Vec<usize>], st: &IncidenceStructure, used: &mut Vec<usize>) -> bool {
    let Some(t) = tuples.first() else { return true };
    for c in 0..st.curves.len() {
        if used.contains(&c) || !t.iter().all(|p| st.curves[c].contains(p)) {
            continue;
        }
        used.push(c);
        if assign(&tuples[1..], st, used) {
            return true;
        }
        used.pop();
    }
    false
}

fn brute_first(st: &IncidenceStructure, k: usize, s: usize) -> Option<Vec<usize>> {
    (0..st.point_count).combinations(s).find(|set| {
        let tuples: Vec<Vec<usize>> = set.iter().copied().combinations(k + 1).collect();
        assign(&tuples, st, &mut Vec::new())
    })
}

fn random_structure(rng: &mut ChaCha8Rng, k: usize) -> IncidenceStructure {
    let n = rng.gen_range(4..=10);
    let curves = (0..rng.gen_range(3..=22))
        .map(|_| {
            let size = rng.gen_range(k + 1..=(k + 3).min(n));
            let mut pts: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let j = rng.gen_range(i..n);
                pts.swap(i, j);
            }
            pts.truncate(size);
            pts.sort_unstable();
            pts
        })
        .collect();
    IncidenceStructure { point_count: n, curves, k, provenance: Provenance::Geometric }
}

#[test]
fn scan_agrees_with_assignment_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut found = 0;
    for i in 0..120 {
        let k = 1 + i % 2;
        let s = k + 2 + (i / 2) % 2;
        let st = random_structure(&mut rng, k);
        let want = brute_first(&st, k, s);
        let got = forbidden_config_scan(&st, k, s, ScanOptions::default()).unwrap();
        assert_eq!(got.as_ref().map(|w| w.points.clone()), want);
        if let Some(w) = got {
            assert!(check_witness(&st, k, s, &w));
            found += 1;
        }
    }
    assert!(found > 10 && found < 110, "{found}");
}

#[test]
fn deletion_cleans_full_lattice() {
    let base = st_lattice(64).unwrap().structure();
    let opts = ScanOptions { cap: DEFAULT_CAP, force: true };
    assert!(forbidden_config_scan(&base, 1, 3, opts).unwrap().is_some());
    let out = sample_and_delete(&base, 3, 1.0, 7).unwrap();
    assert_eq!(forbidden_config_scan(&out.structure, 1, 3, opts).unwrap(), None);
    assert_eq!(out.structure.provenance, Provenance::CombinatorialAfterDeletion);
    // every surviving incidence was in the lattice
    for (c, pts) in out.structure.curves.iter().enumerate() {
        assert!(pts.iter().all(|p| base.curves[c].contains(p)));
    }
}

#[test]
fn pipeline_copies_equal_blocks() {
    let params = ExperimentParams::new(64, 1, 3, 1.0, 0);
    let rep = run_pipeline(&params, &DivisionConfig::default(), 100_000).unwrap();
    let copies: usize = rep.parts.iter().map(|p| p.copies).sum();
    assert_eq!(copies, rep.blocks.blocks);
    for part in &rep.parts {
        assert_eq!(part.edges, part.copies * 3);
        assert!(part.census.copies >= part.copies);
    }
    assert!(rep.blocks.within_bound);
    assert_eq!(rep.graph.gadget_vertices, rep.graph.expected_gadget_vertices);
}
