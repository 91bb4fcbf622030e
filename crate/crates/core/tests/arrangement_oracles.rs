use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use planar_incidence::arrangement::*;
use planar_incidence::constructions::st_lattice;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Seg = (Point, Point);

fn cross(ax: &Rational, ay: &Rational, bx: &Rational, by: &Rational) -> Rational {
    ax * by - ay * bx
}

/// Intersection of two closed segments: `Err(())` on a collinear overlap of
/// positive length.
fn seg_meet(p: &Seg, q: &Seg) -> Result<Option<Point>, ()> {
    let (rx, ry) = (&p.1.x - &p.0.x, &p.1.y - &p.0.y);
    let (sx, sy) = (&q.1.x - &q.0.x, &q.1.y - &q.0.y);
    let (wx, wy) = (&q.0.x - &p.0.x, &q.0.y - &p.0.y);
    let d = cross(&rx, &ry, &sx, &sy);
    if d.is_zero() {
        if !cross(&wx, &wy, &rx, &ry).is_zero() {
            return Ok(None);
        }
        // collinear: compare x-ranges (segments are x-monotone)
        let lo = p.0.x.clone().max(q.0.x.clone());
        let hi = p.1.x.clone().min(q.1.x.clone());
        return if lo < hi {
            Err(())
        } else if lo == hi {
            Ok(Some(Point::new(lo.clone(), eval_seg(p, &lo))))
        } else {
            Ok(None)
        };
    }
    let t = cross(&wx, &wy, &sx, &sy) / &d;
    let u = cross(&wx, &wy, &rx, &ry) / &d;
    let unit = int(1);
    if t < int(0) || t > unit || u < int(0) || u > unit {
        return Ok(None);
    }
    Ok(Some(Point::new(&p.0.x + &t * &rx, &p.0.y + &t * &ry)))
}

fn eval_seg(p: &Seg, x: &Rational) -> Rational {
    &p.0.y + (&p.1.y - &p.0.y) * (x - &p.0.x) / (&p.1.x - &p.0.x)
}

fn segments(vs: &[Point]) -> Vec<Seg> {
    vs.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

fn eval_chain(vs: &[Point], x: &Rational) -> Option<Rational> {
    segments(vs).iter().find(|s| s.0.x <= *x && *x <= s.1.x).map(|s| eval_seg(s, x))
}

enum PairOutcome {
    Points(BTreeSet<Point>),
    Tangent,
}

/// Brute force over segment pairs, with each meeting point classified by
/// sampling the height difference just left and right of it.
fn oracle(a: &[Point], b: &[Point]) -> PairOutcome {
    let mut pts = BTreeSet::new();
    for s in segments(a) {
        for t in segments(b) {
            match seg_meet(&s, &t) {
                Err(()) => return PairOutcome::Tangent,
                Ok(Some(p)) => {
                    pts.insert(p);
                }
                Ok(None) => {}
            }
        }
    }
    let eps = rat(1, 1000);
    for p in &pts {
        let l = &p.x - &eps;
        let r = &p.x + &eps;
        let dl = eval_chain(a, &l).zip(eval_chain(b, &l)).map(|(u, v)| u - v);
        let dr = eval_chain(a, &r).zip(eval_chain(b, &r)).map(|(u, v)| u - v);
        match (dl, dr) {
            (Some(dl), Some(dr)) if (dl.is_positive() && dr.is_negative()) || (dl.is_negative() && dr.is_positive()) => {}
            _ => return PairOutcome::Tangent,
        }
    }
    PairOutcome::Points(pts)
}

fn random_chain(rng: &mut ChaCha8Rng) -> Vec<Point> {
    let mut xs: BTreeSet<i64> = BTreeSet::new();
    while xs.len() < 4 {
        xs.insert(rng.gen_range(0..8));
    }
    xs.into_iter().map(|x| Point::from_ints(x, rng.gen_range(-4..5))).collect()
}

#[test]
fn intersections_agree_with_segment_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut agreed, mut tangent, mut violations) = (0, 0, 0);
    for _ in 0..300 {
        let chains: Vec<Vec<Point>> = (0..3).map(|_| random_chain(&mut rng)).collect();
        let curves: Vec<Curve> = chains.iter().map(|c| Curve::polyline(c.clone()).unwrap()).collect();
        let k = 2;
        // expected outcome of the first offending pair, in pair order
        let mut expected: Result<Vec<(usize, usize, Point)>, &str> = Ok(Vec::new());
        'pairs: for i in 0..3 {
            for j in i + 1..3 {
                match oracle(&chains[i], &chains[j]) {
                    PairOutcome::Tangent => {
                        expected = Err("tangent");
                        break 'pairs;
                    }
                    PairOutcome::Points(p) if p.len() > k => {
                        expected = Err("violation");
                        break 'pairs;
                    }
                    PairOutcome::Points(p) => {
                        if let Ok(v) = expected.as_mut() {
                            v.extend(p.into_iter().map(|q| (i, j, q)));
                        }
                    }
                }
            }
        }
        match (validate_k_intersecting(&curves, k), expected) {
            (Ok(found), Ok(want)) => {
                let got: Vec<(usize, usize, Point)> =
                    found.into_iter().map(|c| (c.curves.0, c.curves.1, c.point)).collect();
                assert_eq!(got, want);
                agreed += 1;
            }
            (Err(ArrangementError::TangencyUnsupported { .. }), Err("tangent")) => tangent += 1,
            (Err(ArrangementError::KViolation { witnesses, .. }), Err("violation")) => {
                assert_eq!(witnesses.len(), k + 1);
                violations += 1;
            }
            (got, want) => panic!("mismatch: {got:?} vs {want:?}"),
        }
    }
    assert!(agreed > 0 && tangent > 0 && violations > 0, "{agreed} {tangent} {violations}");
}

#[test]
fn lattice_sub_arrangement_matches_recount() {
    let lattice = st_lattice(64).unwrap();
    let all = lattice.geometric_lines(true);
    let chosen = [3usize, 17, 22, 40, 49, 63];
    let curves: Vec<Curve> = chosen.iter().map(|&l| all[l].clone()).collect();
    let points: Vec<Point> = lattice
        .geometric_points()
        .into_iter()
        .filter(|p| chosen.iter().any(|&l| {
            let (a, b) = lattice.line(l);
            p.y == int(a as i64) * &p.x + int(b as i64)
        }))
        .collect();
    let arr = build_arrangement_graph(&points, &curves, 1).unwrap();

    // recount: stations per curve are its points plus its segment crossings
    let chains: Vec<Vec<Point>> = curves
        .iter()
        .map(|c| match c {
            Curve::Polyline { polyline } => polyline.clone(),
            Curve::Line { .. } => unreachable!(),
        })
        .collect();
    let mut vertices: BTreeSet<Point> = points.iter().cloned().collect();
    let mut stations: Vec<BTreeSet<Point>> = vec![BTreeSet::new(); curves.len()];
    for (c, chain) in chains.iter().enumerate() {
        for p in &points {
            if eval_chain(chain, &p.x).as_ref() == Some(&p.y) {
                stations[c].insert(p.clone());
            }
        }
    }
    for i in 0..chains.len() {
        for j in i + 1..chains.len() {
            let PairOutcome::Points(pts) = oracle(&chains[i], &chains[j]) else { panic!("lattice lines cross properly") };
            for p in pts {
                stations[i].insert(p.clone());
                stations[j].insert(p.clone());
                vertices.insert(p);
            }
        }
    }
    let edges: usize = stations.iter().map(|s| s.len() + 1).sum();
    assert_eq!(arr.real_vertex_count(), vertices.len());
    assert_eq!(arr.graph.edge_count(), edges);
    assert_eq!(arr.graph.vertex_count(), vertices.len() + 2 * curves.len());
    for v in 0..arr.graph.vertex_count() {
        match arr.kind[v] {
            VertexKind::Crossing => assert_eq!(arr.graph.degree(v), 4),
            VertexKind::Point(i) => {
                let through = stations.iter().filter(|s| s.contains(&points[i])).count();
                assert_eq!(arr.graph.degree(v), 2 * through);
            }
            VertexKind::Synthetic => assert_eq!(arr.graph.degree(v), 1),
            VertexKind::Gadget { .. } => unreachable!(),
        }
    }
    let per_curve: usize = (0..curves.len()).map(|c| arr.edge_curve.iter().filter(|&&e| e == Some(c)).count()).sum();
    assert_eq!(per_curve, arr.graph.edge_count());
    assert!(arr.graph.euler_holds());
}

#[test]
fn truncation_matches_degree_oracle() {
    let lattice = st_lattice(512).unwrap();
    let pts = lattice.geometric_points();
    let lines: Vec<(i64, i64)> = (0..lattice.size()).map(|l| {
        let (a, b) = lattice.line(l);
        (a as i64, b as i64)
    }).collect();
    let degrees: Vec<usize> = (0..lattice.size())
        .map(|p| {
            let (x, y) = lattice.point(p);
            lines.iter().filter(|&&(a, b)| y as i64 == a * x as i64 + b).count()
        })
        .collect();
    let ell = 8;
    let t = high_degree_truncation(&point_degrees(&pts, &lattice.geometric_lines(false)), lattice.size(), ell, 1, 1.0);
    let q: Vec<usize> = (0..lattice.size()).filter(|&p| degrees[p] >= ell).collect();
    assert_eq!(t.high, q);
    assert_eq!(t.removed_incidences, q.iter().map(|&p| degrees[p]).sum::<usize>());
    assert_eq!(t.high.len() + t.kept.len(), lattice.size());
}

fn random_marked_arrangement(rng: &mut ChaCha8Rng) -> (ArrangementGraph, Vec<Point>, Vec<Curve>) {
    loop {
        let count = rng.gen_range(1..6);
        let mut seen = BTreeSet::new();
        let curves: Vec<Curve> = (0..count)
            .filter_map(|_| {
                let (a, b) = (rng.gen_range(-3..4), rng.gen_range(-3..4));
                seen.insert((a, b)).then(|| Curve::line(int(a), int(b)))
            })
            .collect();
        let Ok(crossings) = validate_k_intersecting(&curves, 1) else { continue };
        let mut points: BTreeSet<Point> = crossings.into_iter().map(|c| c.point).collect();
        // one extra point on the first line
        let x = int(rng.gen_range(-5..6));
        points.insert(Point::new(x.clone(), curves[0].eval(&x)));
        let points: Vec<Point> = points.into_iter().collect();
        if let Ok(arr) = build_arrangement_graph(&points, &curves, 1) {
            return (arr, points, curves);
        }
    }
}

#[test]
fn gadget_adds_two_w_degree_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (arr, points, curves) = random_marked_arrangement(&mut rng);
        let i = rng.gen_range(0..points.len());
        let p = arr.point_vertex(i).unwrap();
        let w = rng.gen_range(1..5);
        let through = curves.iter().filter(|c| c.contains(&points[i])).count();
        let gd = add_nested_cycles(&arr, p, w).unwrap();
        let g = &gd.arrangement.graph;
        assert_eq!(g.vertex_count(), arr.graph.vertex_count() + 2 * w * through);
        assert_eq!(g.edge_count(), arr.graph.edge_count() + 4 * w * through);
        assert!(g.euler_holds());
        assert!(g.check_invariants().is_ok());
        assert_eq!(gd.cycles.len(), w);
        for cycle in &gd.cycles {
            assert_eq!(cycle.len(), 2 * through);
            for j in 0..cycle.len() {
                let (u, v) = (cycle[j], cycle[(j + 1) % cycle.len()]);
                assert!(g.edges().iter().enumerate().any(|(e, &[a, b])| {
                    gd.arrangement.edge_curve[e].is_none() && ((a, b) == (u, v) || (a, b) == (v, u))
                }));
            }
        }
    }
}

#[test]
fn gadget_faces_between_cycles() {
    // two lines through the origin, three cycles
    let curves = [Curve::line(int(1), int(0)), Curve::line(int(-1), int(0))];
    let arr = build_arrangement_graph(&[Point::from_ints(0, 0)], &curves, 1).unwrap();
    let gd = add_nested_cycles(&arr, 0, 3).unwrap();
    let g = &gd.arrangement.graph;
    assert_eq!(g.vertex_count(), arr.graph.vertex_count() + 12);
    let ring: Vec<BTreeSet<usize>> = gd.cycles.iter().map(|c| c.iter().copied().collect()).collect();
    let faces = g.faces();
    for i in 0..2 {
        let between: Vec<usize> = faces
            .walks
            .iter()
            .filter(|w| {
                let vs: BTreeSet<usize> = w.darts.iter().map(|&d| g.origin(d)).collect();
                vs.iter().all(|v| ring[i].contains(v) || ring[i + 1].contains(v))
            })
            .map(|w| w.size())
            .collect();
        // four quadrilaterals, one per sector, whose sizes sum to 16
        assert_eq!(between, vec![4, 4, 4, 4]);
    }
    assert!(matches!(add_nested_cycles(&arr, 1, 1), Err(GadgetError::NotMarked(1))));
}

fn item(x: i64, kind: CurveItemKind) -> CurveItem {
    CurveItem { position: int(x), kind }
}

#[test]
fn block_examples() {
    let seven: Vec<CurveItem> = (0..7).map(|i| item(i, CurveItemKind::Point { id: i as usize + 1, part: 0 })).collect();
    let bp = block_partition(&seven, 3).unwrap();
    let blocks: Vec<Vec<usize>> = bp.blocks.iter().map(|b| b.points.clone()).collect();
    assert_eq!(blocks, vec![vec![1, 2, 3], vec![4, 5, 6]]);
    assert_eq!(bp.discarded.len(), 1);

    let mut split = seven.clone();
    split.insert(4, item(100, CurveItemKind::Boundary(99)));
    for (i, it) in split.iter_mut().enumerate() {
        it.position = int(i as i64);
    }
    let bp = block_partition(&split, 3).unwrap();
    let blocks: Vec<Vec<usize>> = bp.blocks.iter().map(|b| b.points.clone()).collect();
    assert_eq!(blocks, vec![vec![1, 2, 3], vec![5, 6, 7]]);
    assert_eq!(bp.discarded, vec![4]);
}

#[test]
fn random_blocks_respect_discard_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let s = rng.gen_range(1..6);
        let subarcs = rng.gen_range(1..6);
        let mut items = Vec::new();
        let mut runs = Vec::new();
        let mut id = 0;
        for a in 0..subarcs {
            if a > 0 {
                items.push(item(items.len() as i64, CurveItemKind::Boundary(1000 + a)));
            }
            let part = rng.gen_range(0..3);
            let len = rng.gen_range(0..12);
            runs.push(len);
            for _ in 0..len {
                items.push(item(items.len() as i64, CurveItemKind::Point { id, part }));
                id += 1;
            }
        }
        let bp = block_partition(&items, s).unwrap();
        let b = subarcs - 1;
        assert_eq!(bp.boundary_count, b);
        assert_eq!(bp.discarded.len(), runs.iter().map(|l| l % s).sum::<usize>());
        assert_eq!(bp.blocks.len(), runs.iter().map(|l| l / s).sum::<usize>());
        assert!(bp.discarded.len() <= s * (b + 1));
        // no block crosses a boundary vertex or mixes parts
        for blk in &bp.blocks {
            let pos: Vec<usize> = blk
                .points
                .iter()
                .map(|p| items.iter().position(|it| it.kind == CurveItemKind::Point { id: *p, part: blk.part }).unwrap())
                .collect();
            let (lo, hi) = (pos[0], pos[pos.len() - 1]);
            assert!(items[lo..=hi].iter().all(|it| matches!(it.kind, CurveItemKind::Point { part, .. } if part == blk.part)));
        }
    }
    let bad = vec![item(2, CurveItemKind::Boundary(0)), item(1, CurveItemKind::Boundary(1))];
    assert_eq!(block_partition(&bad, 2), Err(BlockError::UnorderedInput(0, 1)));
}
