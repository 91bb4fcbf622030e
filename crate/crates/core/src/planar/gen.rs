//! Graph families used by tests, benchmarks, and the CLI.

use std::cmp::Ordering;

use rand::Rng;

use super::graph::{Dart, EmbeddedGraph, VertexId};

/// Counterclockwise angular order of direction vectors, starting at +x.
pub fn cmp_direction(a: (i64, i64), b: (i64, i64)) -> Ordering {
    let half = |(x, y): (i64, i64)| if y > 0 || (y == 0 && x > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
        0.cmp(&cross)
    })
}

/// Embeds a straight-line drawing. The outer face is the face walk with
/// the largest signed area (face walks keep their face on the right, so
/// bounded faces have negative area).
pub fn from_straight_line(coords: &[(i64, i64)], edges: &[[VertexId; 2]]) -> EmbeddedGraph {
    let n = coords.len();
    let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &[u, v]) in edges.iter().enumerate() {
        rotations[u].push(e);
        rotations[v].push(e);
    }
    for (v, rot) in rotations.iter_mut().enumerate() {
        rot.sort_by(|&e, &f| {
            let dir = |e: usize| {
                let w = if edges[e][0] == v { edges[e][1] } else { edges[e][0] };
                (coords[w].0 - coords[v].0, coords[w].1 - coords[v].1)
            };
            cmp_direction(dir(e), dir(f)).then(e.cmp(&f))
        });
    }
    let mut g = EmbeddedGraph::build(n, edges.to_vec(), rotations).expect("straight-line drawing is a valid embedding");
    let faces = g.faces();
    let area = |darts: &[Dart]| -> i128 {
        darts
            .iter()
            .map(|&d| {
                let (a, b) = (coords[g.origin(d)], coords[g.head(d)]);
                a.0 as i128 * b.1 as i128 - b.0 as i128 * a.1 as i128
            })
            .sum()
    };
    if let Some((id, _)) = faces.walks.iter().enumerate().max_by_key(|(i, w)| (area(&w.darts), std::cmp::Reverse(*i))) {
        g.set_outer_face(id).expect("face exists");
    }
    g
}

pub fn grid_coords(rows: usize, cols: usize) -> Vec<(i64, i64)> {
    (0..rows).flat_map(|r| (0..cols).map(move |c| (c as i64, r as i64))).collect()
}

fn grid_edges(rows: usize, cols: usize) -> Vec<[VertexId; 2]> {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push([id(r, c), id(r, c + 1)]);
            }
            if r + 1 < rows {
                edges.push([id(r, c), id(r + 1, c)]);
            }
        }
    }
    edges
}

/// `rows x cols` grid; vertex `r * cols + c` sits at `(c, r)`.
pub fn grid(rows: usize, cols: usize) -> EmbeddedGraph {
    from_straight_line(&grid_coords(rows, cols), &grid_edges(rows, cols))
}

/// Grid with the diagonal from `(c, r)` to `(c + 1, r + 1)` in every cell.
pub fn triangulated_grid(rows: usize, cols: usize) -> EmbeddedGraph {
    let mut edges = grid_edges(rows, cols);
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            edges.push([r * cols + c, (r + 1) * cols + c + 1]);
        }
    }
    from_straight_line(&grid_coords(rows, cols), &edges)
}

/// Convex polygon on `n >= 3` vertices.
pub fn cycle(n: usize) -> EmbeddedGraph {
    let coords: Vec<(i64, i64)> = (0..n as i64).map(|i| (i, i * i)).collect();
    let edges: Vec<[VertexId; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
    from_straight_line(&coords, &edges)
}

pub fn path(n: usize) -> EmbeddedGraph {
    let coords: Vec<(i64, i64)> = (0..n as i64).map(|i| (i, 0)).collect();
    let edges: Vec<[VertexId; 2]> = (0..n.saturating_sub(1)).map(|i| [i, i + 1]).collect();
    from_straight_line(&coords, &edges)
}

/// Random triangulation: a `k x k` grid with a random diagonal in every
/// cell, followed by `extra` stacked vertices inserted into uniformly chosen
/// inner triangles.
pub fn random_triangulation<R: Rng>(k: usize, extra: usize, rng: &mut R) -> EmbeddedGraph {
    let mut edges = grid_edges(k, k);
    for r in 0..k - 1 {
        for c in 0..k - 1 {
            if rng.gen_bool(0.5) {
                edges.push([r * k + c, (r + 1) * k + c + 1]);
            } else {
                edges.push([r * k + c + 1, (r + 1) * k + c]);
            }
        }
    }
    let mut g = from_straight_line(&grid_coords(k, k), &edges);
    for _ in 0..extra {
        let faces = g.faces();
        let outer = g.outer_face(&faces);
        let inner: Vec<usize> = (0..faces.len()).filter(|&f| Some(f) != outer && faces.walks[f].size() == 3).collect();
        let f = inner[rng.gen_range(0..inner.len())];
        stack_vertex(&mut g, &faces.walks[f].darts);
    }
    g
}

/// Inserts a new vertex into the triangular face with walk `tri` and joins
/// it to the three corners.
pub fn stack_vertex(g: &mut EmbeddedGraph, tri: &[Dart]) -> VertexId {
    assert_eq!(tri.len(), 3);
    let (h0, h1, h2) = (tri[0], tri[1], tri[2]);
    let (a, b, c) = (g.origin(h0), g.origin(h1), g.origin(h2));
    let x = g.add_vertex();
    let ea = g.add_edge(a, Some(h2.twin()), x, None);
    let xa = Dart(2 * ea + 1);
    let eb = g.add_edge(b, Some(h0.twin()), x, Some(xa));
    let _ = eb;
    g.add_edge(c, Some(h1.twin()), x, Some(xa));
    x
}

/// Adds a parallel copy of edge `e`, forming a digon face with it.
pub fn add_parallel(g: &mut EmbeddedGraph, e: usize) -> usize {
    let d = Dart::forward(e);
    let [u, v] = g.endpoints(e);
    let prev_at_v = g.rot_prev(d.twin());
    g.add_edge(u, Some(d), v, Some(prev_at_v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grid_3x3_faces() {
        let g = grid(3, 3);
        let f = g.faces();
        assert_eq!(f.len(), 5);
        let outer = g.outer_face(&f).unwrap();
        assert_eq!(f.walks[outer].size(), 8);
        assert_eq!(f.walks.iter().filter(|w| w.size() == 4).count(), 4);
    }

    #[test]
    fn triangulated_grid_inner_faces_are_triangles() {
        let g = triangulated_grid(4, 4);
        let f = g.faces();
        let outer = g.outer_face(&f).unwrap();
        assert_eq!(f.walks[outer].size(), 12);
        assert!(f.walks.iter().enumerate().all(|(i, w)| i == outer || w.size() == 3));
        assert_eq!(f.len(), 2 * 9 + 1);
    }

    #[test]
    fn stacking_keeps_triangles() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_triangulation(6, 20, &mut rng);
        assert_eq!(g.vertex_count(), 56);
        assert!(g.euler_holds());
        let f = g.faces();
        let outer = g.outer_face(&f).unwrap();
        assert!(f.walks.iter().enumerate().all(|(i, w)| i == outer || w.size() == 3));
    }

    #[test]
    fn parallel_edge_makes_digon() {
        let mut g = triangulated_grid(3, 3);
        let before = g.faces().len();
        add_parallel(&mut g, 0);
        let f = g.faces();
        assert_eq!(f.len(), before + 1);
        assert_eq!(f.walks.iter().filter(|w| w.size() == 2).count(), 1);
        assert!(g.euler_holds());
    }
}
