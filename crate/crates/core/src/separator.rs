//! Weighted simple-cycle separators on triangulated embeddings.
//!
//! Candidates are fundamental cycles of BFS spanning trees. The cotree of a
//! spanning tree is a spanning tree of the dual; rooting it at the outer
//! face, the inside of the fundamental cycle of a non-tree edge is the dual
//! subtree hanging below that edge. Every vertex parks its weight on one
//! designated corner, so subtree sums give the inside weight up to a
//! correction for the cycle's own vertices.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planar::{Dart, EmbeddedGraph, SimpleCycle, VertexId};

/// Nonnegative rational vertex weights sharing one denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    numerators: Vec<u64>,
    denominator: u64,
}

impl WeightAssignment {
    pub fn new(numerators: Vec<u64>, denominator: u64) -> Self {
        assert!(denominator > 0, "weight denominator must be positive");
        WeightAssignment { numerators, denominator }
    }

    pub fn unit(n: usize) -> Self {
        Self::new(vec![1; n], 1)
    }

    /// Weight one on the listed vertices, zero elsewhere.
    pub fn indicator(n: usize, vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut w = vec![0; n];
        for v in vertices {
            w[v] = 1;
        }
        Self::new(w, 1)
    }

    pub fn numerator(&self, v: VertexId) -> u64 {
        self.numerators[v]
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    /// Total weight numerator (over `denominator`).
    pub fn total(&self) -> u128 {
        self.numerators.iter().map(|&w| w as u128).sum()
    }
}

/// Balance ratio `num / den`; each strict side may hold at most this share.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Balance {
    pub num: u64,
    pub den: u64,
}

impl Balance {
    pub const THREE_QUARTERS: Balance = Balance { num: 3, den: 4 };

    pub fn admits(&self, side: u128, total: u128) -> bool {
        side * self.den as u128 <= total * self.num as u128
    }
}

impl Default for Balance {
    fn default() -> Self {
        Balance::THREE_QUARTERS
    }
}

impl std::fmt::Display for Balance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatorConfig {
    pub balance: Balance,
    /// Seeded random BFS roots tried besides the double-sweep centre.
    pub extra_roots: usize,
    pub seed: u64,
}

impl Default for SeparatorConfig {
    fn default() -> Self {
        SeparatorConfig { balance: Balance::THREE_QUARTERS, extra_roots: 2, seed: 0 }
    }
}

/// Default ceiling for `|C| / sqrt(N)`.
pub const DEFAULT_LENGTH_CEILING: f64 = 8.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeparatorError {
    #[error("face {face} has size {size}; faces must have size 2 or 3")]
    NotTriangulated { face: usize, size: usize },
    #[error("total weight is zero")]
    ZeroTotalWeight,
    #[error("graph has {0} vertices; at least 3 are required")]
    TooSmall(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no designated outer face")]
    NoOuterFace,
    #[error("weight vector has {got} entries for {expected} vertices")]
    WeightLength { expected: usize, got: usize },
    #[error("no fundamental cycle meets the balance requirement")]
    NoBalancedCycle,
}

/// A separating cycle with its exact side weights (numerators over the
/// weight denominator).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub cycle: SimpleCycle,
    pub root: VertexId,
    pub inside: u128,
    pub outside: u128,
    pub on: u128,
}

impl Separator {
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }
}

/// Finds a simple cycle whose strict inside and strict outside each carry
/// at most `balance * W`. Among the candidates the shortest wins, then the
/// smaller root id, then the smaller edge id.
pub fn cycle_separator(
    g: &EmbeddedGraph,
    w: &WeightAssignment,
    cfg: &SeparatorConfig,
) -> Result<Separator, SeparatorError> {
    let mut found = balanced_cycles(g, w, cfg, 1)?;
    Ok(found.remove(0))
}

/// Up to `limit` balanced fundamental cycles in preference order.
pub fn balanced_cycles(
    g: &EmbeddedGraph,
    w: &WeightAssignment,
    cfg: &SeparatorConfig,
    limit: usize,
) -> Result<Vec<Separator>, SeparatorError> {
    let n = g.vertex_count();
    if w.len() != n {
        return Err(SeparatorError::WeightLength { expected: n, got: w.len() });
    }
    if n < 3 {
        return Err(SeparatorError::TooSmall(n));
    }
    if !g.is_connected() {
        return Err(SeparatorError::Disconnected);
    }
    let outer = g.outer_dart().ok_or(SeparatorError::NoOuterFace)?;
    let faces = g.faces();
    if let Some((face, walk)) = faces.walks.iter().enumerate().find(|(_, w)| w.size() > 3) {
        return Err(SeparatorError::NotTriangulated { face, size: walk.size() });
    }
    if w.total() == 0 {
        return Err(SeparatorError::ZeroTotalWeight);
    }

    let ctx = Context { g, w, faces: &faces, outer_face: faces.of_dart[outer.0], balance: cfg.balance };
    let roots = initial_roots(g, cfg);
    let mut found = Vec::new();
    for &root in &roots {
        found.extend(ctx.candidates_from_root(root, limit));
    }
    if found.is_empty() {
        for root in 0..n {
            if roots.contains(&root) {
                continue;
            }
            found.extend(ctx.candidates_from_root(root, limit));
            if !found.is_empty() {
                break;
            }
        }
    }
    if found.is_empty() {
        return Err(SeparatorError::NoBalancedCycle);
    }
    found.sort_by_key(|(key, _)| *key);
    found.truncate(limit);
    Ok(found.into_iter().map(|(_, s)| s).collect())
}

fn initial_roots(g: &EmbeddedGraph, cfg: &SeparatorConfig) -> Vec<VertexId> {
    let n = g.vertex_count();
    let first = bfs(g, 0);
    let a = farthest(&first.depth);
    let from_a = bfs(g, a);
    let b = farthest(&from_a.depth);
    // walk from b halfway back to a
    let mut centre = b;
    for _ in 0..from_a.depth[b] / 2 {
        centre = g.origin(from_a.parent[centre].expect("non-root has a parent"));
    }
    let mut roots = vec![centre];
    if cfg.extra_roots > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut all: Vec<VertexId> = (0..n).filter(|&v| v != centre).collect();
        all.shuffle(&mut rng);
        roots.extend(all.into_iter().take(cfg.extra_roots));
    }
    roots
}

fn farthest(depth: &[usize]) -> VertexId {
    let max = *depth.iter().max().expect("nonempty graph");
    depth.iter().position(|&d| d == max).unwrap()
}

struct Bfs {
    depth: Vec<usize>,
    /// Dart from the parent into the vertex.
    parent: Vec<Option<Dart>>,
    order: Vec<VertexId>,
}

fn bfs(g: &EmbeddedGraph, root: VertexId) -> Bfs {
    let n = g.vertex_count();
    let mut depth = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    let mut order = Vec::with_capacity(n);
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &d in g.rotation(v) {
            let u = g.head(d);
            if depth[u] == usize::MAX {
                depth[u] = depth[v] + 1;
                parent[u] = Some(d);
                queue.push_back(u);
            }
        }
    }
    Bfs { depth, parent, order }
}

struct Context<'a> {
    g: &'a EmbeddedGraph,
    w: &'a WeightAssignment,
    faces: &'a crate::planar::Faces,
    outer_face: usize,
    balance: Balance,
}

type CandidateKey = (usize, VertexId, usize);

impl Context<'_> {
    fn candidates_from_root(&self, root: VertexId, limit: usize) -> Vec<(CandidateKey, Separator)> {
        let g = self.g;
        let n = g.vertex_count();
        let tree = bfs(g, root);
        let mut is_tree = vec![false; g.edge_count()];
        for d in tree.parent.iter().flatten() {
            is_tree[d.edge()] = true;
        }

        // dual spanning tree over non-tree edges, rooted at the outer face
        let nf = self.faces.len();
        let mut dual_parent = vec![usize::MAX; nf];
        let mut order = Vec::with_capacity(nf);
        let mut seen = vec![false; nf];
        seen[self.outer_face] = true;
        let mut queue = VecDeque::from([self.outer_face]);
        while let Some(f) = queue.pop_front() {
            order.push(f);
            for &d in &self.faces.walks[f].darts {
                if is_tree[d.edge()] {
                    continue;
                }
                let h = self.faces.of_dart[d.twin().0];
                if !seen[h] {
                    seen[h] = true;
                    dual_parent[h] = f;
                    queue.push_back(h);
                }
            }
        }
        debug_assert_eq!(order.len(), nf, "cotree must span the dual");

        // designated corner of v: the corner after rotation(v)[0], which lies
        // in the face of its twin
        let corner_face = |v: VertexId| self.faces.of_dart[g.rotation(v)[0].twin().0];
        let mut sum = vec![0u128; nf];
        for v in 0..n {
            sum[corner_face(v)] += self.w.numerator(v) as u128;
        }
        for &f in order.iter().rev() {
            if dual_parent[f] != usize::MAX {
                let p = dual_parent[f];
                sum[p] += sum[f];
            }
        }
        // Euler-tour intervals for subtree membership
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); nf];
        for &f in &order {
            if dual_parent[f] != usize::MAX {
                children[dual_parent[f]].push(f);
            }
        }
        let mut tin = vec![0usize; nf];
        let mut tout = vec![0usize; nf];
        let mut clock = 0;
        let mut stack = vec![(self.outer_face, 0usize)];
        while let Some((f, i)) = stack.pop() {
            if i == 0 {
                tin[f] = clock;
                clock += 1;
            }
            if i < children[f].len() {
                stack.push((f, i + 1));
                stack.push((children[f][i], 0));
            } else {
                tout[f] = clock;
            }
        }
        let in_subtree = |f: usize, c: usize| tin[c] <= tin[f] && tin[f] < tout[c];

        let lift = Lifting::new(&tree, g);
        let total = self.w.total();
        let bound = |x: u128| self.balance.admits(x, total);

        let max_weight = self.max_weight();
        let mut shortlist: Vec<(usize, usize, usize)> = Vec::new();
        for e in 0..g.edge_count() {
            if is_tree[e] {
                continue;
            }
            let [x, y] = g.endpoints(e);
            let (fa, fb) = (self.faces.of_dart[2 * e], self.faces.of_dart[2 * e + 1]);
            let child = if dual_parent[fa] == fb { fa } else { fb };
            debug_assert_eq!(dual_parent[child], if child == fa { fb } else { fa });
            let s = sum[child];
            let loose = (tree.depth[x] + tree.depth[y] + 1) as u128 * max_weight;
            // necessary conditions; the exact test follows
            if !bound(s.saturating_sub(loose)) || !bound((total - s).saturating_sub(loose)) {
                continue;
            }
            let l = lift.lca(x, y);
            let len = tree.depth[x] + tree.depth[y] - 2 * tree.depth[l] + 1;
            shortlist.push((len, e, child));
        }
        shortlist.sort_unstable();

        let mut out = Vec::new();
        for (len, e, child) in shortlist {
            let [x, y] = g.endpoints(e);
            let l = lift.lca(x, y);
            // cycle: x -> y along e, y up to lca, lca down to x
            let mut darts = Vec::with_capacity(len);
            darts.push(Dart::forward(e));
            let mut v = y;
            while v != l {
                let d = tree.parent[v].unwrap();
                darts.push(d.twin());
                v = g.origin(d);
            }
            let mut down = Vec::new();
            let mut v = x;
            while v != l {
                let d = tree.parent[v].unwrap();
                down.push(d);
                v = g.origin(d);
            }
            darts.extend(down.into_iter().rev());
            debug_assert_eq!(darts.len(), len);

            let mut on = 0u128;
            let mut parked = 0u128;
            for &d in &darts {
                let v = g.origin(d);
                let wv = self.w.numerator(v) as u128;
                on += wv;
                if in_subtree(corner_face(v), child) {
                    parked += wv;
                }
            }
            let inside = sum[child] - parked;
            let outside = total - inside - on;
            if bound(inside) && bound(outside) {
                out.push((
                    (len, root, e),
                    Separator { cycle: SimpleCycle { darts }, root, inside, outside, on },
                ));
                if out.len() >= limit {
                    break;
                }
            }
        }
        out
    }

    fn max_weight(&self) -> u128 {
        (0..self.w.len()).map(|v| self.w.numerator(v) as u128).max().unwrap_or(0)
    }
}

/// Binary-lifting ancestor table over a BFS tree.
struct Lifting {
    up: Vec<Vec<VertexId>>,
    depth: Vec<usize>,
}

impl Lifting {
    fn new(tree: &Bfs, g: &EmbeddedGraph) -> Self {
        let n = tree.depth.len();
        let mut levels = 1;
        while (1usize << levels) < n.max(2) {
            levels += 1;
        }
        let mut up = vec![vec![0; n]; levels];
        for &v in &tree.order {
            up[0][v] = tree.parent[v].map_or(v, |d| g.origin(d));
        }
        for k in 1..levels {
            for v in 0..n {
                up[k][v] = up[k - 1][up[k - 1][v]];
            }
        }
        Lifting { up, depth: tree.depth.clone() }
    }

    fn lca(&self, mut a: VertexId, mut b: VertexId) -> VertexId {
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let mut diff = self.depth[a] - self.depth[b];
        let mut k = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                a = self.up[k][a];
            }
            diff >>= 1;
            k += 1;
        }
        if a == b {
            return a;
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][a] != self.up[k][b] {
                a = self.up[k][a];
                b = self.up[k][b];
            }
        }
        self.up[0][a]
    }
}

/// Independent post-condition checker: simplicity and adjacency, exact
/// two-sided balance from a dual BFS, and the length ceiling.
pub fn check_separator(
    g: &EmbeddedGraph,
    w: &WeightAssignment,
    cycle: &SimpleCycle,
    balance: Balance,
    length_ceiling: f64,
) -> Result<(u128, u128), String> {
    let cls = crate::planar::classify_sides(g, cycle).map_err(|e| e.to_string())?;
    let faces = g.faces();
    let (mut inside, mut outside) = (0u128, 0u128);
    for v in 0..g.vertex_count() {
        match cls.vertex_strictly_inside(g, &faces.of_dart, v) {
            Some(true) => inside += w.numerator(v) as u128,
            Some(false) => outside += w.numerator(v) as u128,
            None => {}
        }
    }
    let total = w.total();
    if !balance.admits(inside, total) {
        return Err(format!("inside weight {inside} exceeds {balance} of {total}"));
    }
    if !balance.admits(outside, total) {
        return Err(format!("outside weight {outside} exceeds {balance} of {total}"));
    }
    let ratio = cycle.len() as f64 / (g.vertex_count() as f64).sqrt();
    if ratio > length_ceiling {
        return Err(format!("|C|/sqrt(N) = {ratio:.3} exceeds {length_ceiling:.3}"));
    }
    Ok((inside, outside))
}
