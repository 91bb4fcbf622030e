use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::Lattice;

/// Graph on the lattice points joining two points on a common line. Each
/// line contributes a clique on its points; `lines` keeps those cliques.
#[derive(Clone, Debug)]
pub struct PointGraph {
    pub lines: Vec<Vec<usize>>,
    pub adj: Vec<FixedBitSet>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointGraphStats {
    pub n: u64,
    pub max_degree: usize,
    /// `n^(2/3)`.
    pub degree_bound: u64,
    pub degree_ok: bool,
    pub max_codegree: usize,
    pub codegree_pair: (usize, usize),
    /// `slack * n^(1/3) * log2(n)^power`.
    pub codegree_ceiling: f64,
    pub codegree_ok: bool,
}

pub fn point_graph(lattice: &Lattice) -> PointGraph {
    let st = lattice.structure();
    let adj = st.co_curve_graph();
    PointGraph { lines: st.curves, adj }
}

impl PointGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn codegree(&self, u: usize, v: usize) -> usize {
        self.adj[u].intersection_count(&self.adj[v])
    }

    /// Largest codegree over all pairs of distinct vertices, with the
    /// lexicographically first pair attaining it.
    pub fn max_codegree(&self) -> (usize, (usize, usize)) {
        let n = self.vertex_count();
        (0..n)
            .into_par_iter()
            .map(|u| {
                let mut best = (0, (u, u));
                for v in u + 1..n {
                    let c = self.codegree(u, v);
                    if c > best.0 {
                        best = (c, (u, v));
                    }
                }
                best
            })
            .reduce(|| (0, (usize::MAX, usize::MAX)), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
    }

    pub fn stats(&self, lattice: &Lattice, slack: f64, log_power: f64) -> PointGraphStats {
        let max_degree = (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0);
        let degree_bound = lattice.m * lattice.m;
        let (max_codegree, codegree_pair) =
            if self.vertex_count() < 2 { (0, (0, 0)) } else { self.max_codegree() };
        let n = lattice.n as f64;
        let codegree_ceiling = slack * lattice.m as f64 * n.log2().powf(log_power);
        PointGraphStats {
            n: lattice.n,
            max_degree,
            degree_bound,
            degree_ok: max_degree as u64 <= degree_bound,
            max_codegree,
            codegree_pair,
            codegree_ceiling,
            codegree_ok: max_codegree as f64 <= codegree_ceiling,
        }
    }
}
