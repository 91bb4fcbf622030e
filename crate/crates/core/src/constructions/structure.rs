use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Geometric,
    CombinatorialAfterDeletion,
}

/// Points `0..point_count` and curves given as their incident points in
/// along-curve order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceStructure {
    pub point_count: usize,
    pub curves: Vec<Vec<usize>>,
    pub k: usize,
    pub provenance: Provenance,
}

/// Two curves sharing more than `k` points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedPoints {
    pub curves: (usize, usize),
    pub points: Vec<usize>,
}

impl IncidenceStructure {
    pub fn incidence_count(&self) -> usize {
        self.curves.iter().map(Vec::len).sum()
    }

    /// Curves through each point, ascending.
    pub fn curves_through(&self) -> Vec<Vec<usize>> {
        let mut through = vec![Vec::new(); self.point_count];
        for (c, pts) in self.curves.iter().enumerate() {
            for &p in pts {
                through[p].push(c);
            }
        }
        through
    }

    /// First pair of curves (in lexicographic order) sharing more than `k`
    /// points.
    pub fn k_violation(&self) -> Option<SharedPoints> {
        let mut shared: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (p, cs) in self.curves_through().iter().enumerate() {
            for (i, &a) in cs.iter().enumerate() {
                for &b in &cs[i + 1..] {
                    shared.entry((a, b)).or_default().push(p);
                }
            }
        }
        shared
            .into_iter()
            .filter(|(_, pts)| pts.len() > self.k)
            .min_by_key(|(pair, _)| *pair)
            .map(|(curves, points)| SharedPoints { curves, points })
    }

    /// Adjacency of the graph joining two points when some curve holds both.
    pub fn co_curve_graph(&self) -> Vec<FixedBitSet> {
        let mut adj = vec![FixedBitSet::with_capacity(self.point_count); self.point_count];
        for pts in &self.curves {
            for (i, &u) in pts.iter().enumerate() {
                for &v in &pts[i + 1..] {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
        }
        adj
    }
}
