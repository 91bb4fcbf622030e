use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::Block;

use super::structure::IncidenceStructure;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("tuple {tuple:?} is covered by curves {} and {}", curves.0, curves.1)]
    DisjointnessViolation { tuple: Vec<usize>, curves: (usize, usize) },
    #[error("block on curve {curve} has {len} points, expected {s}")]
    BlockSize { curve: usize, len: usize, s: usize },
}

/// Complete `(k+1)`-uniform hypergraph planted on one block of one curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedCopy {
    pub curve: usize,
    pub points: Vec<usize>,
}

/// `(k+1)`-uniform hypergraph on the points of one part, with one complete
/// copy per block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockHypergraph {
    pub part: usize,
    pub k: usize,
    pub s: usize,
    pub vertex_count: usize,
    /// Curves contributing at least one block.
    pub curves: Vec<usize>,
    pub copies: Vec<PlantedCopy>,
    /// Each edge with the curve that planted it.
    pub edges: BTreeMap<Vec<usize>, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyCensus {
    /// Copies of the complete `(k+1)`-graph on `s` vertices found in `H`.
    pub copies: usize,
    /// Those with `k + 2` vertices on one contributing curve.
    pub bad: usize,
    /// The enumeration stopped at its limit.
    pub truncated: bool,
}

/// Builds the hypergraph of part `part` from the blocks of every curve
/// (`(curve, block)` pairs; blocks of other parts are ignored). Fails if
/// two curves would plant the same edge.
pub fn build_block_hypergraph(
    part: usize,
    vertex_count: usize,
    blocks: &[(usize, Block)],
    k: usize,
    s: usize,
) -> Result<BlockHypergraph, HypergraphError> {
    let mut edges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut copies = Vec::new();
    let mut curves = BTreeSet::new();
    for (curve, block) in blocks.iter().filter(|(_, b)| b.part == part) {
        if block.points.len() != s {
            return Err(HypergraphError::BlockSize { curve: *curve, len: block.points.len(), s });
        }
        let mut pts = block.points.clone();
        pts.sort_unstable();
        for tuple in pts.iter().copied().combinations(k + 1) {
            if let Some(&other) = edges.get(&tuple) {
                return Err(HypergraphError::DisjointnessViolation { tuple, curves: (other.min(*curve), other.max(*curve)) });
            }
            edges.insert(tuple, *curve);
        }
        curves.insert(*curve);
        copies.push(PlantedCopy { curve: *curve, points: block.points.clone() });
    }
    Ok(BlockHypergraph { part, k, s, vertex_count, curves: curves.into_iter().collect(), copies, edges })
}

impl BlockHypergraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Enumerates up to `limit` copies of the complete hypergraph on `s`
    /// vertices and counts those with `k + 2` vertices on one curve of the
    /// hypergraph's curve set (point lists from `st`).
    pub fn census(&self, st: &IncidenceStructure, limit: usize) -> CopyCensus {
        let mut shadow: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for e in self.edges.keys() {
            for (i, &u) in e.iter().enumerate() {
                for &v in &e[i + 1..] {
                    shadow.entry(u).or_default().insert(v);
                    shadow.entry(v).or_default().insert(u);
                }
            }
        }
        let on_curve: Vec<BTreeSet<usize>> =
            self.curves.iter().map(|&c| st.curves[c].iter().copied().collect()).collect();
        let mut census = CopyCensus { copies: 0, bad: 0, truncated: false };
        let mut chosen = Vec::with_capacity(self.s);
        let roots: Vec<usize> = shadow.keys().copied().collect();
        self.grow(&shadow, &roots, &mut chosen, &on_curve, limit, &mut census);
        census
    }

    fn grow(
        &self,
        shadow: &BTreeMap<usize, BTreeSet<usize>>,
        cand: &[usize],
        chosen: &mut Vec<usize>,
        on_curve: &[BTreeSet<usize>],
        limit: usize,
        census: &mut CopyCensus,
    ) {
        if chosen.len() == self.s {
            census.copies += 1;
            if on_curve.iter().any(|c| chosen.iter().filter(|p| c.contains(p)).count() >= self.k + 2) {
                census.bad += 1;
            }
            return;
        }
        for (i, &v) in cand.iter().enumerate() {
            if census.copies >= limit {
                census.truncated = true;
                return;
            }
            // every new (k+1)-tuple through v must be an edge
            let closes = chosen.len() < self.k
                || chosen.iter().copied().combinations(self.k).all(|mut t| {
                    t.push(v);
                    t.sort_unstable();
                    self.edges.contains_key(&t)
                });
            if !closes {
                continue;
            }
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|u| shadow[&v].contains(u)).collect();
            chosen.push(v);
            self.grow(shadow, &next, chosen, on_curve, limit, census);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Provenance;

    #[test]
    fn one_block_is_one_copy() {
        let blocks = vec![(0, Block { part: 0, points: vec![3, 1, 2, 0] })];
        let h = build_block_hypergraph(0, 4, &blocks, 1, 4).unwrap();
        assert_eq!(h.copies.len(), 1);
        assert_eq!(h.edge_count(), 6);
        let st = IncidenceStructure {
            point_count: 4,
            curves: vec![vec![0, 1, 2, 3]],
            k: 1,
            provenance: Provenance::Geometric,
        };
        assert_eq!(h.census(&st, 100), CopyCensus { copies: 1, bad: 1, truncated: false });
    }

    #[test]
    fn shared_tuple_is_rejected() {
        let blocks = vec![(0, Block { part: 0, points: vec![0, 1, 2] }), (5, Block { part: 0, points: vec![2, 1, 7] })];
        assert_eq!(
            build_block_hypergraph(0, 8, &blocks, 1, 3),
            Err(HypergraphError::DisjointnessViolation { tuple: vec![1, 2], curves: (0, 5) })
        );
        // with k = 2 the two blocks share only a pair, not a triple
        assert!(build_block_hypergraph(0, 8, &blocks, 2, 3).is_ok());
    }

    #[test]
    fn other_parts_are_ignored() {
        let blocks = vec![(0, Block { part: 1, points: vec![0, 1, 2] })];
        let h = build_block_hypergraph(0, 3, &blocks, 1, 3).unwrap();
        assert!(h.copies.is_empty() && h.curves.is_empty());
    }
}
