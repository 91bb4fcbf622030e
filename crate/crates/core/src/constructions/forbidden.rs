use std::collections::HashMap;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::structure::IncidenceStructure;

pub const DEFAULT_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Largest point count scanned without `force`.
    pub cap: usize,
    pub force: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { cap: DEFAULT_CAP, force: false }
    }
}

/// `s` points and a distinct curve for each of their `(k+1)`-tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<usize>,
    pub tuples: Vec<Vec<usize>>,
    pub curves: Vec<usize>,
}

impl Witness {
    /// The incidences the witness relies on, ascending as `(point, curve)`.
    pub fn incidences(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .tuples
            .iter()
            .zip(&self.curves)
            .flat_map(|(t, &c)| t.iter().map(move |&p| (p, c)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScanError {
    #[error("{points} points exceed the scan cap of {cap}; pass force to scan anyway")]
    InstanceTooLarge { points: usize, cap: usize },
    #[error("need s > k + 1 >= 2, got k = {k}, s = {s}")]
    BadParameters { k: usize, s: usize },
}

/// First forbidden configuration in lexicographic order of point sets: `s`
/// points whose `(k+1)`-tuples have a system of distinct representatives
/// among the curves containing them.
pub fn forbidden_config_scan(
    st: &IncidenceStructure,
    k: usize,
    s: usize,
    opts: ScanOptions,
) -> Result<Option<Witness>, ScanError> {
    check_parameters(k, s)?;
    if st.point_count > opts.cap && !opts.force {
        return Err(ScanError::InstanceTooLarge { points: st.point_count, cap: opts.cap });
    }
    let mut found = None;
    Search::new(st, k, s).for_each(|w| {
        found = Some(w);
        ControlFlow::Break(())
    });
    Ok(found)
}

pub(crate) fn check_parameters(k: usize, s: usize) -> Result<(), ScanError> {
    if k == 0 || s <= k + 1 {
        return Err(ScanError::BadParameters { k, s });
    }
    Ok(())
}

/// Re-checks a witness by direct containment and injectivity.
pub fn check_witness(st: &IncidenceStructure, k: usize, s: usize, w: &Witness) -> bool {
    let mut pts = w.points.clone();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() != s || pts.iter().any(|&p| p >= st.point_count) {
        return false;
    }
    let expected: Vec<Vec<usize>> = pts.iter().copied().combinations(k + 1).collect();
    let mut got: Vec<Vec<usize>> = w
        .tuples
        .iter()
        .map(|t| {
            let mut t = t.clone();
            t.sort_unstable();
            t
        })
        .collect();
    got.sort();
    if got != expected || w.curves.len() != w.tuples.len() || !w.curves.iter().all_unique() {
        return false;
    }
    w.tuples.iter().zip(&w.curves).all(|(t, &c)| c < st.curves.len() && t.iter().all(|p| st.curves[c].contains(p)))
}

/// Bipartite matching of tuples to curves, grown one tuple at a time.
#[derive(Clone, Default)]
struct Matcher {
    options: Vec<Vec<usize>>,
    owner: HashMap<usize, usize>,
}

impl Matcher {
    fn push(&mut self, options: Vec<usize>) -> bool {
        let t = self.options.len();
        self.options.push(options);
        let mut seen = Vec::new();
        self.augment(t, &mut seen)
    }

    fn augment(&mut self, t: usize, seen: &mut Vec<usize>) -> bool {
        for i in 0..self.options[t].len() {
            let c = self.options[t][i];
            if seen.contains(&c) {
                continue;
            }
            seen.push(c);
            let free = match self.owner.get(&c) {
                None => true,
                Some(&other) => self.augment(other, seen),
            };
            if free {
                self.owner.insert(c, t);
                return true;
            }
        }
        false
    }

    fn assignment(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.options.len()];
        for (&c, &t) in &self.owner {
            out[t] = c;
        }
        out
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Enumerates forbidden configurations. Every pair inside one lies on a
/// common curve, so candidates grow as cliques of the co-curve graph, and a
/// partial set is dropped as soon as its tuples admit no distinct
/// representatives.
pub(crate) struct Search {
    k: usize,
    s: usize,
    through: Vec<Vec<usize>>,
    adj: Vec<FixedBitSet>,
}

impl Search {
    pub(crate) fn new(st: &IncidenceStructure, k: usize, s: usize) -> Self {
        Search { k, s, through: st.curves_through(), adj: st.co_curve_graph() }
    }

    fn options(&self, tuple: &[usize]) -> Vec<usize> {
        let mut opts = self.through[tuple[0]].clone();
        for &p in &tuple[1..] {
            opts = intersect(&opts, &self.through[p]);
            if opts.is_empty() {
                break;
            }
        }
        opts
    }

    /// Adds `v` to `chosen`, registering its new tuples; `None` if they
    /// cannot all be represented.
    fn extend(&self, chosen: &[usize], matcher: &Matcher, tuples: &[Vec<usize>], v: usize) -> Option<(Matcher, Vec<Vec<usize>>)> {
        let mut m = matcher.clone();
        let mut ts = tuples.to_vec();
        if chosen.len() >= self.k {
            for comb in chosen.iter().copied().combinations(self.k) {
                let mut t = comb;
                t.push(v);
                let opts = self.options(&t);
                if opts.is_empty() || !m.push(opts) {
                    return None;
                }
                ts.push(t);
            }
        }
        Some((m, ts))
    }

    /// Calls `f` on every forbidden configuration, in lexicographic order.
    pub(crate) fn for_each(&self, mut f: impl FnMut(Witness) -> ControlFlow<()>) {
        let n = self.adj.len();
        let all = {
            let mut b = FixedBitSet::with_capacity(n);
            b.insert_range(..);
            b
        };
        let mut chosen = Vec::with_capacity(self.s);
        let _ = self.descend(&mut chosen, &all, &Matcher::default(), &[], &mut f);
    }

    fn descend(
        &self,
        chosen: &mut Vec<usize>,
        cand: &FixedBitSet,
        matcher: &Matcher,
        tuples: &[Vec<usize>],
        f: &mut impl FnMut(Witness) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if chosen.len() == self.s {
            let curves = matcher.assignment();
            return f(Witness { points: chosen.clone(), tuples: tuples.to_vec(), curves });
        }
        let need = self.s - chosen.len();
        for v in cand.ones() {
            let mut next = cand.clone();
            next.intersect_with(&self.adj[v]);
            next.set_range(..v + 1, false);
            if next.count_ones(..) + 1 < need {
                continue;
            }
            let Some((m, ts)) = self.extend(chosen, matcher, tuples, v) else { continue };
            chosen.push(v);
            let flow = self.descend(chosen, &next, &m, &ts, f);
            chosen.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// Witness on exactly the points `pts`, if they form a configuration.
    pub(crate) fn witness_for(&self, pts: &[usize]) -> Option<Witness> {
        let mut matcher = Matcher::default();
        let mut tuples = Vec::new();
        for (i, &v) in pts.iter().enumerate() {
            if pts[..i].iter().any(|&u| !self.adj[u].contains(v)) {
                return None;
            }
            (matcher, tuples) = self.extend(&pts[..i], &matcher, &tuples, v)?;
        }
        Some(Witness { points: pts.to_vec(), tuples, curves: matcher.assignment() })
    }

    /// Drops incidence `(p, c)` from the search tables.
    pub(crate) fn remove(&mut self, p: usize, c: usize, curve_points: &[usize]) {
        self.through[p].retain(|&x| x != c);
        // p loses adjacency to a neighbour only when no other curve joins them
        for &q in curve_points {
            if q != p && intersect(&self.through[p], &self.through[q]).is_empty() {
                self.adj[p].set(q, false);
                self.adj[q].set(p, false);
            }
        }
    }
}
