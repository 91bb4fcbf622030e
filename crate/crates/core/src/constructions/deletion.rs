use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::forbidden::{check_parameters, ScanError, Search};
use super::structure::{IncidenceStructure, Provenance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeletionError {
    #[error("sampling probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error(transparent)]
    Scan(#[from] ScanError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditLog {
    pub seed: u64,
    pub p: f64,
    pub s: usize,
    pub k: usize,
    pub total: usize,
    pub selected: usize,
    /// Forbidden `s`-sets among the selected incidences.
    pub bad: usize,
    pub deleted: usize,
    pub surviving: usize,
    /// Scans needed until a scan came back clean.
    pub rounds: usize,
}

#[derive(Clone, Debug)]
pub struct Sampled {
    pub structure: IncidenceStructure,
    pub audit: AuditLog,
}

/// Probability `n^(-(s-1) / (3 (s^2 - s - 1)))`, times `mult`, capped at 1.
pub fn deletion_probability(n: u64, s: usize, mult: f64) -> f64 {
    let s = s as f64;
    let e = (s - 1.0) / (3.0 * (s * s - s - 1.0));
    ((n as f64).powf(-e) * mult).min(1.0)
}

/// Keeps each incidence independently with probability `p`, then removes
/// incidences until no `s` points have their `(k+1)`-tuples on distinct
/// curves. Each pass walks the forbidden sets in lexicographic order and,
/// while a set is still forbidden, deletes the least incidence its witness
/// uses; passes repeat until a scan finds nothing.
pub fn sample_and_delete(base: &IncidenceStructure, s: usize, p: f64, seed: u64) -> Result<Sampled, DeletionError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(DeletionError::BadProbability(p));
    }
    let k = base.k;
    check_parameters(k, s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let curves: Vec<Vec<usize>> =
        base.curves.iter().map(|pts| pts.iter().copied().filter(|_| rng.gen_bool(p)).collect()).collect();
    let mut st = IncidenceStructure {
        point_count: base.point_count,
        curves,
        k,
        provenance: Provenance::CombinatorialAfterDeletion,
    };
    let selected = st.incidence_count();
    let mut search = Search::new(&st, k, s);
    let collect = |search: &Search| {
        let mut sets = Vec::new();
        search.for_each(|w| {
            sets.push(w.points);
            ControlFlow::Continue(())
        });
        sets
    };
    let mut sets = collect(&search);
    let bad = sets.len();
    let (mut deleted, mut rounds) = (0, 1);
    while !sets.is_empty() {
        for set in &sets {
            while let Some(w) = search.witness_for(set) {
                let (pt, c) = w.incidences()[0];
                search.remove(pt, c, &st.curves[c]);
                st.curves[c].retain(|&x| x != pt);
                deleted += 1;
            }
        }
        sets = collect(&search);
        rounds += 1;
    }
    let surviving = st.incidence_count();
    Ok(Sampled {
        structure: st,
        audit: AuditLog { seed, p, s, k, total: base.incidence_count(), selected, bad, deleted, surviving, rounds },
    })
}

/// Seed of trial `i`: the SplitMix64 finalizer applied to `seed + i`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed.wrapping_add(trial).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::st_lattice;

    #[test]
    fn zero_probability_is_empty() {
        let base = st_lattice(64).unwrap().structure();
        let out = sample_and_delete(&base, 3, 0.0, 1).unwrap();
        assert_eq!(out.audit.selected, 0);
        assert_eq!(out.audit.surviving, 0);
        assert_eq!(out.audit.rounds, 1);
    }

    #[test]
    fn full_selection_is_cleaned() {
        let base = st_lattice(64).unwrap().structure();
        let out = sample_and_delete(&base, 3, 1.0, 1).unwrap();
        assert_eq!(out.audit.selected, 220);
        assert!(out.audit.bad > 0);
        assert_eq!(out.audit.surviving, out.audit.selected - out.audit.deleted);
        assert!(out.structure.k_violation().is_none());
    }

    #[test]
    fn probability_and_seeds() {
        assert!((deletion_probability(4096, 3, 1.0) - 4096f64.powf(-2.0 / 15.0)).abs() < 1e-12);
        assert_eq!(deletion_probability(8, 3, 100.0), 1.0);
        assert_ne!(trial_seed(0, 0), trial_seed(0, 1));
        assert_eq!(trial_seed(5, 2), trial_seed(6, 1));
    }
}
