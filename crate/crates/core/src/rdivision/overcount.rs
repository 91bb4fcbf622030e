use thiserror::Error;

use super::RecursionTree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OvercountError {
    #[error("node {0} is not in the tree")]
    UnknownNode(usize),
    #[error("node {node} is not in the subtree of {root}")]
    NotDescendant { root: usize, node: usize },
    #[error("nodes {ancestor} and {descendant} are on one root path")]
    NotAntichain { ancestor: usize, descendant: usize },
}

/// `L(x, S) = -n(x) + sum of n(y) over y in S`, for an antichain `S` of
/// nodes in the subtree of `x`.
pub fn compute_overcount(tree: &RecursionTree, x: usize, s: &[usize]) -> Result<i64, OvercountError> {
    let len = tree.nodes.len();
    if x >= len {
        return Err(OvercountError::UnknownNode(x));
    }
    if let Some(&bad) = s.iter().find(|&&y| y >= len) {
        return Err(OvercountError::UnknownNode(bad));
    }
    for &y in s {
        if !tree.is_ancestor(x, y) {
            return Err(OvercountError::NotDescendant { root: x, node: y });
        }
    }
    // mark S, then walk each member's proper ancestors up to x
    let mut in_s = vec![false; len];
    for &y in s {
        if in_s[y] {
            return Err(OvercountError::NotAntichain { ancestor: y, descendant: y });
        }
        in_s[y] = true;
    }
    for &y in s {
        let mut z = y;
        while z != x {
            z = tree.nodes[z].parent.expect("descendant of x has a parent");
            if in_s[z] {
                return Err(OvercountError::NotAntichain { ancestor: z, descendant: y });
            }
        }
    }
    let sum: i64 = s.iter().map(|&y| tree.nodes[y].n as i64).sum();
    Ok(sum - tree.nodes[x].n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::gen;
    use crate::rdivision::{classic_r_division, DivisionConfig};

    fn tree() -> RecursionTree {
        classic_r_division(&gen::triangulated_grid(16, 16), 16, &DivisionConfig::default()).unwrap().tree
    }

    #[test]
    fn singleton_is_zero() {
        let t = tree();
        for x in 0..t.nodes.len() {
            assert_eq!(compute_overcount(&t, x, &[x]), Ok(0));
        }
    }

    #[test]
    fn children_give_cycle_length() {
        let t = tree();
        for node in t.internal() {
            let kids = node.children.unwrap();
            let len = node.separator.as_ref().unwrap().len() as i64;
            assert_eq!(compute_overcount(&t, node.id, &kids), Ok(len));
        }
    }

    #[test]
    fn rejects_chains() {
        let t = tree();
        let [a, _] = t.root().children.unwrap();
        assert_eq!(compute_overcount(&t, 0, &[0, a]), Err(OvercountError::NotAntichain { ancestor: 0, descendant: a }));
        assert!(matches!(compute_overcount(&t, a, &[0]), Err(OvercountError::NotDescendant { .. })));
    }
}
