//! Exact arrangements of points and k-intersecting curves: intersection
//! validation, the embedded arrangement graph, high-degree truncation, the
//! nested-cycles gadget, and block partitions along a curve.

mod blocks;
mod gadget;
mod geometry;
mod graph;
mod json;
mod truncation;

use thiserror::Error;

pub use blocks::{block_partition, Block, BlockError, BlockPartition, CurveItem, CurveItemKind};
pub use gadget::{add_nested_cycles, Gadget, GadgetError};
pub use geometry::{
    cmp_direction, format_rational, int, pair_intersections, parse_rational, rat, rational_str, Crossing, Curve,
    Point, Rational, Side,
};
pub use graph::{build_arrangement_graph, ArrangementGraph, VertexKind};
pub use json::GeometryDocument;
pub use truncation::{high_degree_truncation, point_degrees, Truncation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("malformed curve: {0}")]
    MalformedCurve(String),
    #[error("curves {} and {} meet in {} points, more than k = {k}", pair.0, pair.1, witnesses.len())]
    KViolation { pair: (usize, usize), k: usize, witnesses: Vec<Point> },
    #[error("curves {} and {} do not cross transversally at {point}: {detail}", curves.0, curves.1)]
    TangencyUnsupported { curves: (usize, usize), point: Point, detail: String },
    #[error("curves {curves:?} share the point {point}, which is not a marked point")]
    TripleCrossing { point: Point, curves: Vec<usize> },
    #[error("marked point {0} lies on no curve")]
    IsolatedPoint(usize),
    #[error("marked point {0} is listed twice")]
    DuplicatePoint(usize),
}

/// Every pairwise crossing, in pair order and then along x; fails on the
/// first pair meeting in more than `k` points (reporting `k + 1` of them)
/// or meeting non-transversally.
pub fn validate_k_intersecting(curves: &[Curve], k: usize) -> Result<Vec<Crossing>, ArrangementError> {
    for c in curves {
        c.check()?;
    }
    let mut out = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let pts = pair_intersections(&curves[i], &curves[j], (i, j))?;
            if pts.len() > k {
                return Err(ArrangementError::KViolation { pair: (i, j), k, witnesses: pts[..k + 1].to_vec() });
            }
            out.extend(pts.into_iter().map(|point| Crossing { curves: (i, j), point }));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn convex(pts: &[(i64, i64)]) -> Curve {
        Curve::polyline(pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn convex_polylines_violate_k2() {
        // an upward and a downward zigzag through three common points
        let a = convex(&[(0, 0), (2, 4), (4, 0), (6, 4)]);
        let b = convex(&[(0, 4), (2, 0), (4, 4), (6, 0)]);
        match validate_k_intersecting(&[a.clone(), b.clone()], 2) {
            Err(ArrangementError::KViolation { pair, witnesses, .. }) => {
                assert_eq!(pair, (0, 1));
                assert_eq!(witnesses.len(), 3);
            }
            other => panic!("expected a violation, got {other:?}"),
        }
        assert_eq!(validate_k_intersecting(&[a, b], 3).unwrap().len(), 3);
    }

    #[test]
    fn lines_in_general_position() {
        let lines = vec![Curve::line(int(0), int(0)), Curve::line(int(1), int(0)), Curve::line(int(-1), int(3))];
        assert_eq!(validate_k_intersecting(&lines, 1).unwrap().len(), 3);
    }
}
