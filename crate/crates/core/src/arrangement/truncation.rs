use serde::{Deserialize, Serialize};

use super::geometry::{Curve, Point};

/// Split of the point set at degree `ell`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub ell: usize,
    /// Points on at least `ell` curves.
    pub high: Vec<usize>,
    /// The remaining points.
    pub kept: Vec<usize>,
    /// Incidences carried by the high-degree points.
    pub removed_incidences: usize,
    /// `c (|C|^2 / ell^(1 + 1/k) + |C|)`.
    pub bound: f64,
    pub within_bound: bool,
}

/// Number of curves through each point.
pub fn point_degrees(points: &[Point], curves: &[Curve]) -> Vec<usize> {
    points.iter().map(|p| curves.iter().filter(|c| c.contains(p)).count()).collect()
}

/// Removes the points of degree at least `ell` (`ell >= 2`) and checks the
/// incidences they carry against the ceiling with constant `c`.
pub fn high_degree_truncation(degrees: &[usize], curve_count: usize, ell: usize, k: usize, c: f64) -> Truncation {
    assert!(ell >= 2, "truncation degree must be at least 2");
    assert!(k >= 1, "k must be at least 1");
    let (high, kept): (Vec<usize>, Vec<usize>) = (0..degrees.len()).partition(|&i| degrees[i] >= ell);
    let removed_incidences = high.iter().map(|&i| degrees[i]).sum();
    let m = curve_count as f64;
    let bound = c * (m * m / (ell as f64).powf(1.0 + 1.0 / k as f64) + m);
    Truncation { ell, high, kept, removed_incidences, bound, within_bound: removed_incidences as f64 <= bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::geometry::int;

    #[test]
    fn pencil_apex_is_removed() {
        let d = 5;
        let lines: Vec<Curve> = (0..d).map(|a| Curve::line(int(a), int(0))).collect();
        let mut pts = vec![Point::from_ints(0, 0)];
        pts.extend((0..d).map(|a| Point::from_ints(1, a)));
        let deg = point_degrees(&pts, &lines);
        let t = high_degree_truncation(&deg, lines.len(), 2, 1, 1.0);
        assert_eq!(t.high, vec![0]);
        assert_eq!(t.removed_incidences, d as usize);
        assert_eq!(t.kept.len(), d as usize);
    }

    #[test]
    fn large_ell_keeps_everything() {
        let t = high_degree_truncation(&[1, 3, 2], 3, 4, 1, 1.0);
        assert!(t.high.is_empty());
        assert_eq!(t.kept, vec![0, 1, 2]);
        assert!(t.within_bound);
    }
}
