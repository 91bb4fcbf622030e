use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{int, rat, Curve, Point};

use super::structure::{IncidenceStructure, Provenance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("{0} is not a positive perfect cube")]
    NotACube(u64),
}

/// Points `(a, b)` with `a < m`, `b < m^2` and lines `y = a x + b` over the
/// same index range, where `n = m^3`. Point and line ids are `a m^2 + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub n: u64,
    pub m: u64,
}

pub fn cube_root(n: u64) -> Option<u64> {
    let guess = (n as f64).cbrt().round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|&m| m.checked_pow(3) == Some(n))
}

pub fn st_lattice(n: u64) -> Result<Lattice, LatticeError> {
    match cube_root(n) {
        Some(m) if m >= 1 => Ok(Lattice { n, m }),
        _ => Err(LatticeError::NotACube(n)),
    }
}

impl Lattice {
    pub fn size(&self) -> usize {
        self.n as usize
    }

    fn height(&self) -> u64 {
        self.m * self.m
    }

    pub fn id(&self, a: u64, b: u64) -> usize {
        (a * self.height() + b) as usize
    }

    /// `(x, y)` of point `id`.
    pub fn point(&self, id: usize) -> (u64, u64) {
        let id = id as u64;
        (id / self.height(), id % self.height())
    }

    /// `(slope, intercept)` of line `id`.
    pub fn line(&self, id: usize) -> (u64, u64) {
        self.point(id)
    }

    /// Points on line `id` in increasing `x`.
    pub fn points_on_line(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        let (a, b) = self.line(id);
        (0..self.m).map_while(move |x| {
            let y = a * x + b;
            (y < self.height()).then(|| self.id(x, y))
        })
    }

    /// Lines through point `id`, by increasing slope.
    pub fn lines_through(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        let (x, y) = self.point(id);
        (0..self.m).filter_map(move |a| y.checked_sub(a * x).map(|b| self.id(a, b)))
    }

    /// `I(P, L)`, summed line by line.
    pub fn incidence_count(&self) -> u64 {
        let h = self.height();
        let mut total = 0;
        for a in 0..self.m {
            for b in 0..h {
                // x ranges over 0..m with a x + b < h
                let reach = (h - 1 - b).checked_div(a).map_or(self.m, |q| (q + 1).min(self.m));
                total += reach;
            }
        }
        total
    }

    pub fn structure(&self) -> IncidenceStructure {
        IncidenceStructure {
            point_count: self.size(),
            curves: (0..self.size()).map(|l| self.points_on_line(l).collect()).collect(),
            k: 1,
            provenance: Provenance::Geometric,
        }
    }

    pub fn geometric_points(&self) -> Vec<Point> {
        (0..self.size())
            .map(|i| {
                let (x, y) = self.point(i);
                Point::from_ints(x as i64, y as i64)
            })
            .collect()
    }

    /// Lines as exact curves. With `segment`, each line is cut to the
    /// x-range of its lattice points widened by `1/(2m)` on both sides, so
    /// no crossing outside the point grid survives.
    pub fn geometric_lines(&self, segment: bool) -> Vec<Curve> {
        let delta = rat(1, 2 * self.m as i64);
        (0..self.size())
            .map(|l| {
                let (a, b) = self.line(l);
                let line = Curve::line(int(a as i64), int(b as i64));
                if !segment {
                    return line;
                }
                let last = self.points_on_line(l).count() as i64 - 1;
                let x0 = -delta.clone();
                let x1 = int(last) + &delta;
                let y0 = line.eval(&x0);
                let y1 = line.eval(&x1);
                Curve::polyline(vec![Point::new(x0, y0), Point::new(x1, y1)]).expect("increasing x")
            })
            .collect()
    }
}

/// `I(P, C)` by testing every pair.
pub fn incidence_count(points: &[Point], curves: &[Curve]) -> u64 {
    curves.iter().map(|c| points.iter().filter(|p| c.contains(p)).count() as u64).sum()
}

/// `c (|P|^((k+1)/(2k+1)) m^(k/(2k+1)) + |P| + |C|)` with `m` the crossing
/// count, defaulting to its ceiling `k C(|C|, 2)`.
pub fn pach_sharir_bound(points: u64, curves: u64, k: u64, crossings: Option<u64>, c: f64) -> f64 {
    assert!(k >= 1, "k must be at least 1");
    let m = crossings.unwrap_or_else(|| k * curves * curves.saturating_sub(1) / 2) as f64;
    let d = (2 * k + 1) as f64;
    let p = points as f64;
    c * (p.powf((k + 1) as f64 / d) * m.powf(k as f64 / d) + p + curves as f64)
}
