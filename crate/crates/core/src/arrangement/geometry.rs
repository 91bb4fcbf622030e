use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ArrangementError;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `"num/den"` text form, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
            let d: BigInt = d.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(s.parse().map_err(|e| format!("bad rational {s:?}: {e}"))?),
    };
    Ok(parsed)
}

/// Serde adapter for `Rational` as a `"num/den"` string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Exact planar point, ordered lexicographically by `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point { x: int(x), y: int(y) }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.x), format_rational(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let x = parse_rational(&x).map_err(serde::de::Error::custom)?;
        let y = parse_rational(&y).map_err(serde::de::Error::custom)?;
        Ok(Point { x, y })
    }
}

/// A line `y = a x + b` or an x-monotone polyline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Curve {
    Line {
        #[serde(with = "rational_str")]
        a: Rational,
        #[serde(with = "rational_str")]
        b: Rational,
    },
    Polyline { polyline: Vec<Point> },
}

impl Curve {
    pub fn line(a: Rational, b: Rational) -> Self {
        Curve::Line { a, b }
    }

    /// Polyline through `vertices`, which must have strictly increasing x.
    pub fn polyline(vertices: Vec<Point>) -> Result<Self, ArrangementError> {
        let c = Curve::Polyline { polyline: vertices };
        c.check()?;
        Ok(c)
    }

    pub fn check(&self) -> Result<(), ArrangementError> {
        if let Curve::Polyline { polyline } = self {
            if polyline.len() < 2 {
                return Err(ArrangementError::MalformedCurve("polyline needs two vertices".into()));
            }
            if polyline.windows(2).any(|w| w[0].x >= w[1].x) {
                return Err(ArrangementError::MalformedCurve("polyline x-coordinates must increase".into()));
            }
        }
        Ok(())
    }

    /// Finite domain ends; `None` for an unbounded side.
    pub fn domain(&self) -> (Option<&Rational>, Option<&Rational>) {
        match self {
            Curve::Line { .. } => (None, None),
            Curve::Polyline { polyline } => (Some(&polyline[0].x), Some(&polyline[polyline.len() - 1].x)),
        }
    }

    pub fn in_domain(&self, x: &Rational) -> bool {
        let (lo, hi) = self.domain();
        lo.is_none_or(|l| l <= x) && hi.is_none_or(|h| x <= h)
    }

    /// Interior breakpoints and finite ends, increasing.
    pub fn breakpoints(&self) -> Vec<Rational> {
        match self {
            Curve::Line { .. } => Vec::new(),
            Curve::Polyline { polyline } => polyline.iter().map(|p| p.x.clone()).collect(),
        }
    }

    /// Value at `x`, which must lie in the domain.
    pub fn eval(&self, x: &Rational) -> Rational {
        match self {
            Curve::Line { a, b } => a * x + b,
            Curve::Polyline { polyline } => {
                let i = segment_index(polyline, x, Side::Right);
                let (p, q) = (&polyline[i], &polyline[i + 1]);
                &p.y + (&q.y - &p.y) * (x - &p.x) / (&q.x - &p.x)
            }
        }
    }

    /// Slope just left or just right of `x`.
    pub fn slope(&self, x: &Rational, side: Side) -> Rational {
        match self {
            Curve::Line { a, .. } => a.clone(),
            Curve::Polyline { polyline } => {
                let i = segment_index(polyline, x, side);
                let (p, q) = (&polyline[i], &polyline[i + 1]);
                (&q.y - &p.y) / (&q.x - &p.x)
            }
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.in_domain(&p.x) && self.eval(&p.x) == p.y
    }

    /// Polyline vertices strictly between `x0` and `x1`.
    pub fn bends_between(&self, x0: &Rational, x1: &Rational) -> Vec<Point> {
        match self {
            Curve::Line { .. } => Vec::new(),
            Curve::Polyline { polyline } => {
                polyline.iter().filter(|p| &p.x > x0 && &p.x < x1).cloned().collect()
            }
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Index of the segment containing `x`; at a breakpoint, the segment on
/// the requested side (clamped at the ends).
fn segment_index(poly: &[Point], x: &Rational, side: Side) -> usize {
    let segs = poly.len() - 1;
    // number of vertices with vx < x (Left) or vx <= x (Right)
    let k = poly.partition_point(|p| match side {
        Side::Left => &p.x < x,
        Side::Right => &p.x <= x,
    });
    k.saturating_sub(1).min(segs - 1)
}

/// A transversal crossing of two curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub curves: (usize, usize),
    pub point: Point,
}

/// All common points of two curves, each required to be a transversal
/// crossing in the interior of both domains.
pub fn pair_intersections(c1: &Curve, c2: &Curve, ids: (usize, usize)) -> Result<Vec<Point>, ArrangementError> {
    let tangency = |p: Point, why: &str| ArrangementError::TangencyUnsupported {
        curves: ids,
        point: p,
        detail: why.to_string(),
    };
    let (lo1, hi1) = c1.domain();
    let (lo2, hi2) = c2.domain();
    let lo = match (lo1, lo2) {
        (Some(a), Some(b)) => Some(a.max(b).clone()),
        (a, b) => a.or(b).cloned(),
    };
    let hi = match (hi1, hi2) {
        (Some(a), Some(b)) => Some(a.min(b).clone()),
        (a, b) => a.or(b).cloned(),
    };
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return Ok(Vec::new());
        }
    }
    let h = |x: &Rational| c1.eval(x) - c2.eval(x);
    let dh = |x: &Rational, s: Side| c1.slope(x, s) - c2.slope(x, s);

    let mut xs: BTreeSet<Rational> = BTreeSet::new();
    for x in c1.breakpoints().into_iter().chain(c2.breakpoints()) {
        let inside = lo.as_ref().is_none_or(|l| &x >= l) && hi.as_ref().is_none_or(|u| &x <= u);
        if inside {
            xs.insert(x);
        }
    }
    xs.extend(lo.iter().cloned());
    xs.extend(hi.iter().cloned());
    let xs: Vec<Rational> = xs.into_iter().collect();

    let mut zeros: BTreeSet<Rational> = BTreeSet::new();
    if xs.is_empty() {
        // two lines
        let slope = dh(&Rational::zero(), Side::Right);
        let at0 = h(&Rational::zero());
        if slope.is_zero() {
            if at0.is_zero() {
                return Err(tangency(Point::new(Rational::zero(), c1.eval(&Rational::zero())), "identical lines"));
            }
        } else {
            zeros.insert(-at0 / slope);
        }
    } else {
        let values: Vec<Rational> = xs.iter().map(h).collect();
        for (x, v) in xs.iter().zip(&values) {
            if v.is_zero() {
                zeros.insert(x.clone());
            }
        }
        for i in 0..xs.len().saturating_sub(1) {
            let (a, b) = (&values[i], &values[i + 1]);
            if a.is_zero() && b.is_zero() {
                return Err(tangency(Point::new(xs[i].clone(), c1.eval(&xs[i])), "curves overlap"));
            }
            if a.signum() * b.signum() == -Rational::one() {
                let (l, r) = (&xs[i], &xs[i + 1]);
                zeros.insert(l + a * (r - l) / (a - b));
            }
        }
        // unbounded end pieces
        let first = &xs[0];
        if lo.is_none() {
            let s = dh(first, Side::Left);
            let v = &values[0];
            if s.is_zero() && v.is_zero() {
                return Err(tangency(Point::new(first.clone(), c1.eval(first)), "curves overlap"));
            }
            if !s.is_zero() {
                let x = first - v / &s;
                if &x < first {
                    zeros.insert(x);
                }
            }
        }
        let last = &xs[xs.len() - 1];
        if hi.is_none() {
            let s = dh(last, Side::Right);
            let v = &values[values.len() - 1];
            if s.is_zero() && v.is_zero() {
                return Err(tangency(Point::new(last.clone(), c1.eval(last)), "curves overlap"));
            }
            if !s.is_zero() {
                let x = last - v / &s;
                if &x > last {
                    zeros.insert(x);
                }
            }
        }
    }

    let mut out = Vec::with_capacity(zeros.len());
    for x in zeros {
        let p = Point::new(x.clone(), c1.eval(&x));
        let at_end = lo.as_ref() == Some(&x) || hi.as_ref() == Some(&x);
        if at_end {
            return Err(tangency(p, "contact at a curve endpoint"));
        }
        let (l, r) = (dh(&x, Side::Left), dh(&x, Side::Right));
        if l.is_zero() || r.is_zero() || l.signum() != r.signum() {
            return Err(tangency(p, "curves touch without crossing"));
        }
        out.push(p);
    }
    Ok(out)
}

/// Counterclockwise angular order of exact direction vectors, from +x.
pub fn cmp_direction(a: &(Rational, Rational), b: &(Rational, Rational)) -> Ordering {
    let half = |(x, y): &(Rational, Rational)| {
        if y.is_positive() || (y.is_zero() && x.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a.0 * &b.1 - &a.1 * &b.0;
        Rational::zero().cmp(&cross)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(i64, i64)]) -> Curve {
        Curve::polyline(pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn two_lines_cross_once() {
        let c1 = Curve::line(int(1), int(0));
        let c2 = Curve::line(int(-1), int(1));
        let p = pair_intersections(&c1, &c2, (0, 1)).unwrap();
        assert_eq!(p, vec![Point::new(rat(1, 2), rat(1, 2))]);
    }

    #[test]
    fn parallel_lines_do_not_meet() {
        let c1 = Curve::line(int(2), int(0));
        let c2 = Curve::line(int(2), int(3));
        assert!(pair_intersections(&c1, &c2, (0, 1)).unwrap().is_empty());
        assert!(matches!(pair_intersections(&c1, &c1, (0, 0)), Err(ArrangementError::TangencyUnsupported { .. })));
    }

    #[test]
    fn zigzag_against_line() {
        let z = poly(&[(0, 0), (1, 2), (2, 0), (3, 2)]);
        let l = Curve::line(int(0), int(1));
        let p = pair_intersections(&z, &l, (0, 1)).unwrap();
        let xs: Vec<Rational> = p.iter().map(|p| p.x.clone()).collect();
        assert_eq!(xs, vec![rat(1, 2), rat(3, 2), rat(5, 2)]);
    }

    #[test]
    fn touching_is_rejected() {
        let v = poly(&[(0, 2), (1, 0), (2, 2)]);
        let l = Curve::line(int(0), int(0));
        assert!(matches!(pair_intersections(&v, &l, (0, 1)), Err(ArrangementError::TangencyUnsupported { .. })));
    }

    #[test]
    fn rational_text_round_trip() {
        let q = rat(-6, 4);
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), q);
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
    }
}
