use serde::{Deserialize, Serialize};

use super::{Crossing, Point, SegIntersection, Segment};
use crate::error::{Error, Result};

/// An ordered chain of at least two points with distinct neighbours.
/// Closed when the first and last vertex coincide.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPolyline("fewer than 2 vertices".into()));
        }
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPolyline(format!("repeated consecutive vertex {}", w[0])));
        }
        Ok(Polyline { vertices })
    }

    /// Drops consecutive duplicates before validating.
    pub fn from_points_dedup(mut vertices: Vec<Point>) -> Result<Self> {
        vertices.dedup();
        Polyline::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn first(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn last(&self) -> &Point {
        self.vertices.last().unwrap()
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.len() > 2 && self.first() == self.last()
    }

    pub fn segment(&self, i: usize) -> Segment {
        Segment::new(self.vertices[i].clone(), self.vertices[i + 1].clone())
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.vertices.windows(2).map(|w| Segment::new(w[0].clone(), w[1].clone()))
    }

    pub fn num_segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline { vertices: v }
    }

    /// No two segments meet except consecutive ones at their shared vertex
    /// (and, for closed chains, the first and last at the start vertex).
    pub fn is_simple(&self) -> bool {
        self.first_self_intersection().is_none()
    }

    /// Index pair of the first offending segment pair, if any.
    pub fn first_self_intersection(&self) -> Option<(usize, usize)> {
        let segs: Vec<Segment> = self.segments().collect();
        let n = segs.len();
        let closed = self.is_closed();
        for i in 0..n {
            for j in (i + 1)..n {
                let consecutive = j == i + 1;
                let wrap = closed && i == 0 && j == n - 1;
                match segs[i].intersect(&segs[j]) {
                    SegIntersection::None => {}
                    SegIntersection::Overlap(..) => return Some((i, j)),
                    SegIntersection::Point { p, .. } => {
                        let allowed = (consecutive && p == segs[i].b) || (wrap && p == segs[i].a);
                        if !allowed {
                            return Some((i, j));
                        }
                    }
                }
            }
        }
        None
    }
}

impl TryFrom<Vec<Point>> for Polyline {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        Polyline::new(v)
    }
}

impl From<Polyline> for Vec<Point> {
    fn from(p: Polyline) -> Self {
        p.vertices
    }
}

/// Transversal crossing points of two polylines, ordered along `c1`.
///
/// Any touching, overlap, or vertex-on-curve incidence is an error.
pub fn polyline_crossings(c1: &Polyline, c2: &Polyline) -> Result<Vec<Point>> {
    segment_chain_crossings(&c1.segments().collect::<Vec<_>>(), &c2.segments().collect::<Vec<_>>())
}

pub(crate) fn segment_chain_crossings(a: &[Segment], b: &[Segment]) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for s in a {
        let mut local: Vec<(super::Scalar, Point)> = Vec::new();
        for t in b {
            match s.crossing(t) {
                Crossing::None => {}
                Crossing::Transversal(p) => local.push((s.param_of(&p), p)),
                Crossing::Degenerate => {
                    let at = match s.intersect(t) {
                        SegIntersection::Point { p, .. } => p,
                        SegIntersection::Overlap(p, _) => p,
                        SegIntersection::None => unreachable!(),
                    };
                    return Err(Error::DegenerateIncidence(at.into()));
                }
            }
        }
        local.sort_by(|x, y| x.0.cmp(&y.0));
        out.extend(local.into_iter().map(|(_, p)| p));
    }
    Ok(out)
}

/// Number of transversal crossings; `Err` on degeneracy.
pub(crate) fn count_ring_crossings(a: &[Segment], b: &[Segment]) -> Result<usize> {
    let mut n = 0;
    for s in a {
        for t in b {
            match s.crossing(t) {
                Crossing::None => {}
                Crossing::Transversal(_) => n += 1,
                Crossing::Degenerate => {
                    let at = match s.intersect(t) {
                        SegIntersection::Point { p, .. } => p,
                        SegIntersection::Overlap(p, _) => p,
                        SegIntersection::None => unreachable!(),
                    };
                    return Err(Error::DegenerateIncidence(at.into()));
                }
            }
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Scalar, SimplePolygon};
    use proptest::prelude::*;

    fn ring(pts: &[(i64, i64)]) -> Polyline {
        let poly = SimplePolygon::new(pts.iter().map(|&p| p.into()).collect()).unwrap();
        Polyline::new(poly.ring()).unwrap()
    }

    /// All-pairs segment intersection oracle, independent of ordering logic.
    fn oracle(c1: &Polyline, c2: &Polyline) -> Vec<Point> {
        let mut v = Vec::new();
        for s in c1.segments() {
            for t in c2.segments() {
                if let Crossing::Transversal(p) = s.crossing(&t) {
                    v.push(p);
                }
            }
        }
        v.sort();
        v
    }

    #[test]
    fn squares_cross_twice() {
        let a = ring(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        let b = ring(&[(2, -1), (6, -1), (6, 5), (2, 5)]);
        let mut got = polyline_crossings(&a, &b).unwrap();
        got.sort();
        assert_eq!(got, vec![Point::new(2, 0), Point::new(2, 4)]);
        assert_eq!(got, oracle(&a, &b));
    }

    #[test]
    fn disjoint_squares() {
        let a = ring(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let b = ring(&[(3, 0), (4, 0), (4, 1), (3, 1)]);
        assert!(polyline_crossings(&a, &b).unwrap().is_empty());
    }

    #[test]
    fn segment_against_rational_square() {
        let seg = Polyline::new(vec![Point::new(1, 1), Point::new(3, 1)]).unwrap();
        let sq = SimplePolygon::new(vec![
            Point::ratio(1, 1, 2),
            Point::ratio(5, 1, 2),
            Point::ratio(5, 7, 2),
            Point::ratio(1, 7, 2),
        ])
        .unwrap();
        let b = Polyline::new(sq.ring()).unwrap();
        assert_eq!(polyline_crossings(&seg, &b).unwrap(), vec![Point::ratio(5, 2, 2)]);
    }

    #[test]
    fn degenerate_touch_is_error() {
        let a = ring(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        let b = ring(&[(4, 1), (6, 1), (6, 3), (4, 3)]);
        assert!(matches!(polyline_crossings(&a, &b), Err(Error::DegenerateIncidence(_))));
    }

    #[test]
    fn simplicity() {
        let ok = Polyline::new(vec![Point::new(0, 0), Point::new(1, 0), Point::new(1, 1)]).unwrap();
        assert!(ok.is_simple());
        let fig4 = Polyline::new(vec![
            Point::new(0, 0),
            Point::new(4, 0),
            Point::new(4, 2),
            Point::new(2, 2),
            Point::new(2, -2),
        ])
        .unwrap();
        assert!(!fig4.is_simple());
        assert!(ring(&[(0, 0), (1, 0), (1, 1)]).is_simple());
    }

    fn rect(x: i64, y: i64, w: i64, h: i64, den: i64) -> Polyline {
        let sq = SimplePolygon::new(vec![
            Point::ratio(x, y, den),
            Point::ratio(x + w, y, den),
            Point::ratio(x + w, y + h, den),
            Point::ratio(x, y + h, den),
        ])
        .unwrap();
        Polyline::new(sq.ring()).unwrap()
    }

    proptest! {
        #[test]
        fn crossings_symmetric_even_and_on_both(
            x1 in 0i64..40, y1 in 0i64..40, w1 in 1i64..40, h1 in 1i64..40,
            x2 in 0i64..40, y2 in 0i64..40, w2 in 1i64..40, h2 in 1i64..40,
        ) {
            // odd vs even numerators keep the edges from coinciding
            let a = rect(2 * x1, 2 * y1, 2 * w1, 2 * h1, 2);
            let b = rect(2 * x2 + 1, 2 * y2 + 1, 2 * w2, 2 * h2, 2);
            let ab = polyline_crossings(&a, &b).unwrap();
            let mut ba = polyline_crossings(&b, &a).unwrap();
            let mut abs = ab.clone();
            abs.sort();
            ba.sort();
            prop_assert_eq!(&abs, &ba);
            prop_assert_eq!(ab.len() % 2, 0);
            for p in &ab {
                prop_assert!(a.segments().any(|s| s.contains(p)));
                prop_assert!(b.segments().any(|s| s.contains(p)));
            }
            let _ = Scalar::zero();
        }
    }
}
