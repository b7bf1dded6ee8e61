use serde::{Deserialize, Serialize};

use super::{cross, orientation, Orientation, Point, Scalar, Segment};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Inside,
    Outside,
    OnBoundary,
}

/// A simple polygon, stored counter-clockwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl SimplePolygon {
    /// Validates simplicity and reorients to counter-clockwise.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon("fewer than 3 vertices".into()));
        }
        let area2 = signed_area2(&vertices);
        if area2.is_zero() {
            return Err(Error::InvalidPolygon("zero area".into()));
        }
        if area2.signum() < 0 {
            vertices.reverse();
        }
        let poly = SimplePolygon { vertices };
        poly.check_simple()?;
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (cyclically).
    pub fn edge(&self, i: usize) -> Segment {
        let n = self.vertices.len();
        Segment::new(self.vertices[i].clone(), self.vertices[(i + 1) % n].clone())
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    /// Twice the (positive) area.
    pub fn area2(&self) -> Scalar {
        signed_area2(&self.vertices)
    }

    /// Closed boundary as a polyline vertex list (first == last).
    pub fn ring(&self) -> Vec<Point> {
        let mut r = self.vertices.clone();
        r.push(self.vertices[0].clone());
        r
    }

    fn check_simple(&self) -> Result<()> {
        let n = self.vertices.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.vertices[i] == self.vertices[j] {
                    return Err(Error::InvalidPolygon(format!("repeated vertex {}", self.vertices[i])));
                }
            }
        }
        let edges: Vec<Segment> = self.edges().collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                match edges[i].intersect(&edges[j]) {
                    super::SegIntersection::None => {}
                    super::SegIntersection::Overlap(p, _) => {
                        return Err(Error::InvalidPolygon(format!("overlapping edges at {p}")));
                    }
                    super::SegIntersection::Point { p, .. } => {
                        if !adjacent {
                            return Err(Error::InvalidPolygon(format!("self-intersection at {p}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn locate(&self, pt: &Point) -> Location {
        point_in_polygon(pt, self)
    }

    /// Whether `pt` is strictly inside.
    pub fn contains_strict(&self, pt: &Point) -> bool {
        self.locate(pt) == Location::Inside
    }
}

pub(crate) fn signed_area2(vs: &[Point]) -> Scalar {
    let n = vs.len();
    let mut acc = Scalar::zero();
    for i in 0..n {
        let a = &vs[i];
        let b = &vs[(i + 1) % n];
        acc = &acc + &(&(&a.x * &b.y) - &(&a.y * &b.x));
    }
    acc
}

/// Crossing-number classification against a closed ring of vertices
/// (no repeated closing vertex).
pub fn locate_in_ring(pt: &Point, ring: &[Point]) -> Location {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        if Segment::new(a.clone(), b.clone()).contains(pt) {
            return Location::OnBoundary;
        }
        // half-open rule on y
        let a_above = a.y > pt.y;
        let b_above = b.y > pt.y;
        if a_above != b_above {
            // x-coordinate of the edge at pt.y compared with pt.x, via orientation
            let o = cross(a, b, pt);
            let upward = b.y > a.y;
            if (upward && o.signum() > 0) || (!upward && o.signum() < 0) {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

pub fn point_in_polygon(pt: &Point, poly: &SimplePolygon) -> Location {
    locate_in_ring(pt, &poly.vertices)
}

impl<'de> Deserialize<'de> for SimplePolygon {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<Point>,
        }
        let raw = Raw::deserialize(de)?;
        SimplePolygon::new(raw.vertices).map_err(serde::de::Error::custom)
    }
}

/// Whether two vertex lists describe the same closed ring up to rotation.
pub fn same_ring(a: &[Point], b: &[Point]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let n = a.len();
    (0..n).any(|s| (0..n).all(|i| a[i] == b[(i + s) % n]))
}

/// `Left` when the ring is counter-clockwise.
pub fn ring_orientation(ring: &[Point]) -> Orientation {
    match signed_area2(ring).signum() {
        1 => Orientation::Left,
        -1 => Orientation::Right,
        _ => Orientation::Collinear,
    }
}

#[allow(dead_code)]
pub(crate) fn is_convex_ccw(vs: &[Point]) -> bool {
    let n = vs.len();
    (0..n).all(|i| orientation(&vs[i], &vs[(i + 1) % n], &vs[(i + 2) % n]) != Orientation::Right)
}
