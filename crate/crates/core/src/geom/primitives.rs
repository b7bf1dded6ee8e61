use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Scalar;

/// A point with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: impl Into<Scalar>, y: impl Into<Scalar>) -> Self {
        Point { x: x.into(), y: y.into() }
    }

    /// Point from `(num_x / den, num_y / den)`.
    pub fn ratio(nx: i64, ny: i64, den: i64) -> Self {
        Point { x: Scalar::new(nx, den), y: Scalar::new(ny, den) }
    }

    pub fn sub(&self, o: &Point) -> (Scalar, Scalar) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        Point { x: (&self.x + &o.x).half(), y: (&self.y + &o.y).half() }
    }

    /// `self + (o - self) * t`.
    pub fn lerp(&self, o: &Point, t: &Scalar) -> Point {
        Point { x: &self.x + &(&(&o.x - &self.x) * t), y: &self.y + &(&(&o.y - &self.y) * t) }
    }

    pub fn offset(&self, dx: &Scalar, dy: &Scalar) -> Point {
        Point { x: &self.x + dx, y: &self.y + dy }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point::new(x, y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// Exact cross product of `(b - a)` and `(c - a)`.
pub fn cross(a: &Point, b: &Point, c: &Point) -> Scalar {
    let (bx, by) = b.sub(a);
    let (cx, cy) = c.sub(a);
    &(&bx * &cy) - &(&by * &cx)
}

pub fn orientation(a: &Point, b: &Point, c: &Point) -> Orientation {
    match cross(a, b, c).signum() {
        1 => Orientation::Left,
        -1 => Orientation::Right,
        _ => Orientation::Collinear,
    }
}

/// Compares direction vectors by angle in `[0, 2pi)`, measured from +x.
pub fn angle_cmp(a: &(Scalar, Scalar), b: &(Scalar, Scalar)) -> Ordering {
    let upper = |v: &(Scalar, Scalar)| v.1.signum() > 0 || (v.1.is_zero() && v.0.signum() > 0);
    match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let c = &(&a.0 * &b.1) - &(&a.1 * &b.0);
            match c.signum() {
                1 => Ordering::Less,
                -1 => Ordering::Greater,
                _ => Ordering::Equal,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

/// Raw intersection of two closed segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegIntersection {
    None,
    /// Single common point with its parameters along each segment.
    Point {
        p: Point,
        t: Scalar,
        u: Scalar,
    },
    /// Collinear overlap of positive length (endpoints of the shared piece).
    Overlap(Point, Point),
}

/// Classification used by everything that counts crossings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Crossing {
    None,
    Transversal(Point),
    Degenerate,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn bbox_overlaps(&self, o: &Segment) -> bool {
        let (lx, hx) = minmax(&self.a.x, &self.b.x);
        let (ly, hy) = minmax(&self.a.y, &self.b.y);
        let (olx, ohx) = minmax(&o.a.x, &o.b.x);
        let (oly, ohy) = minmax(&o.a.y, &o.b.y);
        !(hx < olx || ohx < lx || hy < oly || ohy < ly)
    }

    /// Whether `p` lies on the closed segment.
    pub fn contains(&self, p: &Point) -> bool {
        if orientation(&self.a, &self.b, p) != Orientation::Collinear {
            return false;
        }
        let (lx, hx) = minmax(&self.a.x, &self.b.x);
        let (ly, hy) = minmax(&self.a.y, &self.b.y);
        lx <= &p.x && &p.x <= hx && ly <= &p.y && &p.y <= hy
    }

    /// Parameter of a point known to lie on the segment's line.
    pub fn param_of(&self, p: &Point) -> Scalar {
        let (dx, dy) = self.b.sub(&self.a);
        if !dx.is_zero() {
            &(&p.x - &self.a.x) / &dx
        } else {
            &(&p.y - &self.a.y) / &dy
        }
    }

    pub fn at(&self, t: &Scalar) -> Point {
        self.a.lerp(&self.b, t)
    }

    pub fn intersect(&self, o: &Segment) -> SegIntersection {
        if !self.bbox_overlaps(o) {
            return SegIntersection::None;
        }
        let (rx, ry) = self.b.sub(&self.a);
        let (sx, sy) = o.b.sub(&o.a);
        let denom = &(&rx * &sy) - &(&ry * &sx);
        let (qx, qy) = o.a.sub(&self.a);
        if denom.is_zero() {
            // parallel
            let c = &(&qx * &ry) - &(&qy * &rx);
            if !c.is_zero() {
                return SegIntersection::None;
            }
            // collinear: project onto self
            let t0 = self.param_of(&o.a);
            let t1 = self.param_of(&o.b);
            let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
            let zero = Scalar::zero();
            let one = Scalar::one();
            let a = Scalar::max(&lo, &zero);
            let b = Scalar::min(&hi, &one);
            return match a.cmp(&b) {
                Ordering::Greater => SegIntersection::None,
                Ordering::Equal => {
                    let p = self.at(&a);
                    let u = o.param_of(&p);
                    SegIntersection::Point { p, t: a, u }
                }
                Ordering::Less => SegIntersection::Overlap(self.at(&a), self.at(&b)),
            };
        }
        let t = &(&(&qx * &sy) - &(&qy * &sx)) / &denom;
        let u = &(&(&qx * &ry) - &(&qy * &rx)) / &denom;
        let zero = Scalar::zero();
        let one = Scalar::one();
        if t < zero || t > one || u < zero || u > one {
            return SegIntersection::None;
        }
        let p = if t.is_zero() {
            self.a.clone()
        } else if t == one {
            self.b.clone()
        } else if u.is_zero() {
            o.a.clone()
        } else if u == one {
            o.b.clone()
        } else {
            self.at(&t)
        };
        SegIntersection::Point { p, t, u }
    }

    /// Transversal only for a single common point interior to both.
    pub fn crossing(&self, o: &Segment) -> Crossing {
        match self.intersect(o) {
            SegIntersection::None => Crossing::None,
            SegIntersection::Overlap(..) => Crossing::Degenerate,
            SegIntersection::Point { p, t, u } => {
                let zero = Scalar::zero();
                let one = Scalar::one();
                if t == zero || t == one || u == zero || u == one {
                    Crossing::Degenerate
                } else {
                    Crossing::Transversal(p)
                }
            }
        }
    }
}

pub fn segment_crossing(s1: &Segment, s2: &Segment) -> Crossing {
    s1.crossing(s2)
}

fn minmax<'a>(a: &'a Scalar, b: &'a Scalar) -> (&'a Scalar, &'a Scalar) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn of<'a>(pts: impl IntoIterator<Item = &'a Point>) -> Option<BBox> {
        let mut it = pts.into_iter();
        let first = it.next()?;
        let mut bb = BBox { min: first.clone(), max: first.clone() };
        for p in it {
            bb.add(p);
        }
        Some(bb)
    }

    pub fn add(&mut self, p: &Point) {
        if p.x < self.min.x {
            self.min.x = p.x.clone();
        }
        if p.y < self.min.y {
            self.min.y = p.y.clone();
        }
        if p.x > self.max.x {
            self.max.x = p.x.clone();
        }
        if p.y > self.max.y {
            self.max.y = p.y.clone();
        }
    }

    pub fn overlaps(&self, o: &BBox) -> bool {
        !(self.max.x < o.min.x || o.max.x < self.min.x || self.max.y < o.min.y || o.max.y < self.min.y)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.min.x <= p.x && p.x <= self.max.x && self.min.y <= p.y && p.y <= self.max.y
    }
}
