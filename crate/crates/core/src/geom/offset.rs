//! Exact parallel offsets of polyline pieces.
//!
//! Offsets are measured in a rational metric: a line through `a` with
//! direction `d` is shifted by `eps * n / |d|_inf`, where `n` is `d` rotated
//! a quarter turn. The true distance therefore lies in `[eps, eps * sqrt 2]`.

use super::{orientation, Orientation, Point, Scalar, Segment};

#[derive(Debug, Clone)]
pub struct OffsetLine {
    pub base: Point,
    pub dir: (Scalar, Scalar),
}

fn linf(d: &(Scalar, Scalar)) -> Scalar {
    Scalar::max(&d.0.abs(), &d.1.abs())
}

impl OffsetLine {
    pub fn new(a: &Point, dir: (Scalar, Scalar), left: bool, eps: &Scalar) -> Self {
        let scale = eps / &linf(&dir);
        let (nx, ny) = if left { (-&dir.1, dir.0.clone()) } else { (dir.1.clone(), -&dir.0) };
        let base = a.offset(&(&nx * &scale), &(&ny * &scale));
        OffsetLine { base, dir }
    }

    /// Offset of the segment `a -> b` itself.
    pub fn of_segment(a: &Point, b: &Point, left: bool, eps: &Scalar) -> Self {
        OffsetLine::new(a, b.sub(a), left, eps)
    }

    pub fn intersect_line(&self, o: &OffsetLine) -> Option<Point> {
        let denom = &(&self.dir.0 * &o.dir.1) - &(&self.dir.1 * &o.dir.0);
        if denom.is_zero() {
            return None;
        }
        let (qx, qy) = o.base.sub(&self.base);
        let s = &(&(&qx * &o.dir.1) - &(&qy * &o.dir.0)) / &denom;
        Some(self.base.offset(&(&self.dir.0 * &s), &(&self.dir.1 * &s)))
    }

    /// Parameter along `seg` (on its supporting line) where this line meets it.
    pub fn meet_segment_param(&self, seg: &Segment) -> Option<Scalar> {
        let (ex, ey) = seg.b.sub(&seg.a);
        let denom = &(&self.dir.0 * &ey) - &(&self.dir.1 * &ex);
        if denom.is_zero() {
            return None;
        }
        let (qx, qy) = seg.a.sub(&self.base);
        // base + dir*s = seg.a + e*t  =>  t = cross(dir, q) / cross(e, dir) ... solved for t
        let t = &(&(&self.dir.0 * &qy) - &(&self.dir.1 * &qx)) / &(-&denom);
        Some(t)
    }
}

/// Which side of the directed segment `seg` the point lies on.
pub fn side_of_segment(seg: &Segment, p: &Point) -> Orientation {
    orientation(&seg.a, &seg.b, p)
}

/// Offset points for every vertex of `pts` (mitred at interior vertices).
///
/// Interior vertices whose neighbouring segments are parallel fall back to a
/// plain normal shift.
pub fn offset_chain(pts: &[Point], left: bool, eps: &Scalar) -> Vec<Point> {
    assert!(pts.len() >= 2);
    let lines: Vec<OffsetLine> = pts.windows(2).map(|w| OffsetLine::of_segment(&w[0], &w[1], left, eps)).collect();
    let n = pts.len();
    let mut out = Vec::with_capacity(n);
    out.push(lines[0].base.clone());
    for i in 1..n - 1 {
        match lines[i - 1].intersect_line(&lines[i]) {
            Some(p) => out.push(p),
            None => {
                let l = OffsetLine::new(&pts[i], lines[i].dir.clone(), left, eps);
                out.push(l.base);
            }
        }
    }
    let last = &lines[n - 2];
    let (dx, dy) = pts[n - 1].sub(&pts[n - 2]);
    out.push(last.base.offset(&dx, &dy));
    out
}

impl Point {
    /// A dyadic point within `radius` (per coordinate) of `self`.
    pub fn snap_near(&self, radius: &Scalar, salt: u64) -> Point {
        Point {
            x: Scalar::dyadic_between(&(&self.x - radius), &(&self.x + radius), salt),
            y: Scalar::dyadic_between(&(&self.y - radius), &(&self.y + radius), salt.wrapping_mul(7)),
        }
    }
}
