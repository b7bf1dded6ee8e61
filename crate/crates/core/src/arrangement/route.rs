//! Paths inside a single face.
//!
//! The face is cut into vertical slabs at every vertex x-coordinate; inside a
//! slab the non-vertical boundary segments are totally ordered, and every
//! other gap between consecutive segments is a trapezoid of the face. Paths
//! run between trapezoid centres through portals on the shared slab walls.

use std::collections::VecDeque;

use super::{Arrangement, FaceId};
use crate::error::{Error, Result};
use crate::geom::{orientation, Location, Orientation, Point, Polyline, Scalar, SegIntersection, Segment};

#[derive(Debug, Clone)]
struct Seg {
    a: Point,
    b: Point,
}

impl Seg {
    fn y_at(&self, x: &Scalar) -> Scalar {
        let t = &(x - &self.a.x) / &(&self.b.x - &self.a.x);
        &self.a.y + &(&(&self.b.y - &self.a.y) * &t)
    }
}

#[derive(Debug, Clone)]
struct Trap {
    slab: usize,
    lo: usize,
    hi: usize,
}

#[derive(Debug, Clone)]
struct Portal {
    to: usize,
    wall: usize,
    lo: Scalar,
    hi: Scalar,
}

pub(crate) struct FaceRouter {
    rings: Vec<Vec<Point>>,
    obstacles: Vec<Point>,
    xs: Vec<Scalar>,
    segs: Vec<Seg>,
    traps: Vec<Trap>,
    by_slab: Vec<Vec<usize>>,
    adj: Vec<Vec<Portal>>,
}

fn window(arr: &Arrangement, extra: &[&Point]) -> Vec<Point> {
    let mut pts: Vec<&Point> = arr.nodes.iter().collect();
    pts.extend(extra.iter().copied());
    let (mut x0, mut y0, mut x1, mut y1) = match pts.first() {
        Some(p) => (p.x.clone(), p.y.clone(), p.x.clone(), p.y.clone()),
        None => (Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()),
    };
    for p in &pts {
        x0 = Scalar::min(&x0, &p.x);
        y0 = Scalar::min(&y0, &p.y);
        x1 = Scalar::max(&x1, &p.x);
        y1 = Scalar::max(&y1, &p.y);
    }
    let span = Scalar::max(&(&x1 - &x0), &(&y1 - &y0));
    let m = Scalar::from_int(span.ceil().try_into().unwrap_or(i64::MAX / 4) + 1);
    let (x0, y0, x1, y1) = (&x0 - &m, &y0 - &m, &x1 + &m, &y1 + &m);
    vec![
        Point { x: x0.clone(), y: y0.clone() },
        Point { x: x1.clone(), y: y0 },
        Point { x: x1, y: y1.clone() },
        Point { x: x0, y: y1 },
    ]
}

/// Open sub-intervals of `(lo, hi)` not covered by `blocked` (closed).
fn free_intervals(lo: &Scalar, hi: &Scalar, blocked: &[(Scalar, Scalar)]) -> Vec<(Scalar, Scalar)> {
    let mut out = Vec::new();
    let mut cur = lo.clone();
    for (bl, bh) in blocked {
        if bh < &cur {
            continue;
        }
        if bl >= hi {
            break;
        }
        if bl > &cur {
            out.push((cur.clone(), bl.clone()));
        }
        if bh > &cur {
            cur = bh.clone();
        }
    }
    if &cur < hi {
        out.push((cur, hi.clone()));
    }
    out
}

impl FaceRouter {
    /// `extra` points become obstacles: paths avoid them except as endpoints.
    pub(crate) fn new(arr: &Arrangement, f: FaceId, extra: &[&Point]) -> Self {
        let face = &arr.faces[f];
        let mut rings: Vec<Vec<Point>> = face.rings().map(|c| c.points.clone()).collect();
        if face.outer.is_none() {
            rings.push(window(arr, extra));
        }
        let obstacles: Vec<Point> = extra.iter().map(|p| (*p).clone()).collect();

        let mut xs: Vec<Scalar> = rings.iter().flatten().map(|p| p.x.clone()).collect();
        xs.extend(obstacles.iter().map(|p| p.x.clone()));
        xs.sort();
        xs.dedup();
        let wall = |x: &Scalar| xs.binary_search(x).unwrap();

        let mut blocked: Vec<Vec<(Scalar, Scalar)>> = vec![Vec::new(); xs.len()];
        let mut segs = Vec::new();
        for r in &rings {
            let k = r.len();
            for i in 0..k {
                let (p, q) = (&r[i], &r[(i + 1) % k]);
                blocked[wall(&p.x)].push((p.y.clone(), p.y.clone()));
                match p.x.cmp(&q.x) {
                    std::cmp::Ordering::Equal => {
                        let (lo, hi) = if p.y < q.y { (&p.y, &q.y) } else { (&q.y, &p.y) };
                        blocked[wall(&p.x)].push((lo.clone(), hi.clone()));
                    }
                    std::cmp::Ordering::Less => segs.push(Seg { a: p.clone(), b: q.clone() }),
                    std::cmp::Ordering::Greater => segs.push(Seg { a: q.clone(), b: p.clone() }),
                }
            }
        }
        for o in &obstacles {
            blocked[wall(&o.x)].push((o.y.clone(), o.y.clone()));
        }
        for b in &mut blocked {
            b.sort();
        }

        let mut traps = Vec::new();
        let mut by_slab = vec![Vec::new(); xs.len().saturating_sub(1)];
        for i in 0..xs.len().saturating_sub(1) {
            let xm = (&xs[i] + &xs[i + 1]).half();
            let mut active: Vec<(Scalar, usize)> = segs
                .iter()
                .enumerate()
                .filter(|(_, s)| s.a.x <= xs[i] && s.b.x >= xs[i + 1])
                .map(|(j, s)| (s.y_at(&xm), j))
                .collect();
            active.sort();
            for k in (0..active.len().saturating_sub(1)).step_by(2) {
                by_slab[i].push(traps.len());
                traps.push(Trap { slab: i, lo: active[k].1, hi: active[k + 1].1 });
            }
        }

        let mut adj: Vec<Vec<Portal>> = vec![Vec::new(); traps.len()];
        for w in 1..xs.len().saturating_sub(1) {
            let x = &xs[w];
            for &t in &by_slab[w - 1] {
                let (tl, th) = (segs[traps[t].lo].y_at(x), segs[traps[t].hi].y_at(x));
                for &u in &by_slab[w] {
                    let (ul, uh) = (segs[traps[u].lo].y_at(x), segs[traps[u].hi].y_at(x));
                    let lo = Scalar::max(&tl, &ul);
                    let hi = Scalar::min(&th, &uh);
                    if lo >= hi {
                        continue;
                    }
                    let free = free_intervals(&lo, &hi, &blocked[w]);
                    if let Some((a, b)) = free.into_iter().max_by(|p, q| (&p.1 - &p.0).cmp(&(&q.1 - &q.0))) {
                        adj[t].push(Portal { to: u, wall: w, lo: a.clone(), hi: b.clone() });
                        adj[u].push(Portal { to: t, wall: w, lo: a, hi: b });
                    }
                }
            }
        }

        FaceRouter { rings, obstacles, xs, segs, traps, by_slab, adj }
    }

    fn closure_traps(&self, p: &Point) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..self.by_slab.len() {
            if p.x < self.xs[i] || p.x > self.xs[i + 1] {
                continue;
            }
            for &t in &self.by_slab[i] {
                let tr = &self.traps[t];
                if self.segs[tr.lo].y_at(&p.x) <= p.y && p.y <= self.segs[tr.hi].y_at(&p.x) {
                    out.push(t);
                }
            }
        }
        out
    }

    fn center(&self, t: usize, salt: u64) -> Point {
        let tr = &self.traps[t];
        let x = Scalar::dyadic_between(&self.xs[tr.slab], &self.xs[tr.slab + 1], 0);
        let y = Scalar::dyadic_between(&self.segs[tr.lo].y_at(&x), &self.segs[tr.hi].y_at(&x), salt);
        Point { x, y }
    }

    fn on_ring(&self, p: &Point) -> bool {
        self.rings.iter().any(|r| crate::geom::locate_in_ring(p, r) == Location::OnBoundary)
    }

    fn inside(&self, p: &Point) -> bool {
        let mut inside = false;
        for r in &self.rings {
            match crate::geom::locate_in_ring(p, r) {
                Location::OnBoundary => return false,
                Location::Inside => inside = !inside,
                Location::Outside => {}
            }
        }
        inside
    }

    /// The straight segment works when it meets the rings only at its own
    /// endpoints, avoids obstacles, and its midpoint is inside the face.
    fn direct_ok(&self, a: &Point, b: &Point) -> bool {
        let s = Segment::new(a.clone(), b.clone());
        for r in &self.rings {
            let k = r.len();
            for i in 0..k {
                let e = Segment::new(r[i].clone(), r[(i + 1) % k].clone());
                match s.intersect(&e) {
                    SegIntersection::None => {}
                    SegIntersection::Overlap(..) => return false,
                    SegIntersection::Point { p, .. } => {
                        if &p != a && &p != b {
                            return false;
                        }
                    }
                }
            }
        }
        if self.obstacles.iter().any(|o| o != a && o != b && s.contains(o)) {
            return false;
        }
        self.inside(&a.midpoint(b))
    }

    pub(crate) fn route(&self, from: &Point, to: &Point, salt: u64) -> Result<Polyline> {
        if from == to {
            return Err(Error::PreconditionViolated("route endpoints coincide".into()));
        }
        for p in [from, to] {
            if !self.inside(p) && !self.on_ring(p) {
                return Err(Error::NotInFace(p.clone().into()));
            }
        }
        if self.direct_ok(from, to) {
            return Polyline::new(vec![from.clone(), to.clone()]);
        }
        let starts = self.closure_traps(from);
        let goals = self.closure_traps(to);
        if starts.is_empty() {
            return Err(Error::NotInFace(from.clone().into()));
        }
        if goals.is_empty() {
            return Err(Error::NotInFace(to.clone().into()));
        }

        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.traps.len()];
        let mut seen = vec![false; self.traps.len()];
        let mut queue = VecDeque::new();
        for &s in &starts {
            seen[s] = true;
            queue.push_back(s);
        }
        let mut hit = None;
        while let Some(t) = queue.pop_front() {
            if goals.contains(&t) {
                hit = Some(t);
                break;
            }
            for (pi, p) in self.adj[t].iter().enumerate() {
                if !seen[p.to] {
                    seen[p.to] = true;
                    prev[p.to] = Some((t, pi));
                    queue.push_back(p.to);
                }
            }
        }
        let end = hit.ok_or_else(|| Error::NotInFace(to.clone().into()))?;
        let mut chain = vec![(end, None)];
        let mut cur = end;
        while let Some((t, pi)) = prev[cur] {
            chain.push((t, Some(pi)));
            cur = t;
        }
        chain.reverse();

        let mut pts = vec![from.clone()];
        if chain.len() == 1 {
            let c = self.center(end, salt);
            if orientation(from, &c, to) != Orientation::Collinear {
                pts.push(c);
            }
        } else {
            for (t, via) in &chain {
                pts.push(self.center(*t, salt));
                if let Some(pi) = via {
                    let p = &self.adj[*t][*pi];
                    let y = Scalar::dyadic_between(&p.lo, &p.hi, salt);
                    pts.push(Point { x: self.xs[p.wall].clone(), y });
                }
            }
        }
        pts.push(to.clone());
        let line = Polyline::from_points_dedup(pts)?;
        if !line.is_simple() {
            return Err(Error::DegenerateIncidence(from.clone().into()));
        }
        Ok(line)
    }
}

/// A simple polyline from `from` to `to` through the interior of face `f`.
/// Endpoints may lie on the face boundary.
pub fn route_in_face(arr: &Arrangement, f: FaceId, from: &Point, to: &Point) -> Result<Polyline> {
    let r = FaceRouter::new(arr, f, &[from, to]);
    let mut last = None;
    for salt in 0..8 {
        match r.route(from, to, salt) {
            Ok(l) => return Ok(l),
            Err(e @ (Error::NotInFace(_) | Error::PreconditionViolated(_))) => return Err(e),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}
