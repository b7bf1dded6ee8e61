//! Adding a transversal curve to a plane drawing.
//!
//! Only edges sharing an endpoint with the new curve can cross it. The part
//! of the curve up to its last crossing with an edge at `x` is replaced by a
//! parallel copy of that edge, and likewise from its first later crossing with
//! an edge at `y`.

use std::cmp::Ordering;

use super::{ledger_of, Drawing, DrawnEdge};
use crate::error::{Error, Result};
use crate::family::{Family, PointSet};
use crate::geom::{
    count_ring_crossings, offset_chain, orientation, Location, OffsetLine, Orientation, Point, Polyline, Scalar,
    SegIntersection, Segment,
};

const MAX_HALVINGS: u32 = 32;

#[derive(Debug, Clone)]
pub(crate) struct Hit {
    pub aseg: usize,
    pub at: Scalar,
    pub bseg: usize,
    pub bt: Scalar,
}

impl Hit {
    fn key_cmp(&self, o: &Hit) -> Ordering {
        (self.aseg, &self.at).cmp(&(o.aseg, &o.at))
    }
}

/// Transversal crossings of `a` with `b`, ignoring contact at a common
/// endpoint. Any other contact is a degeneracy.
pub(crate) fn curve_hits(a: &Polyline, b: &Polyline) -> Result<Vec<Hit>> {
    let ends_a = [a.first(), a.last()];
    let shared: Vec<&Point> = [b.first(), b.last()].into_iter().filter(|p| ends_a.contains(p)).collect();
    let mut out = Vec::new();
    for (i, s) in a.segments().enumerate() {
        for (j, t) in b.segments().enumerate() {
            if !s.bbox_overlaps(&t) {
                continue;
            }
            match s.intersect(&t) {
                SegIntersection::None => {}
                SegIntersection::Overlap(p, _) => return Err(Error::DegenerateIncidence(p.into())),
                SegIntersection::Point { p, t: ta, u: tb } => {
                    if shared.contains(&&p) {
                        continue;
                    }
                    let interior = |v: &Scalar| v.signum() > 0 && v < &Scalar::one();
                    if !(interior(&ta) && interior(&tb)) {
                        return Err(Error::DegenerateIncidence(p.into()));
                    }
                    out.push(Hit { aseg: i, at: ta, bseg: j, bt: tb });
                }
            }
        }
    }
    Ok(out)
}

fn linf(a: &Point, b: &Point) -> Scalar {
    let (dx, dy) = b.sub(a);
    Scalar::max(&dx.abs(), &dy.abs())
}

/// An edge curve oriented from the shared endpoint, cut at a crossing with `f`.
struct Shadow {
    /// Vertices from the shared endpoint up to and including the crossing.
    prefix: Vec<Point>,
    /// Offset side (relative to `prefix` direction).
    left: bool,
    /// Segment of `f` holding the crossing, and its parameter there.
    fseg: usize,
    ft: Scalar,
}

fn shadow(f: &Polyline, other: &DrawnEdge, from: &str, hit: &Hit, toward_end: bool) -> Shadow {
    let g = other.curve_from(from);
    let n = other.curve.num_segments();
    let (gseg, gt) =
        if other.x == from { (hit.bseg, hit.bt.clone()) } else { (n - 1 - hit.bseg, &Scalar::one() - &hit.bt) };
    let s = g.segment(gseg);
    let z = s.at(&gt);
    let mut prefix: Vec<Point> = g.vertices()[..=gseg].to_vec();
    prefix.push(z);
    let fs = f.segment(hit.aseg);
    // side of g on which f continues (x side) or arrives from (y side)
    let probe = if toward_end { &fs.b } else { &fs.a };
    let left = orientation(&s.a, &s.b, probe) == Orientation::Left;
    Shadow { prefix, left, fseg: hit.aseg, ft: hit.at.clone() }
}

impl Shadow {
    /// Offset copy from the shared endpoint to a point on `f` beside the
    /// crossing, or `None` if the offset misses the `f` segment window
    /// `(lo, hi)`.
    fn build(&self, f: &Polyline, eps: &Scalar, lo: &Scalar, hi: &Scalar, salt: u64) -> Option<(Vec<Point>, Scalar)> {
        let m = self.prefix.len() - 1;
        let line = OffsetLine::of_segment(&self.prefix[m - 1], &self.prefix[m], self.left, eps);
        let fs = f.segment(self.fseg);
        let ts = line.meet_segment_param(&fs)?;
        if &ts <= lo || &ts >= hi {
            return None;
        }
        let w = Scalar::min(&(&ts - lo), &(hi - &ts)).half();
        let t = Scalar::dyadic_between(&(&ts - &w), &(&ts + &w), salt);
        let raw = offset_chain(&self.prefix, self.left, eps);
        let r = eps / &Scalar::from_int(8);
        let mut pts = vec![self.prefix[0].clone()];
        pts.extend(raw[1..m].iter().enumerate().map(|(i, p)| p.snap_near(&r, salt.wrapping_add(i as u64))));
        pts.push(fs.at(&t));
        Some((pts, t))
    }

    fn min_len(&self, f: &Polyline) -> Scalar {
        let mut m = self.prefix.windows(2).map(|w| linf(&w[0], &w[1])).min().unwrap();
        let fs = f.segment(self.fseg);
        let z = fs.at(&self.ft);
        m = Scalar::min(&m, &linf(&fs.a, &z));
        Scalar::min(&m, &linf(&z, &fs.b))
    }
}

fn dyadic_floor(x: &Scalar) -> Scalar {
    let mut p = Scalar::one();
    let mut k = 0;
    while &p > x && k < 200 {
        k += 1;
        p = Scalar::pow2_neg(k);
    }
    p
}

fn candidate(f: &Polyline, xs: Option<&Shadow>, ys: Option<&Shadow>, eps: &Scalar, salt: u64) -> Option<Vec<Point>> {
    let last = f.num_segments() - 1;
    let (head, ix, tx) = match xs {
        Some(sh) => {
            let (pts, t) = sh.build(f, eps, &sh.ft, &Scalar::one(), salt)?;
            (pts, sh.fseg, t)
        }
        None => (vec![f.first().clone()], 0, Scalar::zero()),
    };
    let (tail, iy) = match ys {
        Some(sh) => {
            let lo = if sh.fseg == ix { tx.clone() } else { Scalar::zero() };
            let (mut pts, _) = sh.build(f, eps, &lo, &sh.ft, salt.wrapping_add(1))?;
            pts.reverse();
            (pts, sh.fseg)
        }
        None => (vec![f.last().clone()], last),
    };
    let mut out = head;
    if ix < iy {
        out.extend_from_slice(&f.vertices()[ix + 1..=iy]);
    }
    out.extend(tail);
    Some(out)
}

fn accept(cand: Vec<Point>, f: &DrawnEdge, drawing: &Drawing, family2: &Family, s: &PointSet) -> Result<Polyline> {
    let line = Polyline::from_points_dedup(cand)?;
    if !line.is_simple() {
        return Err(Error::ConstructionFailed("rerouted curve is not simple".into()));
    }
    for g in &drawing.edges {
        if !curve_hits(&line, &g.curve)?.is_empty() {
            return Err(Error::ConstructionFailed("rerouted curve still crosses".into()));
        }
    }
    let w = family2.get(&f.witness).ok_or_else(|| Error::UnknownId(f.witness.clone()))?;
    let v = line.vertices();
    if v[1..v.len() - 1].iter().any(|p| w.locate(p) != Location::Inside) {
        return Err(Error::ConstructionFailed("rerouted curve leaves the witness disk".into()));
    }
    let segs: Vec<Segment> = line.segments().collect();
    if count_ring_crossings(&segs, &w.boundary())? != 0 {
        return Err(Error::ConstructionFailed("rerouted curve leaves the witness disk".into()));
    }
    for lp in s.points() {
        if lp.label != f.x && lp.label != f.y && segs.iter().any(|sg| sg.contains(&lp.point)) {
            return Err(Error::ConstructionFailed(format!("rerouted curve passes through {}", lp.label)));
        }
    }
    if ledger_of(&line, family2)? != f.ledger {
        return Err(Error::ConstructionFailed("crossing ledger changed".into()));
    }
    Ok(line)
}

/// Adds `f` to `drawing`, rerouting it along edges at its endpoints so that
/// no crossings arise. The per-disk crossing counts of `f` are preserved.
pub fn insert_edge(drawing: &Drawing, f: DrawnEdge, family2: &Family, s: &PointSet) -> Result<Drawing> {
    let mut x_best: Option<(Hit, usize)> = None;
    let mut y_hits: Vec<(Hit, usize)> = Vec::new();
    for (k, g) in drawing.edges.iter().enumerate() {
        let hits = curve_hits(&f.curve, &g.curve)?;
        if hits.is_empty() {
            continue;
        }
        let at_x = g.touches(&f.x);
        let at_y = g.touches(&f.y);
        if !at_x && !at_y {
            return Err(Error::ForeignEdgeCrossing(g.x.clone(), g.y.clone()));
        }
        for h in hits {
            if at_x {
                if x_best.as_ref().is_none_or(|(b, _)| h.key_cmp(b) == Ordering::Greater) {
                    x_best = Some((h.clone(), k));
                }
            } else {
                y_hits.push((h, k));
            }
        }
    }
    let mut out = drawing.clone();
    if x_best.is_none() && y_hits.is_empty() {
        out.edges.push(f);
        return Ok(out);
    }
    let y_best = y_hits
        .into_iter()
        .filter(|(h, _)| x_best.as_ref().is_none_or(|(b, _)| h.key_cmp(b) == Ordering::Greater))
        .min_by(|a, b| a.0.key_cmp(&b.0));

    let xs = x_best.as_ref().map(|(h, k)| shadow(&f.curve, &drawing.edges[*k], &f.x, h, true));
    let ys = y_best.as_ref().map(|(h, k)| shadow(&f.curve, &drawing.edges[*k], &f.y, h, false));
    let mut m: Option<Scalar> = None;
    for sh in xs.iter().chain(ys.iter()) {
        let v = sh.min_len(&f.curve);
        m = Some(match m {
            Some(c) => Scalar::min(&c, &v),
            None => v,
        });
    }
    let mut eps = dyadic_floor(&(&m.unwrap() / &Scalar::from_int(4)));
    let mut last_err = None;
    for round in 0..=MAX_HALVINGS {
        if let Some(c) = candidate(&f.curve, xs.as_ref(), ys.as_ref(), &eps, round as u64) {
            match accept(c, &f, drawing, family2, s) {
                Ok(line) => {
                    let mut g = f.clone();
                    g.curve = line;
                    out.edges.push(g);
                    return Ok(out);
                }
                Err(Error::DegenerateIncidence(_))
                | Err(Error::ConstructionFailed(_))
                | Err(Error::InvalidPolyline(_)) => {}
                Err(e) => last_err = Some(e),
            }
        }
        eps = eps.half();
    }
    if let Some(e) = last_err {
        return Err(e);
    }
    Err(Error::OffsetExhausted(f.x.clone(), f.y.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::PseudoDisk;
    use crate::routing::ledger_of;

    fn edge(x: &str, y: &str, pts: &[(i64, i64)], witness: &str, fam: &Family) -> DrawnEdge {
        let curve = Polyline::new(pts.iter().map(|&p| p.into()).collect()).unwrap();
        let ledger = ledger_of(&curve, fam).unwrap();
        DrawnEdge { x: x.into(), y: y.into(), curve, witness: witness.into(), ledger }
    }

    fn square(id: &str, x0: i64, y0: i64, x1: i64, y1: i64) -> PseudoDisk {
        PseudoDisk::from_points(id, vec![(x0, y0).into(), (x1, y0).into(), (x1, y1).into(), (x0, y1).into()]).unwrap()
    }

    #[test]
    fn no_crossing_keeps_curve() {
        let fam = Family::new(vec![square("W", -10, -10, 10, 10)]).unwrap();
        let s = PointSet::from_pairs([("x", Point::new(0, 0)), ("y", Point::new(4, 0))]).unwrap();
        let f = edge("x", "y", &[(0, 0), (4, 0)], "W", &fam);
        let d = insert_edge(&Drawing::default(), f.clone(), &fam, &s).unwrap();
        assert_eq!(d.edges, vec![f]);
    }

    #[test]
    fn star_reroutes_along_x_edge() {
        let fam = Family::new(vec![square("W", -10, -10, 10, 10)]).unwrap();
        let s = PointSet::from_pairs([
            ("x", Point::new(0, 0)),
            ("a", Point::new(0, 4)),
            ("b", Point::new(-4, 0)),
            ("y", Point::new(4, 4)),
        ])
        .unwrap();
        let xa = edge("x", "a", &[(0, 0), (3, 3), (0, 4)], "W", &fam);
        let xb = edge("x", "b", &[(0, 0), (-4, 0)], "W", &fam);
        let drawing = Drawing { edges: vec![xa, xb] };
        // from x, goes left of xa's first leg and cuts across it
        let f = edge("x", "y", &[(0, 0), (1, 3), (4, 4)], "W", &fam);
        assert_eq!(curve_hits(&f.curve, &drawing.edges[0].curve).unwrap().len(), 1);
        let d = insert_edge(&drawing, f.clone(), &fam, &s).unwrap();
        let g = &d.edges[2];
        assert_eq!(g.curve.first(), f.curve.first());
        assert_eq!(g.curve.last(), f.curve.last());
        for e in &d.edges[..2] {
            assert!(curve_hits(&g.curve, &e.curve).unwrap().is_empty());
        }
        assert_eq!(g.ledger, f.ledger);
    }

    #[test]
    fn both_ends_rerouted() {
        let fam = Family::new(vec![square("W", -10, -10, 20, 10), square("V", 3, -5, 5, 5)]).unwrap();
        let s = PointSet::from_pairs([
            ("x", Point::new(0, 0)),
            ("y", Point::new(8, 0)),
            ("a", Point::new(2, 3)),
            ("b", Point::new(6, -3)),
        ])
        .unwrap();
        let xa = edge("x", "a", &[(0, 0), (2, -2), (2, 3)], "W", &fam);
        let yb = edge("y", "b", &[(8, 0), (6, 2), (6, -3)], "W", &fam);
        let drawing = Drawing { edges: vec![xa, yb] };
        let f = edge("x", "y", &[(0, 0), (8, 0)], "W", &fam);
        assert_eq!(f.ledger["V"], 2);
        let d = insert_edge(&drawing, f.clone(), &fam, &s).unwrap();
        let g = &d.edges[2];
        for e in &d.edges[..2] {
            assert!(curve_hits(&g.curve, &e.curve).unwrap().is_empty());
        }
        assert_eq!(g.ledger, f.ledger);
        assert!(g.curve.num_segments() > 1);
    }

    #[test]
    fn foreign_crossing_is_rejected() {
        let fam = Family::new(vec![square("W", -10, -10, 10, 10)]).unwrap();
        let s = PointSet::from_pairs([
            ("x", Point::new(0, 0)),
            ("y", Point::new(4, 0)),
            ("a", Point::new(2, -2)),
            ("b", Point::new(2, 2)),
        ])
        .unwrap();
        let ab = edge("a", "b", &[(2, -2), (2, 2)], "W", &fam);
        let f = edge("x", "y", &[(0, 0), (4, 0)], "W", &fam);
        let r = insert_edge(&Drawing { edges: vec![ab] }, f, &fam, &s);
        assert!(matches!(r, Err(Error::ForeignEdgeCrossing(..))));
    }
}
