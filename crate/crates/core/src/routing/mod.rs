//! Curve construction inside pseudo-disk arrangements.
//!
//! Curves are assembled face by face: a breadth-first search over faces
//! picks which boundaries to cross, each crossing is realized by a short
//! "gate" segment straddling one arrangement edge, and the pieces in between
//! are routed inside single faces. Waypoints carry a salt so that a caller can
//! ask for a different curve after an accidental degeneracy.

mod insert;
mod loops;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::arrangement::{build_arrangement, Arrangement, FaceId};
use crate::delaunay::{delaunay_graph, restrict_two_point};
use crate::error::{Error, Result};
use crate::family::{trace_indices, Family, PointSet};
use crate::geom::{count_ring_crossings, Point, Polyline, Scalar, SegIntersection, Segment};
use crate::normalize::{respect_normalize, ShrinkStep};

pub use insert::insert_edge;
pub use loops::remove_loops;

/// Salts tried before giving up on an edge.
const SALTS: u64 = 24;

/// A curve realizing the Delaunay edge `{x, y}` inside its witness disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawnEdge {
    pub x: String,
    pub y: String,
    pub curve: Polyline,
    pub witness: String,
    /// Crossings of the curve with each disk boundary of the witness family.
    pub ledger: BTreeMap<String, usize>,
}

impl DrawnEdge {
    pub fn touches(&self, label: &str) -> bool {
        self.x == label || self.y == label
    }

    /// The curve oriented to start at the endpoint `label`.
    pub(crate) fn curve_from(&self, label: &str) -> Polyline {
        if self.x == label {
            self.curve.clone()
        } else {
            self.curve.reversed()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Drawing {
    pub edges: Vec<DrawnEdge>,
}

impl Drawing {
    pub fn edge(&self, a: &str, b: &str) -> Option<&DrawnEdge> {
        self.edges.iter().find(|e| (e.x == a && e.y == b) || (e.x == b && e.y == a))
    }
}

/// Output of the full drawing pipeline.
#[derive(Debug, Clone)]
pub struct PlaneDrawing {
    pub drawing: Drawing,
    /// The normalized two-point family the curves were routed in.
    pub witness_family: Family,
    pub steps: Vec<ShrinkStep>,
}

pub(crate) fn ledger_of(curve: &Polyline, family: &Family) -> Result<BTreeMap<String, usize>> {
    let segs: Vec<Segment> = curve.segments().collect();
    family.disks().iter().map(|d| Ok((d.id.clone(), count_ring_crossings(&segs, &d.boundary())?))).collect()
}

fn face_edges(arr: &Arrangement) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); arr.faces.len()];
    for (e, ed) in arr.edges.iter().enumerate() {
        adj[ed.left_face].push(e);
        adj[ed.right_face].push(e);
    }
    adj
}

/// Points just inside and just outside the owner of edge `e`, joined by a
/// segment that crosses the arrangement only once, at a point of `e`.
fn gate(arr: &Arrangement, e: usize, salt: u64) -> Result<(Point, Point)> {
    let ed = &arr.edges[e];
    let c = arr.edge_point(e, salt);
    let seg = ed
        .points
        .windows(2)
        .map(|w| Segment::new(w[0].clone(), w[1].clone()))
        .find(|s| s.contains(&c))
        .expect("edge point lies on its edge");
    let (dx, dy) = seg.b.sub(&seg.a);
    let mut k = Scalar::new(1, 8);
    for _ in 0..48 {
        let (nx, ny) = (-&(&dy * &k), &dx * &k);
        let inn = c.offset(&nx, &ny);
        let out = c.offset(&-&nx, &-&ny);
        let sides_ok = matches!(arr.face_of(&inn), Ok(f) if f == ed.left_face)
            && matches!(arr.face_of(&out), Ok(f) if f == ed.right_face);
        if sides_ok {
            let g = Segment::new(inn.clone(), out.clone());
            let hits = arr.piece_segments().filter(|p| !matches!(g.intersect(p), SegIntersection::None)).count();
            if hits == 1 {
                return Ok((inn, out));
            }
        }
        k = k.half();
    }
    Err(Error::ConstructionFailed(format!("no gate across edge {e}")))
}

/// Builds a curve from `a` to `b` along the face sequence `faces`, where
/// `via[i]` is the edge between `faces[i]` and `faces[i + 1]`.
fn assemble(arr: &Arrangement, faces: &[FaceId], via: &[usize], a: &Point, b: &Point, salt: u64) -> Result<Polyline> {
    let mut pts: Vec<Point> = Vec::new();
    let mut cur = a.clone();
    for (i, &e) in via.iter().enumerate() {
        let (inn, out) = gate(arr, e, salt)?;
        let (here, there) = if arr.edges[e].left_face == faces[i] { (inn, out) } else { (out, inn) };
        let piece = arr.router(faces[i], &[&cur, &here]).route(&cur, &here, salt)?;
        append(&mut pts, piece);
        cur = there;
    }
    let last = *faces.last().unwrap();
    if &cur == b {
        pts.push(cur);
    } else {
        let piece = arr.router(last, &[&cur, b]).route(&cur, b, salt)?;
        append(&mut pts, piece);
    }
    let line = Polyline::from_points_dedup(pts)?;
    if !line.is_simple() {
        return Err(Error::DegenerateIncidence(a.clone().into()));
    }
    Ok(line)
}

fn append(pts: &mut Vec<Point>, piece: Polyline) {
    pts.extend(piece.vertices().iter().cloned());
}

/// Breadth-first face path from `from` to `to` using moves allowed by `step`
/// (current face, edge, next face).
fn face_path(
    arr: &Arrangement,
    adj: &[Vec<usize>],
    from: FaceId,
    to: FaceId,
    step: impl Fn(FaceId, usize, FaceId) -> bool,
) -> Option<(Vec<FaceId>, Vec<usize>)> {
    let mut prev: Vec<Option<(FaceId, usize)>> = vec![None; arr.faces.len()];
    let mut seen = vec![false; arr.faces.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(f) = queue.pop_front() {
        if f == to {
            let mut faces = vec![to];
            let mut via = Vec::new();
            let mut c = to;
            while let Some((p, e)) = prev[c] {
                faces.push(p);
                via.push(e);
                c = p;
            }
            faces.reverse();
            via.reverse();
            return Some((faces, via));
        }
        for &e in &adj[f] {
            let ed = &arr.edges[e];
            let g = if ed.left_face == f { ed.right_face } else { ed.left_face };
            if !seen[g] && step(f, e, g) {
                seen[g] = true;
                prev[g] = Some((f, e));
                queue.push_back(g);
            }
        }
    }
    None
}

/// A curve from `q` to `p` that crosses, exactly once each, the boundaries of
/// the disks not containing `q`, and no other boundary. Every disk of
/// `family_p` must contain `p`.
pub fn ray_route(family_p: &Family, p: &Point, q: &Point) -> Result<Polyline> {
    let arr = build_arrangement(family_p)?;
    let fq = arr.face_of(q)?;
    let fp = arr.face_of(p)?;
    if arr.faces[fp].containment.len() != family_p.len() {
        return Err(Error::PreconditionViolated("not every disk contains p".into()));
    }
    let qset = arr.faces[fq].containment.clone();
    let adj = face_edges(&arr);
    let (faces, via) = face_path(&arr, &adj, fq, fp, |f, e, g| {
        let ed = &arr.edges[e];
        ed.right_face == f && ed.left_face == g && !qset.contains(&ed.owner)
    })
    .ok_or_else(|| Error::NoMonotonePath(q.clone().into()))?;
    let mut last = None;
    for salt in 0..SALTS {
        match assemble(&arr, &faces, &via, q, p, salt) {
            Ok(l) => return Ok(l),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

/// Routes edges of a respecting two-point family; the arrangement is built
/// once and reused.
pub(crate) struct EdgeRouter<'a> {
    family: &'a Family,
    s: &'a PointSet,
    arr: Arrangement,
    adj: Vec<Vec<usize>>,
    witness: BTreeMap<(usize, usize), usize>,
}

impl<'a> EdgeRouter<'a> {
    pub(crate) fn new(family: &'a Family, s: &'a PointSet) -> Result<Self> {
        let mut witness = BTreeMap::new();
        for (k, d) in family.disks().iter().enumerate() {
            let t: Vec<usize> = trace_indices(d, s)?.into_iter().collect();
            if t.len() != 2 {
                return Err(Error::PreconditionViolated(format!("disk {} does not hold exactly two points", d.id)));
            }
            witness.entry((t[0], t[1])).or_insert(k);
        }
        let arr = build_arrangement(family)?;
        let adj = face_edges(&arr);
        Ok(EdgeRouter { family, s, arr, adj, witness })
    }

    pub(crate) fn route(&self, x: &str, y: &str, salt: u64) -> Result<DrawnEdge> {
        let xi = self.s.index_of(x).ok_or_else(|| Error::UnknownId(x.to_string()))?;
        let yi = self.s.index_of(y).ok_or_else(|| Error::UnknownId(y.to_string()))?;
        let w = *self
            .witness
            .get(&(xi.min(yi), xi.max(yi)))
            .ok_or_else(|| Error::NoWitnessDisk(x.to_string(), y.to_string()))?;
        let (px, py) = (self.s.point(xi), self.s.point(yi));
        let arr = &self.arr;
        let fx = arr.face_of(px)?;
        let fy = arr.face_of(py)?;
        let start: BTreeSet<usize> = arr.faces[fx].containment.clone();
        let (faces, via) = face_path(arr, &self.adj, fx, fy, |f, e, _| {
            let o = arr.edges[e].owner;
            // crossed so far = start Δ current; each boundary at most once
            o != w && start.contains(&o) == arr.faces[f].containment.contains(&o)
        })
        .ok_or_else(|| Error::BudgetSearchFailed(x.to_string(), y.to_string()))?;
        let curve = assemble(arr, &faces, &via, px, py, salt)?;
        let ledger = ledger_of(&curve, self.family)?;
        Ok(DrawnEdge { x: x.to_string(), y: y.to_string(), curve, witness: self.family.disks()[w].id.clone(), ledger })
    }

    fn route_any(&self, x: &str, y: &str) -> Result<DrawnEdge> {
        let mut last = None;
        for salt in 0..SALTS {
            match self.route(x, y, salt) {
                Ok(e) => return Ok(e),
                Err(e @ (Error::NoWitnessDisk(..) | Error::BudgetSearchFailed(..) | Error::UnknownId(_))) => {
                    return Err(e)
                }
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap())
    }
}

/// A curve from `x` to `y` inside their witness disk that crosses every other
/// boundary at most once. The family must respect `s` with every trace of
/// size two.
pub fn transversal_edge(family2: &Family, s: &PointSet, x: &str, y: &str) -> Result<DrawnEdge> {
    EdgeRouter::new(family2, s)?.route_any(x, y)
}

/// Normalizes the family, then routes and inserts every Delaunay edge in
/// lexicographic order.
pub fn plane_drawing(family: &Family, s: &PointSet) -> Result<PlaneDrawing> {
    let (normalized, steps) = respect_normalize(family, s)?;
    let family2 = restrict_two_point(&normalized, s)?;
    let graph = delaunay_graph(&family2, s)?;
    let router = EdgeRouter::new(&family2, s)?;
    let mut drawing = Drawing::default();
    for (x, y) in graph.edge_pairs() {
        let mut last = None;
        for salt in 0..SALTS {
            let attempt = router.route(x, y, salt).and_then(|f| insert_edge(&drawing, f, &family2, s));
            match attempt {
                Ok(d) => {
                    drawing = d;
                    last = None;
                    break;
                }
                Err(
                    e @ (Error::NoWitnessDisk(..) | Error::BudgetSearchFailed(..) | Error::ForeignEdgeCrossing(..)),
                ) => return Err(e),
                Err(e) => last = Some(e),
            }
        }
        if let Some(e) = last {
            return Err(e);
        }
    }
    Ok(PlaneDrawing { drawing, witness_family: family2, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::PseudoDisk;

    pub(crate) fn rect(id: &str, x0: Scalar, y0: Scalar, x1: Scalar, y1: Scalar) -> PseudoDisk {
        PseudoDisk::from_points(
            id,
            vec![
                Point { x: x0.clone(), y: y0.clone() },
                Point { x: x1.clone(), y: y0 },
                Point { x: x1, y: y1.clone() },
                Point { x: x0, y: y1 },
            ],
        )
        .unwrap()
    }

    pub(crate) fn pqr() -> PointSet {
        PointSet::from_pairs([("p", Point::new(1, 1)), ("q", Point::new(3, 1)), ("r", Point::new(2, 3))]).unwrap()
    }

    pub(crate) fn fixture() -> Family {
        Family::new(vec![
            rect("D_pq", 0.into(), 0.into(), 4.into(), 2.into()),
            rect("D_pr", Scalar::new(1, 2), Scalar::new(1, 2), Scalar::new(5, 2), Scalar::new(7, 2)),
            rect("D_all", (-1).into(), (-1).into(), 5.into(), 5.into()),
        ])
        .unwrap()
    }

    fn counts(curve: &Polyline, fam: &Family) -> BTreeMap<String, usize> {
        ledger_of(curve, fam).unwrap()
    }

    #[test]
    fn ray_route_fixture() {
        let fam = fixture();
        let (p, q) = (Point::new(1, 1), Point::new(3, 1));
        let r = ray_route(&fam, &p, &q).unwrap();
        assert_eq!(r.first(), &q);
        assert_eq!(r.last(), &p);
        let c = counts(&r, &fam);
        assert_eq!((c["D_pq"], c["D_pr"], c["D_all"]), (0, 1, 0));
        // q in p's own face
        let r = ray_route(&fam, &p, &Point::ratio(3, 3, 2)).unwrap();
        assert!(counts(&r, &fam).values().all(|&v| v == 0));
    }

    #[test]
    fn ray_route_nested() {
        let fam = Family::new(vec![
            rect("N1", 0.into(), 0.into(), 2.into(), 2.into()),
            rect("N2", (-1).into(), (-1).into(), 3.into(), 3.into()),
            rect("N3", (-2).into(), (-2).into(), 4.into(), 4.into()),
        ])
        .unwrap();
        let r = ray_route(&fam, &Point::new(1, 1), &Point::new(10, 1)).unwrap();
        assert!(counts(&r, &fam).values().all(|&v| v == 1));
        assert!(r.is_simple());
    }

    #[test]
    fn transversal_in_fixture() {
        let s = pqr();
        let fam2 = restrict_two_point(&fixture(), &s).unwrap();
        let e = transversal_edge(&fam2, &s, "p", "q").unwrap();
        assert_eq!(e.witness, "D_pq");
        assert_eq!(e.ledger["D_pr"], 1);
        assert_eq!(e.ledger["D_pq"], 0);
        assert!(matches!(transversal_edge(&fam2, &s, "q", "r"), Err(Error::NoWitnessDisk(..))));
    }

    #[test]
    fn plane_drawing_fixture() {
        let s = pqr();
        let out = plane_drawing(&fixture(), &s).unwrap();
        assert_eq!(out.drawing.edges.len(), 2);
        let (a, b) = (&out.drawing.edges[0].curve, &out.drawing.edges[1].curve);
        // only the shared endpoint p in common
        for sa in a.segments() {
            for sb in b.segments() {
                if let SegIntersection::Point { p, .. } = sa.intersect(&sb) {
                    assert_eq!(p, Point::new(1, 1));
                }
            }
        }
        let none = PointSet::from_pairs([("a", Point::new(100, 100))]).unwrap();
        assert!(plane_drawing(&fixture(), &none).unwrap().drawing.edges.is_empty());
    }
}
