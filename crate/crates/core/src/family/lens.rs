use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{boundary_crossings, BoundaryCrossing, Family, PointSet, PseudoDisk};
use crate::arrangement::{build_arrangement, Arrangement, FaceId};
use crate::error::Result;
use crate::geom::{Location, Point, Polyline, Scalar, SimplePolygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LensKind {
    Intersection,
    FirstMinusSecond,
    SecondMinusFirst,
}

impl LensKind {
    pub const ALL: [LensKind; 3] = [LensKind::Intersection, LensKind::FirstMinusSecond, LensKind::SecondMinusFirst];

    fn admits(self, in_first: bool, in_second: bool) -> bool {
        match self {
            LensKind::Intersection => in_first && in_second,
            LensKind::FirstMinusSecond => in_first && !in_second,
            LensKind::SecondMinusFirst => !in_first && in_second,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LensRef {
    pub first: String,
    pub second: String,
    pub kind: LensKind,
}

impl fmt::Display for LensRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (&self.first, &self.second);
        match self.kind {
            LensKind::Intersection => write!(f, "{a}∩{b}"),
            LensKind::FirstMinusSecond => write!(f, "{a}\\{b}"),
            LensKind::SecondMinusFirst => write!(f, "{b}\\{a}"),
        }
    }
}

/// One of the three bounded regions cut out by two crossing boundaries.
#[derive(Debug, Clone)]
pub struct Lens {
    pub first: String,
    pub second: String,
    pub kind: LensKind,
    pub region: SimplePolygon,
    /// Part of the region boundary on the first disk's boundary.
    pub l1: Polyline,
    /// Part of the region boundary on the second disk's boundary.
    pub l2: Polyline,
}

impl Lens {
    pub fn reference(&self) -> LensRef {
        LensRef { first: self.first.clone(), second: self.second.clone(), kind: self.kind }
    }

    /// Id of the disk containing the lens.
    pub fn container(&self) -> &str {
        match self.kind {
            LensKind::Intersection | LensKind::FirstMinusSecond => &self.first,
            LensKind::SecondMinusFirst => &self.second,
        }
    }

    pub fn contains_any(&self, s: &PointSet) -> bool {
        s.points().iter().any(|p| self.region.locate(&p.point) == Location::Inside)
    }
}

/// The boundary of `poly` from crossing `a` to crossing `b` in ring order.
pub(crate) fn arc_between(
    poly: &SimplePolygon,
    a: (&Point, usize, &Scalar),
    b: (&Point, usize, &Scalar),
) -> Vec<Point> {
    let n = poly.len();
    let mut out = vec![a.0.clone()];
    if a.1 == b.1 && a.2 < b.2 {
        out.push(b.0.clone());
        return out;
    }
    let mut s = a.1;
    loop {
        s = (s + 1) % n;
        out.push(poly.vertices()[s].clone());
        if s == b.1 {
            break;
        }
    }
    out.push(b.0.clone());
    out.dedup();
    out
}

/// Both arcs of `poly` between the two crossings, as (arc from c0 to c1, arc from c1 to c0).
fn split(poly: &SimplePolygon, c: &[BoundaryCrossing], first_side: bool) -> (Vec<Point>, Vec<Point>) {
    fn key(x: &BoundaryCrossing, first_side: bool) -> (&Point, usize, &Scalar) {
        if first_side {
            (&x.point, x.seg_a, &x.t_a)
        } else {
            (&x.point, x.seg_b, &x.t_b)
        }
    }
    (
        arc_between(poly, key(&c[0], first_side), key(&c[1], first_side)),
        arc_between(poly, key(&c[1], first_side), key(&c[0], first_side)),
    )
}

/// Splits the boundary of `poly` into (arc inside `other`, arc outside).
fn classify(arcs: (Vec<Point>, Vec<Point>), other: &PseudoDisk) -> (Vec<Point>, Vec<Point>) {
    let probe = arcs.0[0].midpoint(&arcs.0[1]);
    if other.locate(&probe) == Location::Inside {
        arcs
    } else {
        (arcs.1, arcs.0)
    }
}

fn join(a: &[Point], b: &[Point]) -> Vec<Point> {
    // a ends where b starts, and b ends where a starts
    let mut v: Vec<Point> = a.to_vec();
    v.extend_from_slice(&b[1..b.len() - 1]);
    v
}

fn rev(v: &[Point]) -> Vec<Point> {
    v.iter().rev().cloned().collect()
}

/// The three lenses of a crossing pair; empty when the boundaries are disjoint.
pub fn enumerate_lenses(d1: &PseudoDisk, d2: &PseudoDisk) -> Result<Vec<Lens>> {
    let cs = boundary_crossings(&d1.region, &d2.region)?;
    if cs.len() != 2 {
        return Ok(Vec::new());
    }
    let (a1_in, a1_out) = classify(split(&d1.region, &cs, true), d2);
    let (a2_in, a2_out) = classify(split(&d2.region, &cs, false), d1);

    let mk = |kind: LensKind, l1: &Vec<Point>, l2: &Vec<Point>| -> Result<Lens> {
        // orient l2 to start where l1 ends
        let l2o = if l2[0] == *l1.last().unwrap() { l2.clone() } else { rev(l2) };
        let region = SimplePolygon::new(join(l1, &l2o))?;
        Ok(Lens {
            first: d1.id.clone(),
            second: d2.id.clone(),
            kind,
            region,
            l1: Polyline::new(l1.clone())?,
            l2: Polyline::new(l2.clone())?,
        })
    };
    Ok(vec![
        mk(LensKind::Intersection, &a1_in, &a2_in)?,
        mk(LensKind::FirstMinusSecond, &a1_out, &a2_in)?,
        mk(LensKind::SecondMinusFirst, &a1_in, &a2_out)?,
    ])
}

/// Faces making up the lens of disks `i`, `j` (family indices) of the given kind.
pub(crate) fn lens_face_set(arr: &Arrangement, i: usize, j: usize, kind: LensKind) -> BTreeSet<FaceId> {
    arr.faces
        .iter()
        .enumerate()
        .filter(|(_, f)| kind.admits(f.containment.contains(&i), f.containment.contains(&j)))
        .map(|(id, _)| id)
        .collect()
}

/// Every empty lens with its face set. Pairs are ordered so that
/// `first < second` by id.
pub(crate) fn empty_lens_candidates(
    family: &Family,
    arr: &Arrangement,
    s: &PointSet,
) -> Result<Vec<(LensRef, BTreeSet<FaceId>)>> {
    let occupied: BTreeSet<FaceId> = s.points().iter().map(|p| arr.face_of(&p.point)).collect::<Result<_>>()?;
    let disks = family.disks();
    let mut crossing_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            if super::crossing_count(&disks[i].region, &disks[j].region)? == 2 {
                crossing_pairs.insert((i, j));
            }
        }
    }
    let mut out = Vec::new();
    for (i, j) in crossing_pairs {
        let (i, j) = if disks[i].id <= disks[j].id { (i, j) } else { (j, i) };
        for kind in LensKind::ALL {
            let faces = lens_face_set(arr, i, j, kind);
            if faces.is_disjoint(&occupied) {
                out.push((LensRef { first: disks[i].id.clone(), second: disks[j].id.clone(), kind }, faces));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// A containment-minimal empty lens; ties go to the smallest `(first, second, kind)`.
pub fn find_min_empty_lens(family: &Family, s: &PointSet) -> Result<Option<Lens>> {
    let arr = build_arrangement(family)?;
    let cands = empty_lens_candidates(family, &arr, s)?;
    let minimal =
        cands.iter().find(|(_, fs)| !cands.iter().any(|(_, other)| other.len() < fs.len() && other.is_subset(fs)));
    let Some((r, _)) = minimal else {
        return Ok(None);
    };
    let d1 = family.get(&r.first).unwrap();
    let d2 = family.get(&r.second).unwrap();
    Ok(enumerate_lenses(d1, d2)?.into_iter().find(|l| l.kind == r.kind))
}
