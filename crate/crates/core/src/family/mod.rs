//! Pseudo-disk families: validation, traces, and lenses.

mod lens;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Location, Point, Scalar, SegIntersection, Segment, SimplePolygon};

pub(crate) use lens::{arc_between, empty_lens_candidates, lens_face_set};
pub use lens::{enumerate_lenses, find_min_empty_lens, Lens, LensKind, LensRef};

/// A Jordan region with an identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoDisk {
    pub id: String,
    pub region: SimplePolygon,
}

impl PseudoDisk {
    pub fn new(id: impl Into<String>, region: SimplePolygon) -> Self {
        PseudoDisk { id: id.into(), region }
    }

    pub fn from_points(id: impl Into<String>, pts: Vec<Point>) -> Result<Self> {
        Ok(PseudoDisk { id: id.into(), region: SimplePolygon::new(pts)? })
    }

    pub fn boundary(&self) -> Vec<Segment> {
        self.region.edges().collect()
    }

    pub fn locate(&self, p: &Point) -> Location {
        self.region.locate(p)
    }
}

/// An ordered list of pseudo-disks with unique ids.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Family {
    disks: Vec<PseudoDisk>,
}

impl Family {
    pub fn new(disks: Vec<PseudoDisk>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for d in &disks {
            if !seen.insert(d.id.clone()) {
                return Err(Error::DuplicateId(d.id.clone()));
            }
        }
        Ok(Family { disks })
    }

    pub fn empty() -> Self {
        Family::default()
    }

    pub fn disks(&self) -> &[PseudoDisk] {
        &self.disks
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.disks.iter().position(|d| d.id == id)
    }

    pub fn get(&self, id: &str) -> Option<&PseudoDisk> {
        self.disks.iter().find(|d| d.id == id)
    }

    pub(crate) fn replace(&mut self, idx: usize, disk: PseudoDisk) {
        self.disks[idx] = disk;
    }

    pub(crate) fn remove(&mut self, idx: usize) -> PseudoDisk {
        self.disks.remove(idx)
    }

    /// Subfamily of disks for which `keep` holds, order preserved.
    pub fn filter(&self, mut keep: impl FnMut(&PseudoDisk) -> bool) -> Family {
        Family { disks: self.disks.iter().filter(|d| keep(d)).cloned().collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: String,
    pub point: Point,
}

/// Labeled, pairwise distinct points.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<LabeledPoint>,
}

impl PointSet {
    pub fn new(points: Vec<LabeledPoint>) -> Result<Self> {
        let mut labels = BTreeSet::new();
        let mut coords = BTreeSet::new();
        for p in &points {
            if !labels.insert(p.label.clone()) {
                return Err(Error::DuplicateId(p.label.clone()));
            }
            if !coords.insert(p.point.clone()) {
                return Err(Error::Validation(format!("point {} repeated at {}", p.label, p.point)));
            }
        }
        Ok(PointSet { points })
    }

    pub fn from_pairs<L: Into<String>>(pairs: impl IntoIterator<Item = (L, Point)>) -> Result<Self> {
        PointSet::new(pairs.into_iter().map(|(l, p)| LabeledPoint { label: l.into(), point: p }).collect())
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.points[i].label
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i].point
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p.label == label)
    }

    pub fn get(&self, label: &str) -> Option<&Point> {
        self.points.iter().find(|p| p.label == label).map(|p| &p.point)
    }

    pub fn labels_of(&self, idx: &BTreeSet<usize>) -> BTreeSet<String> {
        idx.iter().map(|&i| self.points[i].label.clone()).collect()
    }
}

/// Indices (into a `PointSet`) of points strictly inside a disk.
pub type TraceSet = BTreeSet<usize>;

/// Labels of the points strictly inside `disk`.
pub fn trace_of(disk: &PseudoDisk, s: &PointSet) -> Result<BTreeSet<String>> {
    Ok(s.labels_of(&trace_indices(disk, s)?))
}

pub(crate) fn trace_indices(disk: &PseudoDisk, s: &PointSet) -> Result<TraceSet> {
    let mut out = TraceSet::new();
    for (i, lp) in s.points().iter().enumerate() {
        match disk.locate(&lp.point) {
            Location::Inside => {
                out.insert(i);
            }
            Location::OnBoundary => return Err(Error::OnBoundary(lp.point.clone().into())),
            Location::Outside => {}
        }
    }
    Ok(out)
}

/// Trace of every disk, as labels.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Trace {
    pub by_disk: std::collections::BTreeMap<String, BTreeSet<String>>,
}

impl Trace {
    pub fn of(family: &Family, s: &PointSet) -> Result<Self> {
        let mut by_disk = std::collections::BTreeMap::new();
        for d in family.disks() {
            by_disk.insert(d.id.clone(), trace_of(d, s)?);
        }
        Ok(Trace { by_disk })
    }
}

/// One transversal crossing between two boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BoundaryCrossing {
    pub point: Point,
    pub seg_a: usize,
    pub t_a: Scalar,
    pub seg_b: usize,
    pub t_b: Scalar,
}

/// All crossings of `∂a` and `∂b`; any non-transversal contact is an error.
pub(crate) fn boundary_crossings(a: &SimplePolygon, b: &SimplePolygon) -> Result<Vec<BoundaryCrossing>> {
    let ea: Vec<Segment> = a.edges().collect();
    let eb: Vec<Segment> = b.edges().collect();
    let bba = crate::geom::BBox::of(a.vertices()).unwrap();
    let bbb = crate::geom::BBox::of(b.vertices()).unwrap();
    let mut out = Vec::new();
    if !bba.overlaps(&bbb) {
        return Ok(out);
    }
    for (i, s) in ea.iter().enumerate() {
        for (j, t) in eb.iter().enumerate() {
            match s.intersect(t) {
                SegIntersection::None => {}
                SegIntersection::Overlap(p, _) => return Err(Error::DegenerateIncidence(p.into())),
                SegIntersection::Point { p, t: ta, u: tb } => {
                    let zero = Scalar::zero();
                    let one = Scalar::one();
                    if ta == zero || ta == one || tb == zero || tb == one {
                        return Err(Error::DegenerateIncidence(p.into()));
                    }
                    out.push(BoundaryCrossing { point: p, seg_a: i, t_a: ta, seg_b: j, t_b: tb });
                }
            }
        }
    }
    Ok(out)
}

/// Number of boundary crossings of two polygons; `Err` on degeneracy.
pub(crate) fn crossing_count(a: &SimplePolygon, b: &SimplePolygon) -> Result<usize> {
    boundary_crossings(a, b).map(|v| v.len())
}

/// Sum over unordered pairs of boundary crossings.
pub fn total_crossings(family: &Family) -> Result<usize> {
    let d = family.disks();
    let mut n = 0;
    for i in 0..d.len() {
        for j in (i + 1)..d.len() {
            n += crossing_count(&d[i].region, &d[j].region)?;
        }
    }
    Ok(n)
}

/// Whether region `inner` is contained in region `outer`: boundaries do not
/// meet and a vertex of `inner` is inside `outer`.
pub(crate) fn region_contains(outer: &SimplePolygon, inner: &SimplePolygon) -> Result<bool> {
    if crossing_count(outer, inner)? != 0 {
        return Ok(false);
    }
    Ok(outer.locate(&inner.vertices()[0]) == Location::Inside)
}

/// Whether two regions are disjoint (no crossing, neither inside the other).
pub(crate) fn regions_disjoint(a: &SimplePolygon, b: &SimplePolygon) -> Result<bool> {
    if crossing_count(a, b)? != 0 {
        return Ok(false);
    }
    Ok(a.locate(&b.vertices()[0]) == Location::Outside && b.locate(&a.vertices()[0]) == Location::Outside)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    CrossingCount { first: String, second: String, count: usize },
    DegenerateIncidence { first: String, second: String, at: Point },
    PointOnBoundary { label: String, disk: String },
    ConcurrentBoundaries { at: Point, disks: Vec<String> },
    InvalidPolygon { disk: String, reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CrossingCount { first, second, count } => {
                write!(f, "boundaries of {first} and {second} cross {count} times")
            }
            Violation::DegenerateIncidence { first, second, at } => {
                write!(f, "boundaries of {first} and {second} touch or overlap at {at}")
            }
            Violation::PointOnBoundary { label, disk } => write!(f, "point {label} lies on the boundary of {disk}"),
            Violation::ConcurrentBoundaries { at, disks } => {
                write!(f, "boundaries {} pass through {at}", disks.join(", "))
            }
            Violation::InvalidPolygon { disk, reason } => write!(f, "disk {disk}: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            Err(Error::Validation(msgs.join("; ")))
        }
    }
}

/// Checks every pseudo-disk and generic-position condition, listing all
/// violations rather than stopping at the first.
pub fn validate_family(disks: &[PseudoDisk], s: &PointSet) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen: HashMap<Point, BTreeSet<String>> = HashMap::new();
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            let (a, b) = (&disks[i], &disks[j]);
            match boundary_crossings(&a.region, &b.region) {
                Err(Error::DegenerateIncidence(at)) => violations.push(Violation::DegenerateIncidence {
                    first: a.id.clone(),
                    second: b.id.clone(),
                    at: *at,
                }),
                Err(e) => unreachable!("boundary_crossings only reports degeneracy: {e}"),
                Ok(cs) => {
                    if !cs.is_empty() && cs.len() != 2 {
                        violations.push(Violation::CrossingCount {
                            first: a.id.clone(),
                            second: b.id.clone(),
                            count: cs.len(),
                        });
                    }
                    for c in cs {
                        let e = seen.entry(c.point).or_default();
                        e.insert(a.id.clone());
                        e.insert(b.id.clone());
                    }
                }
            }
        }
    }
    let mut concurrent: Vec<(Point, BTreeSet<String>)> = seen.into_iter().filter(|(_, ids)| ids.len() > 2).collect();
    concurrent.sort();
    for (at, ids) in concurrent {
        violations.push(Violation::ConcurrentBoundaries { at, disks: ids.into_iter().collect() });
    }
    for lp in s.points() {
        for d in disks {
            if d.locate(&lp.point) == Location::OnBoundary {
                violations.push(Violation::PointOnBoundary { label: lp.label.clone(), disk: d.id.clone() });
            }
        }
    }
    ValidationReport { violations }
}

/// Checks only the pairs involving `disks[idx]`, plus concurrency of its new
/// crossings with the crossing points in `others`.
pub(crate) fn validate_one_against(
    disks: &[PseudoDisk],
    idx: usize,
    s: &PointSet,
    expected: impl Fn(usize) -> Option<usize>,
) -> Result<()> {
    let d = &disks[idx];
    for lp in s.points() {
        if d.locate(&lp.point) == Location::OnBoundary {
            return Err(Error::OnBoundary(lp.point.clone().into()));
        }
    }
    let mut mine: Vec<Point> = Vec::new();
    for (j, o) in disks.iter().enumerate() {
        if j == idx {
            continue;
        }
        let cs = boundary_crossings(&d.region, &o.region)?;
        if !cs.is_empty() && cs.len() != 2 {
            return Err(Error::Validation(format!("{} and {} cross {} times", d.id, o.id, cs.len())));
        }
        if let Some(want) = expected(j) {
            if cs.len() != want {
                return Err(Error::Validation(format!(
                    "{} and {} cross {} times, expected {}",
                    d.id,
                    o.id,
                    cs.len(),
                    want
                )));
            }
        }
        mine.extend(cs.into_iter().map(|c| c.point));
    }
    // a new crossing may not sit on a third boundary
    for p in &mine {
        let on = disks.iter().filter(|o| o.region.edges().any(|e| e.contains(p))).count();
        if on > 2 {
            return Err(Error::DegenerateIncidence(p.clone().into()));
        }
    }
    Ok(())
}
