//! Hypergraph-preserving shrinking.
//!
//! A containment-minimal empty lens is removed from the disk containing it by
//! replacing the arc of the other boundary with a nearby parallel copy, which
//! eliminates exactly two crossings. Repeating until no empty lens remains and
//! then dropping enlarged duplicates yields a family that respects the points.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arrangement::build_arrangement;
use crate::error::{Error, Result};
use crate::family::{
    arc_between, boundary_crossings, crossing_count, empty_lens_candidates, find_min_empty_lens, lens_face_set,
    region_contains, regions_disjoint, total_crossings, trace_indices, validate_one_against, BoundaryCrossing, Family,
    Lens, LensKind, LensRef, PointSet, PseudoDisk,
};
use crate::geom::{offset_chain, Location, OffsetLine, Point, Scalar, SegIntersection, Segment, SimplePolygon};

const MAX_HALVINGS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShrinkKind {
    LensRemoval(LensRef),
    DeleteDuplicate { kept: String },
    DeleteSmallTrace,
}

/// One shrinking step applied to the disk `disk`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrinkStep {
    pub disk: String,
    pub kind: ShrinkKind,
    pub crossings_before: usize,
    pub crossings_after: usize,
}

impl fmt::Display for ShrinkStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ShrinkKind::LensRemoval(l) => write!(f, "shrink {} off lens {}", self.disk, l)?,
            ShrinkKind::DeleteDuplicate { kept } => write!(f, "delete {} (same trace as {})", self.disk, kept)?,
            ShrinkKind::DeleteSmallTrace => write!(f, "delete {} (trace below 2 points)", self.disk)?,
        }
        write!(f, "; crossings {} -> {}", self.crossings_before, self.crossings_after)
    }
}

/// Index of the disk to shrink and of the other disk, for a lens of `family`.
fn roles(family: &Family, lens: &Lens) -> Result<(usize, usize)> {
    let i = family.index_of(&lens.first).ok_or_else(|| Error::UnknownId(lens.first.clone()))?;
    let j = family.index_of(&lens.second).ok_or_else(|| Error::UnknownId(lens.second.clone()))?;
    Ok(match lens.kind {
        LensKind::Intersection if lens.second < lens.first => (j, i),
        LensKind::Intersection | LensKind::FirstMinusSecond => (i, j),
        LensKind::SecondMinusFirst => (j, i),
    })
}

fn linf(a: &Point, b: &Point) -> Scalar {
    let (dx, dy) = b.sub(a);
    Scalar::max(&dx.abs(), &dy.abs())
}

/// Largest power of two not above `x` (capped at 1).
fn dyadic_floor(x: &Scalar) -> Scalar {
    let mut k = 0;
    let mut p = Scalar::one();
    while &p > x && k < 200 {
        k += 1;
        p = Scalar::pow2_neg(k);
    }
    p
}

struct Geometry {
    /// Arc of the other boundary inside the shrinking disk, in its ring order.
    l2: Vec<Point>,
    /// Arc of the shrinking disk's boundary that survives, in its ring order.
    keep: Vec<Point>,
    /// Crossing where `keep` starts / ends, in `(segment, param)` on the shrinking disk.
    start: (usize, Scalar),
    end: (usize, Scalar),
    /// Offset side relative to the ring direction of the other disk.
    left: bool,
}

fn geometry(f1: &PseudoDisk, f2: &PseudoDisk, into_f2: bool) -> Result<Geometry> {
    let cs = boundary_crossings(&f1.region, &f2.region)?;
    if cs.len() != 2 {
        return Err(Error::PreconditionViolated(format!("{} and {} do not cross", f1.id, f2.id)));
    }
    let on1 = |c: &BoundaryCrossing| (c.point.clone(), c.seg_a, c.t_a.clone());
    let on2 = |c: &BoundaryCrossing| (c.point.clone(), c.seg_b, c.t_b.clone());
    let arc = |poly: &SimplePolygon, a: &(Point, usize, Scalar), b: &(Point, usize, Scalar)| {
        arc_between(poly, (&a.0, a.1, &a.2), (&b.0, b.1, &b.2))
    };
    let inside = |pts: &Vec<Point>, d: &PseudoDisk| d.locate(&pts[0].midpoint(&pts[1])) == Location::Inside;

    let (x, y) = (on2(&cs[0]), on2(&cs[1]));
    let l2 = {
        let a = arc(&f2.region, &x, &y);
        if inside(&a, f1) {
            a
        } else {
            arc(&f2.region, &y, &x)
        }
    };
    let (x, y) = (on1(&cs[0]), on1(&cs[1]));
    let a = arc(&f1.region, &x, &y);
    let (start, end, keep) = if inside(&a, f2) == into_f2 {
        ((x.1, x.2), (y.1, y.2), a)
    } else {
        let b = arc(&f1.region, &y, &x);
        ((y.1, y.2), (x.1, x.2), b)
    };
    Ok(Geometry { l2, keep, start, end, left: into_f2 })
}

fn initial_eps(f1: &PseudoDisk, g: &Geometry) -> Scalar {
    let mut m: Option<Scalar> = None;
    let mut take = |v: Scalar| {
        if m.as_ref().is_none_or(|c| &v < c) {
            m = Some(v);
        }
    };
    for w in g.l2.windows(2) {
        take(linf(&w[0], &w[1]));
    }
    for (seg, _) in [&g.start, &g.end] {
        let e = f1.region.edge(*seg);
        for p in [&g.keep[0], g.keep.last().unwrap()] {
            if e.contains(p) {
                take(linf(&e.a, p));
                take(linf(p, &e.b));
            }
        }
    }
    dyadic_floor(&(&m.unwrap() / &Scalar::from_int(4)))
}

/// Candidate boundary for the shrunk disk at offset `eps`, together with the
/// replacement chain from the end of `keep` back to its start.
fn candidate(f1: &PseudoDisk, g: &Geometry, eps: &Scalar, salt: u64) -> Option<(Vec<Point>, Vec<Point>)> {
    let m = g.l2.len() - 1;
    let first_line = OffsetLine::of_segment(&g.l2[0], &g.l2[1], g.left, eps);
    let last_line = OffsetLine::of_segment(&g.l2[m - 1], &g.l2[m], g.left, eps);
    // l2 runs P -> Q; keep runs U -> V with {U, V} = {P, Q}
    let u_is_p = g.keep[0] == g.l2[0];
    let (u_line, v_line) = if u_is_p { (&first_line, &last_line) } else { (&last_line, &first_line) };

    let trim = |line: &OffsetLine, (seg, t): &(usize, Scalar), forward: bool| -> Option<Point> {
        let e = f1.region.edge(*seg);
        let ts = line.meet_segment_param(&e)?;
        let (lo, hi) = if forward { (t.clone(), Scalar::one()) } else { (Scalar::zero(), t.clone()) };
        if ts <= lo || ts >= hi {
            return None;
        }
        let w = Scalar::min(&(&ts - &lo), &(&hi - &ts)).half();
        Some(e.at(&Scalar::dyadic_between(&(&ts - &w), &(&ts + &w), salt)))
    };
    let wu = trim(u_line, &g.start, true)?;
    let wv = trim(v_line, &g.end, false)?;

    let raw = offset_chain(&g.l2, g.left, eps);
    let r = eps / &Scalar::from_int(8);
    let mut inner: Vec<Point> =
        raw[1..m].iter().enumerate().map(|(i, p)| p.snap_near(&r, salt.wrapping_add(i as u64))).collect();
    if u_is_p {
        // chain goes V=Q back to U=P
        inner.reverse();
    }
    let mut ring = vec![wu.clone()];
    ring.extend_from_slice(&g.keep[1..g.keep.len() - 1]);
    ring.push(wv.clone());
    ring.extend(inner.iter().cloned());
    let mut chain = vec![wv];
    chain.extend(inner);
    chain.push(wu);
    Some((ring, chain))
}

/// The chain stays strictly inside `f1` apart from its two endpoints.
fn chain_inside(f1: &PseudoDisk, chain: &[Point]) -> bool {
    let (a, b) = (&chain[0], chain.last().unwrap());
    if chain[1..chain.len() - 1].iter().any(|p| f1.locate(p) != Location::Inside) {
        return false;
    }
    for w in chain.windows(2) {
        let s = Segment::new(w[0].clone(), w[1].clone());
        for e in f1.region.edges() {
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
    f1.locate(&chain[0].midpoint(&chain[1])) == Location::Inside
}

/// Shrinks the disk containing `lens` so that it no longer meets the lens.
pub fn remove_lens(family: &Family, s: &PointSet, lens: &Lens) -> Result<(Family, ShrinkStep)> {
    if lens.contains_any(s) {
        return Err(Error::NotEmpty(lens.reference().to_string()));
    }
    let arr = build_arrangement(family)?;
    let (i, j) = (
        family.index_of(&lens.first).ok_or_else(|| Error::UnknownId(lens.first.clone()))?,
        family.index_of(&lens.second).ok_or_else(|| Error::UnknownId(lens.second.clone()))?,
    );
    let mine = lens_face_set(&arr, i, j, lens.kind);
    let cands = empty_lens_candidates(family, &arr, s)?;
    if cands.iter().any(|(_, fs)| fs.len() < mine.len() && fs.is_subset(&mine)) {
        return Err(Error::NotMinimal(lens.reference().to_string()));
    }

    let (a, b) = roles(family, lens)?;
    let f1 = &family.disks()[a];
    let f2 = &family.disks()[b];
    let into_f2 =
        lens.kind == LensKind::FirstMinusSecond && a == i || lens.kind == LensKind::SecondMinusFirst && a == j;
    let g = geometry(f1, f2, into_f2)?;
    let before = total_crossings(family)?;
    let old_trace = trace_indices(f1, s)?;
    let old_counts: Vec<usize> = family
        .disks()
        .iter()
        .enumerate()
        .map(|(k, d)| if k == a { Ok(0) } else { crossing_count(&f1.region, &d.region) })
        .collect::<Result<_>>()?;

    let mut eps = initial_eps(f1, &g);
    let mut last_err = String::from("no candidate");
    for round in 0..=MAX_HALVINGS {
        if let Some((ring, chain)) = candidate(f1, &g, &eps, round as u64) {
            match accept(family, s, a, b, into_f2, &old_trace, &old_counts, ring, &chain) {
                Ok(next) => {
                    let after = total_crossings(&next)?;
                    let step = ShrinkStep {
                        disk: f1.id.clone(),
                        kind: ShrinkKind::LensRemoval(lens.reference()),
                        crossings_before: before,
                        crossings_after: after,
                    };
                    return Ok((next, step));
                }
                Err(e) => last_err = e.to_string(),
            }
        }
        eps = eps.half();
    }
    Err(Error::ConstructionFailed(format!("lens {}: {}", lens.reference(), last_err)))
}

#[allow(clippy::too_many_arguments)]
fn accept(
    family: &Family,
    s: &PointSet,
    a: usize,
    b: usize,
    into_f2: bool,
    old_trace: &BTreeSet<usize>,
    old_counts: &[usize],
    ring: Vec<Point>,
    chain: &[Point],
) -> Result<Family> {
    let f1 = &family.disks()[a];
    let f2 = &family.disks()[b];
    let region = SimplePolygon::new(ring)?;
    if !chain_inside(f1, chain) {
        return Err(Error::ConstructionFailed("replacement leaves the disk".into()));
    }
    let shrunk = PseudoDisk::new(f1.id.clone(), region);
    let side_ok = if into_f2 {
        region_contains(&f2.region, &shrunk.region)?
    } else {
        regions_disjoint(&f2.region, &shrunk.region)?
    };
    if !side_ok {
        return Err(Error::ConstructionFailed("shrunk disk still meets the lens".into()));
    }
    if &trace_indices(&shrunk, s)? != old_trace {
        return Err(Error::ConstructionFailed("trace changed".into()));
    }
    let mut disks = family.disks().to_vec();
    disks[a] = shrunk;
    validate_one_against(&disks, a, s, |k| Some(if k == b { 0 } else { old_counts[k] }))?;
    let mut next = family.clone();
    next.replace(a, disks.swap_remove(a));
    Ok(next)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RespectViolation {
    /// Trace of `inner` is within that of `outer`, but the region is not.
    NotContained { inner: String, outer: String },
    /// The traces are disjoint, but the regions meet.
    NotDisjoint { a: String, b: String },
}

impl fmt::Display for RespectViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RespectViolation::NotContained { inner, outer } => {
                write!(f, "trace of {inner} is inside trace of {outer} but {inner} is not inside {outer}")
            }
            RespectViolation::NotDisjoint { a, b } => write!(f, "{a} and {b} have disjoint traces but overlap"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RespectReport {
    pub violations: Vec<RespectViolation>,
}

impl RespectReport {
    pub fn respects(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every pair violating trace-implies-containment or trace-implies-disjointness.
pub fn check_respects(family: &Family, s: &PointSet) -> Result<RespectReport> {
    let disks = family.disks();
    let traces: Vec<BTreeSet<usize>> = disks.iter().map(|d| trace_indices(d, s)).collect::<Result<_>>()?;
    if let Some(k) = traces.iter().position(|t| t.len() < 2) {
        return Err(Error::SmallTracePresent(disks[k].id.clone()));
    }
    let mut violations = Vec::new();
    for x in 0..disks.len() {
        for y in 0..disks.len() {
            if x == y {
                continue;
            }
            if traces[x].is_subset(&traces[y]) && !region_contains(&disks[y].region, &disks[x].region)? {
                violations
                    .push(RespectViolation::NotContained { inner: disks[x].id.clone(), outer: disks[y].id.clone() });
            }
            if x < y && traces[x].is_disjoint(&traces[y]) && !regions_disjoint(&disks[x].region, &disks[y].region)? {
                violations.push(RespectViolation::NotDisjoint { a: disks[x].id.clone(), b: disks[y].id.clone() });
            }
        }
    }
    Ok(RespectReport { violations })
}

/// Keeps one disk per trace: the innermost of each nested group.
pub fn dedupe_traces(family: &Family, s: &PointSet) -> Result<(Family, Vec<ShrinkStep>)> {
    let disks = family.disks();
    let mut groups: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    for (k, d) in disks.iter().enumerate() {
        groups.entry(trace_indices(d, s)?).or_default().push(k);
    }
    let mut drop: BTreeMap<usize, usize> = BTreeMap::new();
    for members in groups.values().filter(|m| m.len() > 1) {
        for (x, &p) in members.iter().enumerate() {
            for &q in &members[x + 1..] {
                if !region_contains(&disks[p].region, &disks[q].region)?
                    && !region_contains(&disks[q].region, &disks[p].region)?
                {
                    return Err(Error::EqualTraceNotNested(disks[p].id.clone(), disks[q].id.clone()));
                }
            }
        }
        // nested chain: the innermost is contained in every other member
        let inner = *members
            .iter()
            .find(|&&k| {
                members.iter().all(|&o| o == k || region_contains(&disks[o].region, &disks[k].region).unwrap_or(false))
            })
            .expect("a nested chain has an innermost member");
        for &k in members.iter().filter(|&&k| k != inner) {
            drop.insert(k, inner);
        }
    }
    let mut steps = Vec::new();
    let mut cur = family.clone();
    for (&k, &kept) in drop.iter().rev() {
        let before = total_crossings(&cur)?;
        let removed = cur.remove(cur.index_of(&disks[k].id).unwrap());
        steps.push(ShrinkStep {
            disk: removed.id,
            kind: ShrinkKind::DeleteDuplicate { kept: disks[kept].id.clone() },
            crossings_before: before,
            crossings_after: total_crossings(&cur)?,
        });
    }
    steps.reverse();
    Ok((cur, steps))
}

/// Drops disks with fewer than two points, removes empty lenses until none
/// remain, then deduplicates traces. The result respects `s`.
pub fn respect_normalize(family: &Family, s: &PointSet) -> Result<(Family, Vec<ShrinkStep>)> {
    let mut steps = Vec::new();
    let mut cur = family.clone();
    for d in family.disks() {
        if trace_indices(d, s)?.len() < 2 {
            let before = total_crossings(&cur)?;
            cur.remove(cur.index_of(&d.id).unwrap());
            steps.push(ShrinkStep {
                disk: d.id.clone(),
                kind: ShrinkKind::DeleteSmallTrace,
                crossings_before: before,
                crossings_after: total_crossings(&cur)?,
            });
        }
    }
    while let Some(lens) = find_min_empty_lens(&cur, s)? {
        let (next, step) = remove_lens(&cur, s, &lens)?;
        cur = next;
        steps.push(step);
    }
    let (cur, dedup) = dedupe_traces(&cur, s)?;
    steps.extend(dedup);
    Ok((cur, steps))
}
