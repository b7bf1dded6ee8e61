//! Brute-force checkers for drawings and graphs.
//!
//! These use only the exact geometric primitives, never the arrangement or
//! routing code they are meant to check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arrangement::build_arrangement;
use crate::delaunay::DelaunayGraph;
use crate::error::{Error, Result};
use crate::family::{trace_indices, Family, PointSet, PseudoDisk};
use crate::geom::{point_in_polygon, Crossing, Location, Point, Polyline, SegIntersection, Segment};
use crate::routing::{Drawing, DrawnEdge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Planarity,
    Containment,
    CrossingBudget,
    Parity,
    Coverage,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckKind::Planarity => "planarity",
            CheckKind::Containment => "containment",
            CheckKind::CrossingBudget => "crossing-budget",
            CheckKind::Parity => "parity",
            CheckKind::Coverage => "coverage",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: CheckKind,
    /// Offending edges as `(x, y)` label pairs.
    pub edges: Vec<(String, String)>,
    pub disk: Option<String>,
    /// Exact witness coordinates (crossing or offending vertex).
    pub points: Vec<Point>,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)?;
        for (x, y) in &self.edges {
            write!(f, " [edge {x}-{y}]")?;
        }
        if let Some(d) = &self.disk {
            write!(f, " [disk {d}]")?;
        }
        for p in &self.points {
            write!(f, " at {p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checked: BTreeSet<CheckKind>,
    pub failures: Vec<Counterexample>,
}

impl VerifyReport {
    fn new(check: CheckKind) -> Self {
        VerifyReport { checked: BTreeSet::from([check]), failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn status(&self, check: CheckKind) -> Option<bool> {
        self.checked.contains(&check).then(|| self.failures.iter().all(|c| c.check != check))
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.checked.extend(other.checked);
        self.failures.extend(other.failures);
    }

    fn fail(&mut self, c: Counterexample) {
        self.failures.push(c);
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &k in &self.checked {
            let n = self.failures.iter().filter(|c| c.check == k).count();
            if n == 0 {
                writeln!(f, "PASS {k}")?;
            } else {
                writeln!(f, "FAIL {k} ({n})")?;
            }
        }
        for c in &self.failures {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

fn pair(e: &DrawnEdge) -> (String, String) {
    (e.x.clone(), e.y.clone())
}

fn segs(c: &Polyline) -> Vec<Segment> {
    c.segments().collect()
}

fn contact_point(a: &Segment, b: &Segment) -> Option<Point> {
    match a.intersect(b) {
        SegIntersection::None => None,
        SegIntersection::Point { p, .. } => Some(p),
        SegIntersection::Overlap(p, _) => Some(p),
    }
}

/// Transversal crossings of two segment chains, or the first non-transversal
/// contact.
fn crossings(a: &[Segment], b: &[Segment]) -> std::result::Result<Vec<Point>, Box<Point>> {
    let mut out = Vec::new();
    for s in a {
        for t in b {
            match s.crossing(t) {
                Crossing::None => {}
                Crossing::Transversal(p) => out.push(p),
                Crossing::Degenerate => {
                    return Err(Box::new(contact_point(s, t).expect("degenerate contact has a point")))
                }
            }
        }
    }
    Ok(out)
}

fn endpoint_of(e: &DrawnEdge, label: &str) -> Point {
    if e.x == label {
        e.curve.first().clone()
    } else {
        e.curve.last().clone()
    }
}

/// No two curves meet except at a common endpoint, and every curve is simple.
pub fn verify_planarity(drawing: &Drawing) -> VerifyReport {
    let mut rep = VerifyReport::new(CheckKind::Planarity);
    for e in &drawing.edges {
        if let Some((i, j)) = e.curve.first_self_intersection() {
            let (a, b) = (e.curve.segment(i), e.curve.segment(j));
            rep.fail(Counterexample {
                check: CheckKind::Planarity,
                edges: vec![pair(e)],
                disk: None,
                points: contact_point(&a, &b).into_iter().collect(),
                detail: "curve is not simple".into(),
            });
        }
    }
    let all: Vec<Vec<Segment>> = drawing.edges.iter().map(|e| segs(&e.curve)).collect();
    for i in 0..drawing.edges.len() {
        for j in i + 1..drawing.edges.len() {
            let (e, f) = (&drawing.edges[i], &drawing.edges[j]);
            let allowed: Vec<Point> = [&e.x, &e.y]
                .into_iter()
                .filter(|l| f.touches(l))
                .filter_map(|l| {
                    let p = endpoint_of(e, l);
                    (p == endpoint_of(f, l)).then_some(p)
                })
                .collect();
            let mut bad = Vec::new();
            for s in &all[i] {
                for t in &all[j] {
                    match s.intersect(t) {
                        SegIntersection::None => {}
                        SegIntersection::Point { p, .. } if allowed.contains(&p) => {}
                        SegIntersection::Point { p, .. } => bad.push(p),
                        SegIntersection::Overlap(p, q) => {
                            bad.push(p);
                            bad.push(q);
                        }
                    }
                }
            }
            if !bad.is_empty() {
                rep.fail(Counterexample {
                    check: CheckKind::Planarity,
                    edges: vec![pair(e), pair(f)],
                    disk: None,
                    points: bad,
                    detail: "curves meet away from a shared endpoint".into(),
                });
            }
        }
    }
    rep
}

fn inside(d: &PseudoDisk, p: &Point) -> bool {
    point_in_polygon(p, &d.region) == Location::Inside
}

/// Every curve lies strictly inside every disk of `original` that holds both
/// of its endpoints. Also checks that curves start and end at their labels.
pub fn verify_containment(drawing: &Drawing, original: &Family, s: &PointSet) -> VerifyReport {
    let mut rep = VerifyReport::new(CheckKind::Containment);
    for e in &drawing.edges {
        let (Some(px), Some(py)) = (s.get(&e.x), s.get(&e.y)) else {
            rep.fail(Counterexample {
                check: CheckKind::Containment,
                edges: vec![pair(e)],
                disk: None,
                points: vec![],
                detail: "unknown endpoint label".into(),
            });
            continue;
        };
        if e.curve.first() != px || e.curve.last() != py {
            rep.fail(Counterexample {
                check: CheckKind::Containment,
                edges: vec![pair(e)],
                disk: None,
                points: vec![e.curve.first().clone(), e.curve.last().clone()],
                detail: "curve does not join its endpoints".into(),
            });
            continue;
        }
        let cs = segs(&e.curve);
        for d in original.disks() {
            if !(inside(d, px) && inside(d, py)) {
                continue;
            }
            let outside: Vec<Point> = e.curve.vertices().iter().filter(|v| !inside(d, v)).cloned().collect();
            if !outside.is_empty() {
                rep.fail(Counterexample {
                    check: CheckKind::Containment,
                    edges: vec![pair(e)],
                    disk: Some(d.id.clone()),
                    points: outside,
                    detail: "curve vertex not strictly inside".into(),
                });
                continue;
            }
            match crossings(&cs, &d.boundary()) {
                Ok(v) if v.is_empty() => {}
                Ok(v) => rep.fail(Counterexample {
                    check: CheckKind::Containment,
                    edges: vec![pair(e)],
                    disk: Some(d.id.clone()),
                    points: v,
                    detail: "curve crosses the boundary".into(),
                }),
                Err(p) => rep.fail(Counterexample {
                    check: CheckKind::Containment,
                    edges: vec![pair(e)],
                    disk: Some(d.id.clone()),
                    points: vec![*p],
                    detail: "curve touches the boundary".into(),
                }),
            }
        }
    }
    rep
}

/// Every boundary is crossed at most once, and exactly once when the disk
/// holds one endpoint but not the other. A recorded ledger entry must match.
pub fn verify_crossing_budget(edge: &DrawnEdge, family: &Family) -> VerifyReport {
    let mut rep = VerifyReport::new(CheckKind::CrossingBudget);
    let cs = segs(&edge.curve);
    let (a, b) = (edge.curve.first(), edge.curve.last());
    for d in family.disks() {
        let mut fail = |points: Vec<Point>, detail: String| {
            rep.fail(Counterexample {
                check: CheckKind::CrossingBudget,
                edges: vec![pair(edge)],
                disk: Some(d.id.clone()),
                points,
                detail,
            })
        };
        let hits = match crossings(&cs, &d.boundary()) {
            Ok(v) => v,
            Err(p) => {
                fail(vec![*p], "curve touches the boundary".into());
                continue;
            }
        };
        let separates = inside(d, a) != inside(d, b);
        let want = usize::from(separates);
        if hits.len() != want {
            fail(hits.clone(), format!("{} crossings, expected {want}", hits.len()));
        }
        if let Some(&n) = edge.ledger.get(&d.id) {
            if n != hits.len() {
                fail(hits, format!("ledger records {n} crossings"));
            }
        }
    }
    rep
}

/// Two curves whose endpoints lie in the symmetric difference of their
/// disks, each inside its own disk, cross an even number of times.
pub fn verify_parity(
    e1: &DrawnEdge,
    e2: &DrawnEdge,
    d1: &PseudoDisk,
    d2: &PseudoDisk,
    s: &PointSet,
) -> Result<VerifyReport> {
    let check_pre = |e: &DrawnEdge, own: &PseudoDisk, other: &PseudoDisk| -> Result<()> {
        for l in [&e.x, &e.y] {
            let p = s.get(l).ok_or_else(|| Error::UnknownId(l.clone()))?;
            if !inside(own, p) || other.locate(p) != Location::Outside {
                return Err(Error::PreconditionViolated(format!("endpoint {l} not in {} minus {}", own.id, other.id)));
            }
        }
        let inner = e.curve.vertices().iter().all(|v| inside(own, v));
        if !inner || !matches!(crossings(&segs(&e.curve), &own.boundary()), Ok(v) if v.is_empty()) {
            return Err(Error::PreconditionViolated(format!("curve {}-{} leaves {}", e.x, e.y, own.id)));
        }
        Ok(())
    };
    check_pre(e1, d1, d2)?;
    check_pre(e2, d2, d1)?;
    let mut rep = VerifyReport::new(CheckKind::Parity);
    match crossings(&segs(&e1.curve), &segs(&e2.curve)) {
        Ok(v) if v.len() % 2 == 0 => {}
        Ok(v) => rep.fail(Counterexample {
            check: CheckKind::Parity,
            edges: vec![pair(e1), pair(e2)],
            disk: None,
            detail: format!("{} crossings", v.len()),
            points: v,
        }),
        Err(p) => rep.fail(Counterexample {
            check: CheckKind::Parity,
            edges: vec![pair(e1), pair(e2)],
            disk: None,
            points: vec![*p],
            detail: "curves touch".into(),
        }),
    }
    Ok(rep)
}

/// Delaunay graph by direct scan. Points on a boundary count as outside.
pub fn brute_force_delaunay(family: &Family, s: &PointSet) -> DelaunayGraph {
    let mut edges: BTreeMap<(String, String), String> = BTreeMap::new();
    for d in family.disks() {
        let mut held: Vec<&str> =
            s.points().iter().filter(|lp| inside(d, &lp.point)).map(|lp| lp.label.as_str()).collect();
        if held.len() != 2 {
            continue;
        }
        held.sort_unstable();
        let key = (held[0].to_string(), held[1].to_string());
        match edges.get(&key) {
            Some(w) if w <= &d.id => {}
            _ => {
                edges.insert(key, d.id.clone());
            }
        }
    }
    DelaunayGraph { vertices: s.points().iter().map(|p| p.label.clone()).collect(), edges }
}

/// The drawing has exactly one curve per Delaunay edge of `original`.
pub fn verify_coverage(drawing: &Drawing, original: &Family, s: &PointSet) -> VerifyReport {
    let mut rep = VerifyReport::new(CheckKind::Coverage);
    let graph = brute_force_delaunay(original, s);
    let mut drawn: BTreeMap<(String, String), usize> = BTreeMap::new();
    for e in &drawing.edges {
        let key = if e.x <= e.y { pair(e) } else { (e.y.clone(), e.x.clone()) };
        *drawn.entry(key).or_default() += 1;
    }
    for (key, n) in &drawn {
        if *n > 1 || !graph.edges.contains_key(key) {
            rep.fail(Counterexample {
                check: CheckKind::Coverage,
                edges: vec![key.clone()],
                disk: None,
                points: vec![],
                detail: if *n > 1 { "edge drawn more than once".into() } else { "not a Delaunay edge".into() },
            });
        }
    }
    for key in graph.edges.keys().filter(|k| !drawn.contains_key(*k)) {
        rep.fail(Counterexample {
            check: CheckKind::Coverage,
            edges: vec![key.clone()],
            disk: None,
            points: vec![],
            detail: "Delaunay edge missing from the drawing".into(),
        });
    }
    rep
}

/// Runs coverage, planarity and containment against `original`, and the
/// crossing budget of every curve against `witness_family`.
pub fn verify_drawing(drawing: &Drawing, original: &Family, witness_family: &Family, s: &PointSet) -> VerifyReport {
    let mut rep = verify_coverage(drawing, original, s);
    rep.merge(verify_planarity(drawing));
    rep.merge(verify_containment(drawing, original, s));
    let mut budget = VerifyReport::new(CheckKind::CrossingBudget);
    for e in &drawing.edges {
        budget.merge(verify_crossing_budget(e, witness_family));
    }
    rep.merge(budget);
    rep
}

/// A face of depth at least four inside a witness disk whose other disks do
/// not all share one endpoint of the witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedFace {
    pub witness: String,
    pub others: Vec<String>,
    pub rep: Point,
}

/// Checks, for a two-point family respecting `s`, that the disks covering a
/// deep face of a witness disk `F_{x,y}` all contain `x` or all contain `y`.
pub fn mixed_deep_faces(family2: &Family, s: &PointSet) -> Result<Vec<MixedFace>> {
    let arr = build_arrangement(family2)?;
    let traces: Vec<BTreeSet<usize>> = family2.disks().iter().map(|d| trace_indices(d, s)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for face in &arr.faces {
        if face.containment.len() < 4 {
            continue;
        }
        for &w in &face.containment {
            let others: Vec<usize> = face.containment.iter().copied().filter(|&o| o != w).collect();
            let same = traces[w].iter().any(|p| others.iter().all(|&o| traces[o].contains(p)));
            if !same {
                out.push(MixedFace {
                    witness: family2.disks()[w].id.clone(),
                    others: others.iter().map(|&o| family2.disks()[o].id.clone()).collect(),
                    rep: face.rep.clone(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::delaunay_graph;
    use crate::geom::Scalar;
    use crate::routing::plane_drawing;

    fn rect(id: &str, x0: Scalar, y0: Scalar, x1: Scalar, y1: Scalar) -> PseudoDisk {
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

    fn irect(id: &str, x0: i64, y0: i64, x1: i64, y1: i64) -> PseudoDisk {
        rect(id, x0.into(), y0.into(), x1.into(), y1.into())
    }

    fn pqr() -> PointSet {
        PointSet::from_pairs([("p", Point::new(1, 1)), ("q", Point::new(3, 1)), ("r", Point::new(2, 3))]).unwrap()
    }

    fn fixture() -> Family {
        Family::new(vec![
            irect("D_pq", 0, 0, 4, 2),
            rect("D_pr", Scalar::new(1, 2), Scalar::new(1, 2), Scalar::new(5, 2), Scalar::new(7, 2)),
            irect("D_all", -1, -1, 5, 5),
        ])
        .unwrap()
    }

    fn edge(x: &str, y: &str, pts: &[(i64, i64)], witness: &str) -> DrawnEdge {
        DrawnEdge {
            x: x.into(),
            y: y.into(),
            curve: Polyline::new(pts.iter().map(|&p| p.into()).collect()).unwrap(),
            witness: witness.into(),
            ledger: BTreeMap::new(),
        }
    }

    #[test]
    fn fixture_drawing_passes_everything() {
        let out = plane_drawing(&fixture(), &pqr()).unwrap();
        let rep = verify_drawing(&out.drawing, &fixture(), &out.witness_family, &pqr());
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.checked.len(), 4);
        assert_eq!(out.drawing.edges.len(), 2);
    }

    #[test]
    fn crossing_curves_fail_planarity() {
        let d = Drawing { edges: vec![edge("a", "b", &[(0, 0), (2, 2)], "W"), edge("c", "d", &[(0, 2), (2, 0)], "W")] };
        let rep = verify_planarity(&d);
        assert!(!rep.passed());
        assert_eq!(rep.failures[0].points, vec![Point::new(1, 1)]);
        assert!(verify_planarity(&Drawing::default()).passed());
    }

    #[test]
    fn shared_endpoint_is_allowed_but_overlap_is_not() {
        let ok =
            Drawing { edges: vec![edge("a", "b", &[(0, 0), (2, 2)], "W"), edge("a", "c", &[(0, 0), (2, 0)], "W")] };
        assert!(verify_planarity(&ok).passed());
        let bad = Drawing {
            edges: vec![edge("a", "b", &[(0, 0), (2, 0)], "W"), edge("a", "c", &[(0, 0), (1, 0), (1, 3)], "W")],
        };
        assert!(!verify_planarity(&bad).passed());
        let unrelated_touch =
            Drawing { edges: vec![edge("a", "b", &[(0, 0), (2, 0)], "W"), edge("c", "d", &[(2, 0), (3, 3)], "W")] };
        assert!(!verify_planarity(&unrelated_touch).passed());
    }

    #[test]
    fn containment_catches_escape() {
        let s = pqr();
        let good = Drawing { edges: vec![edge("p", "q", &[(1, 1), (3, 1)], "D_pq")] };
        assert!(verify_containment(&good, &fixture(), &s).passed());
        let poke = Drawing { edges: vec![edge("p", "q", &[(1, 1), (2, 3), (3, 1)], "D_pq")] };
        let rep = verify_containment(&poke, &fixture(), &s);
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.failures[0].disk.as_deref(), Some("D_pq"));
        // no disk holds both endpoints: vacuous
        let fam = Family::new(vec![irect("A", 0, 0, 2, 2)]).unwrap();
        assert!(verify_containment(&poke, &fam, &s).passed());
    }

    #[test]
    fn budget() {
        let fam = fixture();
        let e = edge("p", "q", &[(1, 1), (3, 1)], "D_pq");
        assert!(verify_crossing_budget(&e, &fam).passed());
        assert!(verify_crossing_budget(&e, &Family::empty()).passed());
        // crosses D_pr's right side twice
        let twice = edge("p", "q", &[(1, 1), (3, 3), (2, 1), (3, 1)], "D_pq");
        assert!(!verify_crossing_budget(&twice, &fam).passed());
    }

    #[test]
    fn parity_disjoint_disks() {
        let s = PointSet::from_pairs([
            ("a", Point::new(0, 0)),
            ("b", Point::new(0, 4)),
            ("c", Point::new(10, 0)),
            ("d", Point::new(10, 4)),
        ])
        .unwrap();
        let d1 = irect("D1", -1, -1, 1, 5);
        let d2 = irect("D2", 9, -1, 11, 5);
        let e1 = edge("a", "b", &[(0, 0), (0, 4)], "D1");
        let e2 = edge("c", "d", &[(10, 0), (10, 4)], "D2");
        assert!(verify_parity(&e1, &e2, &d1, &d2, &s).unwrap().passed());
    }

    #[test]
    fn parity_two_crossings() {
        let s = PointSet::from_pairs([
            ("a", Point::new(-4, 0)),
            ("b", Point::new(4, 0)),
            ("c", Point::new(-4, 6)),
            ("d", Point::new(4, 6)),
        ])
        .unwrap();
        // overlapping in a lens around x in [-2, 2], y in [2, 4]
        let d1 = PseudoDisk::from_points("D1", vec![(-5, -1).into(), (5, -1).into(), (2, 4).into(), (-2, 4).into()])
            .unwrap();
        let d2 =
            PseudoDisk::from_points("D2", vec![(-2, 2).into(), (2, 2).into(), (5, 7).into(), (-5, 7).into()]).unwrap();
        let e1 = edge("a", "b", &[(-4, 0), (0, 3), (4, 0)], "D1");
        let e2 = edge("c", "d", &[(-4, 6), (0, 2), (4, 6)], "D2");
        let e2v = DrawnEdge {
            curve: Polyline::new(vec![(-4, 6).into(), Point::ratio(0, 5, 2), (4, 6).into()]).unwrap(),
            ..e2
        };
        let rep = verify_parity(&e1, &e2v, &d1, &d2, &s).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn parity_precondition_breach() {
        let s = PointSet::from_pairs([
            ("a", Point::new(0, 0)),
            ("b", Point::new(1, 0)),
            ("c", Point::new(3, 0)),
            ("d", Point::new(5, 0)),
        ])
        .unwrap();
        let d1 = irect("D1", -1, -1, 4, 1);
        let d2 = irect("D2", 2, -2, 6, 2);
        let e1 = edge("a", "b", &[(0, 0), (1, 0)], "D1");
        let e2 = edge("c", "d", &[(3, 0), (5, 0)], "D2");
        assert!(matches!(verify_parity(&e1, &e2, &d1, &d2, &s), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn brute_force_matches_fixture() {
        let g = brute_force_delaunay(&fixture(), &pqr());
        assert_eq!(g, delaunay_graph(&fixture(), &pqr()).unwrap());
        assert_eq!(brute_force_delaunay(&Family::empty(), &pqr()).num_edges(), 0);
    }

    #[test]
    fn coverage_detects_missing_edge() {
        let d = Drawing { edges: vec![edge("p", "q", &[(1, 1), (3, 1)], "D_pq")] };
        let rep = verify_coverage(&d, &fixture(), &pqr());
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.failures[0].edges, vec![("p".to_string(), "r".to_string())]);
    }

    #[test]
    fn no_mixed_faces_on_fixture() {
        let out = plane_drawing(&fixture(), &pqr()).unwrap();
        assert!(mixed_deep_faces(&out.witness_family, &pqr()).unwrap().is_empty());
    }
}
