use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::family::{region_contains, trace_indices, Family, PointSet};

/// Generalized Delaunay graph: `{p, q}` is an edge when some disk holds
/// exactly `p` and `q`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelaunayGraph {
    pub vertices: Vec<String>,
    /// `(p, q)` with `p < q`, mapped to the smallest witness disk id.
    pub edges: BTreeMap<(String, String), String>,
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl DelaunayGraph {
    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.edges.contains_key(&ordered(a, b))
    }

    pub fn witness(&self, a: &str, b: &str) -> Option<&str> {
        self.edges.get(&ordered(a, b)).map(String::as_str)
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.keys().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: &str) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for (a, b) in self.edge_pairs() {
            if a == v {
                out.insert(b);
            } else if b == v {
                out.insert(a);
            }
        }
        out
    }
}

pub fn delaunay_graph(family: &Family, s: &PointSet) -> Result<DelaunayGraph> {
    let mut edges: BTreeMap<(String, String), String> = BTreeMap::new();
    for d in family.disks() {
        let t = trace_indices(d, s)?;
        if t.len() == 2 {
            let mut it = t.iter();
            let (a, b) = (s.label(*it.next().unwrap()), s.label(*it.next().unwrap()));
            let w = edges.entry(ordered(a, b)).or_insert_with(|| d.id.clone());
            if d.id < *w {
                *w = d.id.clone();
            }
        }
    }
    Ok(DelaunayGraph { vertices: s.points().iter().map(|p| p.label.clone()).collect(), edges })
}

/// The disks holding exactly two points.
pub fn restrict_two_point(family: &Family, s: &PointSet) -> Result<Family> {
    let mut keep = BTreeSet::new();
    for d in family.disks() {
        if trace_indices(d, s)?.len() == 2 {
            keep.insert(d.id.clone());
        }
    }
    Ok(family.filter(|d| keep.contains(&d.id)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrinkEntry {
    pub disk: String,
    pub trace_size: usize,
    /// Points `p` for which a member inside the disk has trace `trace \ {p}`.
    pub deletable: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrinkableReport {
    /// One entry per disk with at least three points.
    pub entries: Vec<ShrinkEntry>,
}

impl ShrinkableReport {
    /// Every disk with three or more points has two deletable points.
    pub fn shrinkable(&self) -> bool {
        self.entries.iter().all(|e| e.deletable.len() >= 2)
    }

    /// Disks with exactly one deletable point: shrinkable only in the weaker
    /// single-point sense.
    pub fn one_point_only(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| e.deletable.len() == 1).map(|e| e.disk.as_str()).collect()
    }
}

pub fn check_shrinkable(family: &Family, s: &PointSet) -> Result<ShrinkableReport> {
    let disks = family.disks();
    let traces: Vec<BTreeSet<usize>> = disks.iter().map(|d| trace_indices(d, s)).collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for (k, d) in disks.iter().enumerate() {
        if traces[k].len() < 3 {
            continue;
        }
        let mut deletable = BTreeSet::new();
        for &p in &traces[k] {
            let mut want = traces[k].clone();
            want.remove(&p);
            for (o, od) in disks.iter().enumerate() {
                if o != k && traces[o] == want && region_contains(&d.region, &od.region)? {
                    deletable.insert(s.label(p).to_string());
                    break;
                }
            }
        }
        entries.push(ShrinkEntry {
            disk: d.id.clone(),
            trace_size: traces[k].len(),
            deletable: deletable.into_iter().collect(),
        });
    }
    Ok(ShrinkableReport { entries })
}

/// Whether the subgraph induced by `trace` is connected.
pub fn induced_connectivity(graph: &DelaunayGraph, trace: &BTreeSet<String>) -> bool {
    let Some(start) = trace.iter().next() else {
        return true;
    };
    let mut seen: BTreeSet<&str> = BTreeSet::from([start.as_str()]);
    let mut queue = VecDeque::from([start.as_str()]);
    while let Some(v) = queue.pop_front() {
        for n in graph.neighbors(v) {
            if trace.contains(n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.len() == trace.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::PseudoDisk;
    use crate::geom::{Point, Scalar};

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

    fn pqr() -> PointSet {
        PointSet::from_pairs([("p", Point::new(1, 1)), ("q", Point::new(3, 1)), ("r", Point::new(2, 3))]).unwrap()
    }

    fn fixture() -> Family {
        Family::new(vec![
            rect("D_pq", 0.into(), 0.into(), 4.into(), 2.into()),
            rect("D_pr", Scalar::new(1, 2), Scalar::new(1, 2), Scalar::new(5, 2), Scalar::new(7, 2)),
            rect("D_all", (-1).into(), (-1).into(), 5.into(), 5.into()),
        ])
        .unwrap()
    }

    fn graph(edges: &[(&str, &str)], labels: &[&str]) -> DelaunayGraph {
        DelaunayGraph {
            vertices: labels.iter().map(|s| s.to_string()).collect(),
            edges: edges.iter().map(|(a, b)| (ordered(a, b), "w".to_string())).collect(),
        }
    }

    #[test]
    fn fixture_graph() {
        let g = delaunay_graph(&fixture(), &pqr()).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert!(g.has_edge("p", "q") && g.has_edge("r", "p") && !g.has_edge("q", "r"));
        assert_eq!(g.witness("q", "p"), Some("D_pq"));
        assert_eq!(delaunay_graph(&Family::empty(), &pqr()).unwrap().num_edges(), 0);
    }

    #[test]
    fn restriction_keeps_graph() {
        let r = restrict_two_point(&fixture(), &pqr()).unwrap();
        let ids: Vec<&str> = r.disks().iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, vec!["D_pq", "D_pr"]);
        assert_eq!(delaunay_graph(&r, &pqr()).unwrap(), delaunay_graph(&fixture(), &pqr()).unwrap());
        let two = restrict_two_point(&r, &pqr()).unwrap();
        assert_eq!(two, r);
    }

    #[test]
    fn shrinkability() {
        let s = pqr();
        let only_all = Family::new(vec![rect("D_all", (-1).into(), (-1).into(), 5.into(), 5.into())]).unwrap();
        assert!(!check_shrinkable(&only_all, &s).unwrap().shrinkable());
        assert!(check_shrinkable(&restrict_two_point(&fixture(), &s).unwrap(), &s).unwrap().shrinkable());
        // D_all has sub-disks {p,q} and {p,r}: deleting r or q
        let rep = check_shrinkable(&fixture(), &s).unwrap();
        assert_eq!(rep.entries[0].deletable, vec!["q".to_string(), "r".to_string()]);
        assert!(rep.shrinkable());
    }

    #[test]
    fn connectivity() {
        let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert!(induced_connectivity(&graph(&[("p", "q"), ("p", "r")], &["p", "q", "r"]), &set(&["p", "q", "r"])));
        assert!(!induced_connectivity(&graph(&[("p", "q")], &["p", "q", "r"]), &set(&["p", "q", "r"])));
        assert!(induced_connectivity(&graph(&[], &["p"]), &set(&["p"])));
    }
}
