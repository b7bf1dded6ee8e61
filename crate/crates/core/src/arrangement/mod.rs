//! Arrangement of pseudo-disk boundaries.
//!
//! Boundaries are split at their pairwise crossings into pieces; a half-edge
//! structure over those pieces yields the faces. A face is stored as an outer
//! ring (absent for the unbounded face) plus hole rings, each listing both the
//! exact points and the arrangement edges that bound it.

mod route;

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::family::{boundary_crossings, Family, PseudoDisk};
use crate::geom::{angle_cmp, locate_in_ring, signed_area2, BBox, Location, Point, Scalar, Segment};

pub use route::route_in_face;
pub(crate) use route::FaceRouter;

/// Index of a face in [`Arrangement::faces`].
pub type FaceId = usize;

/// A maximal boundary piece with no arrangement vertex in its interior.
#[derive(Debug, Clone)]
pub struct ArrEdge {
    /// Index of the owning disk in the family the arrangement was built from.
    pub owner: usize,
    /// Points along the piece in the owner's counter-clockwise direction.
    /// For a vertex-free loop the first point is repeated at the end.
    pub points: Vec<Point>,
    /// Arrangement vertex ids at both ends; `None` for a vertex-free loop.
    pub ends: Option<(usize, usize)>,
    /// Face inside the owner.
    pub left_face: FaceId,
    /// Face outside the owner.
    pub right_face: FaceId,
    pieces: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Cycle {
    /// Ring of points, without the closing repeat.
    pub points: Vec<Point>,
    /// Arrangement edges in traversal order.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Face {
    pub outer: Option<Cycle>,
    pub holes: Vec<Cycle>,
    /// Indices of the disks containing this face.
    pub containment: BTreeSet<usize>,
    /// A point strictly inside the face.
    pub rep: Point,
}

impl Face {
    pub fn depth(&self) -> usize {
        self.containment.len()
    }

    pub fn is_unbounded(&self) -> bool {
        self.outer.is_none()
    }

    pub(crate) fn rings(&self) -> impl Iterator<Item = &Cycle> {
        self.outer.iter().chain(self.holes.iter())
    }

    /// Strict interior test against the face's own rings.
    pub(crate) fn locate(&self, p: &Point) -> Location {
        if let Some(o) = &self.outer {
            match locate_in_ring(p, &o.points) {
                Location::Outside => return Location::Outside,
                Location::OnBoundary => return Location::OnBoundary,
                Location::Inside => {}
            }
        }
        for h in &self.holes {
            match locate_in_ring(p, &h.points) {
                Location::Inside => return Location::Outside,
                Location::OnBoundary => return Location::OnBoundary,
                Location::Outside => {}
            }
        }
        Location::Inside
    }
}

#[derive(Debug, Clone)]
struct Piece {
    from: usize,
    to: usize,
    poly: usize,
    seg: usize,
    t0: Scalar,
    t1: Scalar,
    edge: usize,
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    /// Pairwise boundary crossings.
    pub vertices: Vec<Point>,
    pub edges: Vec<ArrEdge>,
    pub faces: Vec<Face>,
    pub unbounded: FaceId,
    disks: Vec<PseudoDisk>,
    nodes: Vec<Point>,
    pieces: Vec<Piece>,
    components: usize,
    bbox: Option<BBox>,
}

fn twin(h: usize) -> usize {
    h ^ 1
}

impl Arrangement {
    pub fn build(family: &Family) -> Result<Self> {
        build_arrangement(family)
    }

    pub fn disks(&self) -> &[PseudoDisk] {
        &self.disks
    }

    pub fn disk_id(&self, idx: usize) -> &str {
        &self.disks[idx].id
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f]
    }

    pub fn bbox(&self) -> Option<&BBox> {
        self.bbox.as_ref()
    }

    /// Containment set of a face as disk ids.
    pub fn containment_ids(&self, f: FaceId) -> BTreeSet<String> {
        self.faces[f].containment.iter().map(|&i| self.disks[i].id.clone()).collect()
    }

    /// Segment of every boundary piece.
    pub(crate) fn piece_segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.pieces.iter().map(|p| Segment::new(self.nodes[p.from].clone(), self.nodes[p.to].clone()))
    }

    /// Face containing `pt`; errors when `pt` lies on a boundary.
    pub fn face_of(&self, pt: &Point) -> Result<FaceId> {
        let mut cont = BTreeSet::new();
        for (i, d) in self.disks.iter().enumerate() {
            match d.locate(pt) {
                Location::Inside => {
                    cont.insert(i);
                }
                Location::OnBoundary => return Err(Error::OnBoundary(pt.clone().into())),
                Location::Outside => {}
            }
        }
        for (fid, f) in self.faces.iter().enumerate() {
            if f.containment == cont && f.locate(pt) == Location::Inside {
                return Ok(fid);
            }
        }
        Err(Error::NotInFace(pt.clone().into()))
    }

    /// Number of disks containing `pt`.
    pub fn depth_at(&self, pt: &Point) -> Result<usize> {
        Ok(self.faces[self.face_of(pt)?].depth())
    }

    /// `V - E + F == 1 + C - L`, with `C` connected components of the boundary
    /// union and `L` vertex-free loops. Reduces to `V - E + F = 2` for a
    /// connected arrangement with at least one vertex.
    pub fn euler_holds(&self) -> bool {
        let v = self.vertices.len() as i64;
        let e = self.edges.len() as i64;
        let f = self.faces.len() as i64;
        let loops = self.edges.iter().filter(|e| e.ends.is_none()).count() as i64;
        v - e + f == 1 + self.components as i64 - loops
    }

    /// A point in the relative interior of edge `e`, dyadic along its source
    /// segment. `salt` varies the choice.
    pub fn edge_point(&self, e: usize, salt: u64) -> Point {
        let ed = &self.edges[e];
        let k = ed.pieces.len();
        let pc = &self.pieces[ed.pieces[(k / 2 + salt as usize / 3) % k]];
        let seg = self.disks[pc.poly].region.edge(pc.seg);
        let t = Scalar::dyadic_between(&pc.t0, &pc.t1, salt);
        seg.at(&t)
    }

    pub(crate) fn router(&self, f: FaceId, extra: &[&Point]) -> FaceRouter {
        FaceRouter::new(self, f, extra)
    }
}

/// Builds the arrangement of the boundaries of `family`.
pub fn build_arrangement(family: &Family) -> Result<Arrangement> {
    let disks: Vec<PseudoDisk> = family.disks().to_vec();
    let n = disks.len();

    // nodes: polygon vertices first
    let mut nodes: Vec<Point> = Vec::new();
    let mut node_vertex: Vec<Option<usize>> = Vec::new();
    let mut vertex_node: Vec<Vec<usize>> = Vec::with_capacity(n);
    for d in &disks {
        let mut ids = Vec::new();
        for v in d.region.vertices() {
            ids.push(nodes.len());
            nodes.push(v.clone());
            node_vertex.push(None);
        }
        vertex_node.push(ids);
    }

    // crossings, attached to both segments
    let mut on_seg: Vec<Vec<Vec<(Scalar, usize)>>> = disks.iter().map(|d| vec![Vec::new(); d.region.len()]).collect();
    let mut vertices: Vec<Point> = Vec::new();
    let mut seen: HashMap<Point, usize> = HashMap::new();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let cs = boundary_crossings(&disks[i].region, &disks[j].region)?;
            if !cs.is_empty() {
                uf.union(i, j);
            }
            for c in cs {
                if seen.contains_key(&c.point) {
                    return Err(Error::DegenerateIncidence(c.point.into()));
                }
                let node = nodes.len();
                seen.insert(c.point.clone(), node);
                node_vertex.push(Some(vertices.len()));
                vertices.push(c.point.clone());
                nodes.push(c.point);
                on_seg[i][c.seg_a].push((c.t_a, node));
                on_seg[j][c.seg_b].push((c.t_b, node));
            }
        }
    }

    // pieces, in boundary order per polygon
    let mut pieces: Vec<Piece> = Vec::new();
    let mut poly_pieces: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        let k = disks[p].region.len();
        for s in 0..k {
            let mut stops = std::mem::take(&mut on_seg[p][s]);
            stops.sort_by(|a, b| a.0.cmp(&b.0));
            let mut chain = vec![(Scalar::zero(), vertex_node[p][s])];
            chain.extend(stops);
            chain.push((Scalar::one(), vertex_node[p][(s + 1) % k]));
            for w in chain.windows(2) {
                poly_pieces[p].push(pieces.len());
                pieces.push(Piece {
                    from: w[0].1,
                    to: w[1].1,
                    poly: p,
                    seg: s,
                    t0: w[0].0.clone(),
                    t1: w[1].0.clone(),
                    edge: usize::MAX,
                });
            }
        }
    }

    // arrangement edges: cut each boundary at crossing nodes
    let mut edges: Vec<ArrEdge> = Vec::new();
    for (p, list) in poly_pieces.iter().enumerate() {
        let m = list.len();
        let start = list.iter().position(|&pc| node_vertex[pieces[pc].from].is_some());
        match start {
            None => {
                let mut pts: Vec<Point> = list.iter().map(|&pc| nodes[pieces[pc].from].clone()).collect();
                pts.push(pts[0].clone());
                let id = edges.len();
                for &pc in list {
                    pieces[pc].edge = id;
                }
                edges.push(ArrEdge {
                    owner: p,
                    points: pts,
                    ends: None,
                    left_face: 0,
                    right_face: 0,
                    pieces: list.clone(),
                });
            }
            Some(st) => {
                let mut cur: Vec<usize> = Vec::new();
                for off in 0..m {
                    let pc = list[(st + off) % m];
                    cur.push(pc);
                    if node_vertex[pieces[pc].to].is_some() {
                        let id = edges.len();
                        let mut pts: Vec<Point> = cur.iter().map(|&q| nodes[pieces[q].from].clone()).collect();
                        pts.push(nodes[pieces[pc].to].clone());
                        for &q in &cur {
                            pieces[q].edge = id;
                        }
                        let a = node_vertex[pieces[cur[0]].from].unwrap();
                        let b = node_vertex[pieces[pc].to].unwrap();
                        edges.push(ArrEdge {
                            owner: p,
                            points: pts,
                            ends: Some((a, b)),
                            left_face: 0,
                            right_face: 0,
                            pieces: std::mem::take(&mut cur),
                        });
                    }
                }
            }
        }
    }

    // half-edge rotation system
    let nh = pieces.len() * 2;
    let origin = |h: usize| if h.is_multiple_of(2) { pieces[h / 2].from } else { pieces[h / 2].to };
    let dest = |h: usize| origin(twin(h));
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for h in 0..nh {
        outgoing[origin(h)].push(h);
    }
    for (v, out) in outgoing.iter_mut().enumerate() {
        let dir = |h: &usize| nodes[dest(*h)].sub(&nodes[v]);
        out.sort_by(|a, b| angle_cmp(&dir(a), &dir(b)));
    }
    let mut pos_in: Vec<usize> = vec![0; nh];
    for out in &outgoing {
        for (i, &h) in out.iter().enumerate() {
            pos_in[h] = i;
        }
    }
    let next = |h: usize| {
        let t = twin(h);
        let v = origin(t);
        let out = &outgoing[v];
        out[(pos_in[t] + out.len() - 1) % out.len()]
    };

    // trace cycles
    let mut cycle_of: Vec<usize> = vec![usize::MAX; nh];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for h0 in 0..nh {
        if cycle_of[h0] != usize::MAX {
            continue;
        }
        let cid = cycles.len();
        let mut cyc = Vec::new();
        let mut h = h0;
        loop {
            cycle_of[h] = cid;
            cyc.push(h);
            h = next(h);
            if h == h0 {
                break;
            }
        }
        cycles.push(cyc);
    }

    let ring_points = |cyc: &Vec<usize>| -> Vec<Point> { cyc.iter().map(|&h| nodes[origin(h)].clone()).collect() };
    let ring_edges = |cyc: &Vec<usize>| -> Vec<usize> {
        let mut es: Vec<usize> = cyc.iter().map(|&h| pieces[h / 2].edge).collect();
        es.dedup();
        if es.len() > 1 && es.first() == es.last() {
            es.pop();
        }
        es
    };

    // component of each polygon
    let mut comp_index: HashMap<usize, usize> = HashMap::new();
    for p in 0..n {
        let r = uf.find(p);
        let next_id = comp_index.len();
        comp_index.entry(r).or_insert(next_id);
    }
    let components = comp_index.len();
    let comp_of_cycle = |cyc: &Vec<usize>| comp_index[&uf.find_const(pieces[cyc[0] / 2].poly)];

    let areas: Vec<Scalar> = cycles.iter().map(|c| signed_area2(&ring_points(c))).collect();

    // faces: 0 is unbounded, then one per positive cycle
    let mut faces: Vec<Face> =
        vec![Face { outer: None, holes: Vec::new(), containment: BTreeSet::new(), rep: Point::new(0, 0) }];
    let mut face_of_cycle: Vec<usize> = vec![usize::MAX; cycles.len()];
    for (cid, c) in cycles.iter().enumerate() {
        if areas[cid].signum() > 0 {
            face_of_cycle[cid] = faces.len();
            faces.push(Face {
                outer: Some(Cycle { points: ring_points(c), edges: ring_edges(c) }),
                holes: Vec::new(),
                containment: BTreeSet::new(),
                rep: Point::new(0, 0),
            });
        }
    }
    for (cid, c) in cycles.iter().enumerate() {
        if areas[cid].signum() > 0 {
            continue;
        }
        let probe = nodes[origin(c[0])].clone();
        let my_comp = comp_of_cycle(c);
        let mut best: Option<(Scalar, usize)> = None;
        for (oid, oc) in cycles.iter().enumerate() {
            if areas[oid].signum() <= 0 || comp_of_cycle(oc) == my_comp {
                continue;
            }
            let ring = &faces[face_of_cycle[oid]].outer.as_ref().unwrap().points;
            if locate_in_ring(&probe, ring) == Location::Inside && best.as_ref().is_none_or(|(a, _)| &areas[oid] < a) {
                best = Some((areas[oid].clone(), oid));
            }
        }
        let fid = match best {
            Some((_, oid)) => face_of_cycle[oid],
            None => 0,
        };
        face_of_cycle[cid] = fid;
        faces[fid].holes.push(Cycle { points: ring_points(c), edges: ring_edges(c) });
    }

    for (eid, e) in edges.iter_mut().enumerate() {
        let pc = e.pieces[0];
        e.left_face = face_of_cycle[cycle_of[2 * pc]];
        e.right_face = face_of_cycle[cycle_of[2 * pc + 1]];
        debug_assert_eq!(pieces[pc].edge, eid);
    }

    // containment by walking out from the unbounded face
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
    for (eid, e) in edges.iter().enumerate() {
        adj[e.left_face].push(eid);
        adj[e.right_face].push(eid);
    }
    let mut done = vec![false; faces.len()];
    done[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        for &eid in &adj[f] {
            let e = &edges[eid];
            let (g, cont) = if e.right_face == f {
                let mut c = faces[f].containment.clone();
                c.insert(e.owner);
                (e.left_face, c)
            } else {
                let mut c = faces[f].containment.clone();
                c.remove(&e.owner);
                (e.right_face, c)
            };
            if !done[g] {
                done[g] = true;
                faces[g].containment = cont;
                queue.push_back(g);
            } else if faces[g].containment != cont {
                return Err(Error::Validation("inconsistent face containment".into()));
            }
        }
    }

    let bbox = BBox::of(nodes.iter());
    for face in &mut faces {
        face.rep = match &face.outer {
            None => match &bbox {
                Some(bb) => Point { x: &bb.min.x - &Scalar::one(), y: &bb.min.y - &Scalar::one() },
                None => Point::new(0, 0),
            },
            Some(_) => interior_point(face),
        };
    }

    Ok(Arrangement { vertices, edges, faces, unbounded: 0, disks, nodes, pieces, components, bbox })
}

/// Shoots a ray from the middle of the first outer segment along its inward
/// normal and takes the midpoint up to the first boundary hit.
fn interior_point(face: &Face) -> Point {
    let outer = face.outer.as_ref().unwrap();
    let a = &outer.points[0];
    let b = &outer.points[1 % outer.points.len()];
    let m = a.midpoint(b);
    let (dx, dy) = b.sub(a);
    let nrm = (-&dy, dx);
    let mut best: Option<Scalar> = None;
    for ring in face.rings() {
        let k = ring.points.len();
        for i in 0..k {
            let c = &ring.points[i];
            let d = &ring.points[(i + 1) % k];
            if std::ptr::eq(ring, outer) && i == 0 {
                continue;
            }
            // m + nrm*s = c + (d-c)*u
            let (ex, ey) = d.sub(c);
            let denom = &(&nrm.0 * &ey) - &(&nrm.1 * &ex);
            if denom.is_zero() {
                continue;
            }
            let (qx, qy) = c.sub(&m);
            let s = &(&(&qx * &ey) - &(&qy * &ex)) / &denom;
            let u = &(&(&qx * &nrm.1) - &(&qy * &nrm.0)) / &denom;
            if s.signum() > 0 && u.signum() >= 0 && u <= Scalar::one() && best.as_ref().is_none_or(|b| &s < b) {
                best = Some(s);
            }
        }
    }
    let s = best.expect("a bounded face has boundary on every side").half();
    m.offset(&(&nrm.0 * &s), &(&nrm.1 * &s))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let nx = self.parent[c];
            self.parent[c] = r;
            c = nx;
        }
        r
    }

    fn find_const(&self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
