use crate::geom::{Point, Polyline, SegIntersection, Segment};

/// Short-cuts self-intersections of an open curve until it is simple. The
/// result keeps both endpoints and follows a subset of the original trace.
pub fn remove_loops(curve: &Polyline) -> Polyline {
    let mut cur = curve.clone();
    while let Some((i, j)) = cur.first_self_intersection() {
        let v = cur.vertices();
        let (si, sj) = (cur.segment(i), cur.segment(j));
        let p = splice_point(&si, &sj);
        let mut pts: Vec<Point> = v[..=i].to_vec();
        pts.push(p);
        pts.extend_from_slice(&v[j + 1..]);
        match Polyline::from_points_dedup(pts) {
            Ok(next) => cur = next,
            Err(_) => break,
        }
    }
    cur
}

fn splice_point(si: &Segment, sj: &Segment) -> Point {
    match si.intersect(sj) {
        SegIntersection::Point { p, .. } => p,
        // a doubled-back stretch: cut at the overlap end farther from the
        // shared vertex
        SegIntersection::Overlap(p, q) => {
            if p == si.b {
                q
            } else if q == si.b || si.param_of(&p) <= si.param_of(&q) {
                p
            } else {
                q
            }
        }
        SegIntersection::None => unreachable!("reported intersection vanished"),
    }
}
