//! Seeded random instances.
//!
//! Every instance is produced by rejection sampling: candidate disks that
//! would break the pseudo-disk or generic-position conditions are dropped and
//! redrawn. All coordinates are dyadic rationals.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{
    regions_disjoint, trace_indices, validate_family, validate_one_against, Family, PointSet, PseudoDisk,
};
use crate::geom::{Point, Scalar, SimplePolygon};

/// Candidates drawn per disk before giving up.
const TRIES_PER_DISK: usize = 400;
/// Binary digits kept when rounding polygon vertices.
const VERTEX_BITS: u32 = 6;
/// Points sit on a grid of this many cells per unit.
const POINT_GRID: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    /// Rounded regular polygons of random centre and radius.
    PolyDisks,
    /// Scaled translates of one convex polygon.
    Homothets,
    /// Star-shaped polygons with jittered radii.
    Blobs,
    /// Interval-shaped nested families in which every disk with three or
    /// more points has in-family subsets dropping its first and last point.
    ShrinkableFixture,
    /// Thin stadiums around short point-to-point segments, kept greedily
    /// while each holds exactly its two points and the family stays
    /// respecting. Points of high degree end up under many disks at once.
    Capsules,
}

impl GenKind {
    pub const ALL: [GenKind; 5] =
        [GenKind::PolyDisks, GenKind::Homothets, GenKind::Blobs, GenKind::ShrinkableFixture, GenKind::Capsules];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::PolyDisks => "poly-disks",
            GenKind::Homothets => "homothets",
            GenKind::Blobs => "blobs",
            GenKind::ShrinkableFixture => "shrinkable-fixture",
            GenKind::Capsules => "capsules",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        GenKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown generator kind {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub seed: u64,
    pub kind: GenKind,
    pub n_points: usize,
    /// Ignored by `ShrinkableFixture`, whose size follows from its chain.
    pub n_disks: usize,
    /// Side of the square `[0, window]²` holding the points.
    pub window: u32,
    /// Vertex count of each polygon; the homothet base uses `k` too.
    pub k: usize,
}

impl GenSpec {
    pub fn new(kind: GenKind, seed: u64, n_points: usize, n_disks: usize) -> Self {
        GenSpec { seed, kind, n_points, n_disks, window: 16, k: 12 }
    }

    fn check(&self) -> Result<()> {
        if self.n_points == 0 || self.window == 0 || self.k < 3 {
            return Err(Error::PreconditionViolated(
                "generator needs at least one point, a nonempty window and k >= 3".into(),
            ));
        }
        Ok(())
    }
}

fn dyadic(v: f64) -> Scalar {
    Scalar::from_f64_dyadic(v, VERTEX_BITS)
}

fn sample_points(rng: &mut ChaCha8Rng, n: usize, window: u32) -> Result<PointSet> {
    let cells = window as i64 * POINT_GRID;
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    let mut tries = 0;
    while pts.len() < n {
        tries += 1;
        if tries > n * TRIES_PER_DISK {
            return Err(Error::GenerationExhausted(tries));
        }
        let p = Point::new(
            Scalar::new(rng.random_range(0..=cells), POINT_GRID),
            Scalar::new(rng.random_range(0..=cells), POINT_GRID),
        );
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointSet::from_pairs(pts.into_iter().enumerate().map(|(i, p)| (format!("p{}", i + 1), p)))
}

/// Vertices of a polygon around `(cx, cy)` with radius `radius(i)` at angle
/// `phase + i·τ/k`.
fn star(cx: f64, cy: f64, k: usize, phase: f64, radius: impl Fn(usize) -> f64) -> Vec<Point> {
    (0..k)
        .map(|i| {
            let a = phase + TAU * i as f64 / k as f64;
            let r = radius(i);
            Point { x: dyadic(cx + r * a.cos()), y: dyadic(cy + r * a.sin()) }
        })
        .collect()
}

/// Centres are drawn near a random point so that small traces are common.
fn candidate(rng: &mut ChaCha8Rng, spec: &GenSpec, s: &PointSet, base: &[Point]) -> Vec<Point> {
    let w = spec.window as f64;
    let anchor = s.point(rng.random_range(0..s.len())).to_f64();
    let cx = anchor.0 + rng.random_range(-0.2 * w..0.2 * w);
    let cy = anchor.1 + rng.random_range(-0.2 * w..0.2 * w);
    match spec.kind {
        GenKind::PolyDisks => {
            let r = rng.random_range(0.08 * w..0.4 * w);
            let phase = rng.random_range(0.0..TAU);
            star(cx, cy, spec.k, phase, |_| r)
        }
        GenKind::Blobs => {
            let r = rng.random_range(0.08 * w..0.4 * w);
            let phase = rng.random_range(0.0..TAU);
            let radii: Vec<f64> = (0..spec.k).map(|_| r * rng.random_range(0.7..1.0)).collect();
            star(cx, cy, spec.k, phase, |i| radii[i])
        }
        GenKind::Homothets => {
            // exact homothet: dyadic scale and translation of a dyadic base
            let lambda = Scalar::new(rng.random_range(8..=48), 64);
            let (tx, ty) = (dyadic(cx), dyadic(cy));
            base.iter().map(|b| Point { x: &(&b.x * &lambda) + &tx, y: &(&b.y * &lambda) + &ty }).collect()
        }
        GenKind::ShrinkableFixture | GenKind::Capsules => unreachable!("built separately"),
    }
}

fn random_family(rng: &mut ChaCha8Rng, spec: &GenSpec, s: &PointSet) -> Result<Family> {
    let base = if spec.kind == GenKind::Homothets {
        let w = spec.window as f64;
        let phase = rng.random_range(0.0..TAU);
        star(0.0, 0.0, spec.k, phase, |_| 0.45 * w)
    } else {
        Vec::new()
    };
    let mut disks: Vec<PseudoDisk> = Vec::with_capacity(spec.n_disks);
    for idx in 0..spec.n_disks {
        let id = format!("D{}", idx + 1);
        let mut placed = false;
        for _ in 0..TRIES_PER_DISK {
            let Ok(region) = SimplePolygon::new(candidate(rng, spec, s, &base)) else {
                continue;
            };
            disks.push(PseudoDisk::new(id.clone(), region));
            if validate_one_against(&disks, idx, s, |_| None).is_ok() {
                placed = true;
                break;
            }
            disks.pop();
        }
        if !placed {
            return Err(Error::GenerationExhausted(TRIES_PER_DISK));
        }
    }
    Family::new(disks)
}

fn rect(id: String, x0: Scalar, y0: Scalar, x1: Scalar, y1: Scalar) -> Result<PseudoDisk> {
    PseudoDisk::from_points(
        id,
        vec![
            Point { x: x0.clone(), y: y0.clone() },
            Point { x: x1.clone(), y: y0 },
            Point { x: x1, y: y1.clone() },
            Point { x: x0, y: y1 },
        ],
    )
}

/// A chain of up to six points on a wobbly horizontal line, with one
/// rectangle per run of two or more consecutive points. A run's rectangle
/// grows with the run so runs nest exactly when their rectangles do.
fn shrinkable(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Result<(Family, PointSet)> {
    let m = spec.n_points.min(6);
    let mut pts = Vec::new();
    for i in 0..m {
        let x = Scalar::new(4 * i as i64 * 64 + rng.random_range(-48..=48), 64);
        let y = Scalar::new(rng.random_range(-24..=24), 64);
        pts.push(Point { x, y });
    }
    let cells = spec.window as i64 * POINT_GRID;
    while pts.len() < spec.n_points {
        let p = Point::new(
            Scalar::new(rng.random_range(0..=cells), POINT_GRID),
            Scalar::new(40 * POINT_GRID + rng.random_range(0..=cells), POINT_GRID),
        );
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let s = PointSet::from_pairs(pts.iter().cloned().enumerate().map(|(i, p)| (format!("p{}", i + 1), p)))?;
    let mut disks = Vec::new();
    for size in (2..=m).rev() {
        for i in 0..=m - size {
            let j = i + size - 1;
            let margin = Scalar::new(32 + 8 * size as i64 + rng.random_range(0..4), 64);
            let h = Scalar::new(64 * size as i64 + 4 * i as i64 + rng.random_range(0..4), 64);
            let id = format!("D{}_{}", i + 1, j + 1);
            disks.push(rect(id, &pts[i].x - &margin, -&h, &pts[j].x + &margin, h)?);
        }
    }
    Ok((Family::new(disks)?, s))
}

/// Stadium of half-width `w` around the segment `ab`, with `m` steps per end
/// cap.
fn stadium(a: (f64, f64), b: (f64, f64), w: f64, m: usize) -> Vec<Point> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len = dx.hypot(dy);
    let (ux, uy) = (dx / len, dy / len);
    let mut pts = Vec::with_capacity(2 * m + 2);
    for (c, start) in [(b, -0.25), (a, 0.25)] {
        for i in 0..=m {
            let t = (start + 0.5 * i as f64 / m as f64) * TAU;
            let (cs, sn) = (t.cos(), t.sin());
            pts.push(Point { x: dyadic(c.0 + w * (cs * ux - sn * uy)), y: dyadic(c.1 + w * (cs * uy + sn * ux)) });
        }
    }
    pts.dedup();
    pts
}

fn capsules(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Result<(Family, PointSet)> {
    let s = sample_points(rng, spec.n_points, spec.window)?;
    let xy: Vec<(f64, f64)> = s.points().iter().map(|lp| lp.point.to_f64()).collect();
    let n = xy.len();
    let dist = |i: usize, j: usize| (xy[i].0 - xy[j].0).hypot(xy[i].1 - xy[j].1);
    let nearest: Vec<f64> =
        (0..n).map(|i| (0..n).filter(|&j| j != i).map(|j| dist(i, j)).fold(f64::INFINITY, f64::min)).collect();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.sort_by(|p, q| dist(p.0, p.1).total_cmp(&dist(q.0, q.1)).then(p.cmp(q)));
    let mut disks: Vec<PseudoDisk> = Vec::new();
    let mut traces: Vec<(usize, usize)> = Vec::new();
    for (i, j) in pairs {
        if disks.len() == spec.n_disks {
            break;
        }
        let w = 0.3 * nearest[i].min(nearest[j]) * rng.random_range(0.8..1.0);
        let Ok(region) = SimplePolygon::new(stadium(xy[i], xy[j], w, (spec.k / 2).max(2))) else {
            continue;
        };
        let d = PseudoDisk::new(format!("C{}_{}", i + 1, j + 1), region);
        let holds_pair = trace_indices(&d, &s).is_ok_and(|t| t == [i, j].into());
        disks.push(d);
        let k = disks.len() - 1;
        let fits = holds_pair
            && validate_one_against(&disks, k, &s, |_| None).is_ok()
            && traces.iter().enumerate().all(|(o, t)| {
                [t.0, t.1].iter().any(|p| *p == i || *p == j)
                    || regions_disjoint(&disks[o].region, &disks[k].region).unwrap_or(false)
            });
        if fits {
            traces.push((i, j));
        } else {
            disks.pop();
        }
    }
    Ok((Family::new(disks)?, s))
}

/// Draws a valid instance; the same `GenSpec` always gives the same instance.
pub fn generate(spec: &GenSpec) -> Result<(Family, PointSet)> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..TRIES_PER_DISK {
        let (family, s) = if spec.kind == GenKind::ShrinkableFixture {
            shrinkable(&mut rng, spec)?
        } else if spec.kind == GenKind::Capsules {
            capsules(&mut rng, spec)?
        } else {
            let s = sample_points(&mut rng, spec.n_points, spec.window)?;
            match random_family(&mut rng, spec, &s) {
                Ok(f) => (f, s),
                Err(Error::GenerationExhausted(_)) => continue,
                Err(e) => return Err(e),
            }
        };
        if validate_family(family.disks(), &s).is_valid() {
            return Ok((family, s));
        }
    }
    Err(Error::GenerationExhausted(TRIES_PER_DISK))
}
