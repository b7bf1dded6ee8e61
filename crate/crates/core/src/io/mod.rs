//! Instance and drawing files.
//!
//! Both are JSON with every coordinate written as a `"numerator/denominator"`
//! string, so a file read back gives exactly the values written.

mod svg;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use crate::family::{validate_family, Family, LabeledPoint, PointSet, PseudoDisk, Violation};
use crate::geom::{Point, Polyline, Scalar, SimplePolygon};
use crate::normalize::ShrinkStep;
use crate::routing::{Drawing, DrawnEdge, PlaneDrawing};

pub use svg::{emit_svg, SvgOptions};

pub const FORMAT_VERSION: u32 = 1;

/// A coordinate pair as written in files.
pub type Coord = [Scalar; 2];

fn coord(p: &Point) -> Coord {
    [p.x.clone(), p.y.clone()]
}

fn point([x, y]: &Coord) -> Point {
    Point { x: x.clone(), y: y.clone() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub label: String,
    pub x: Scalar,
    pub y: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskEntry {
    pub id: String,
    pub polygon: Vec<Coord>,
}

impl DiskEntry {
    fn of(d: &PseudoDisk) -> Self {
        DiskEntry { id: d.id.clone(), polygon: d.region.vertices().iter().map(coord).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub points: Vec<PointEntry>,
    pub disks: Vec<DiskEntry>,
}

impl InstanceFile {
    pub fn of(family: &Family, s: &PointSet) -> Self {
        InstanceFile {
            version: FORMAT_VERSION,
            points: s
                .points()
                .iter()
                .map(|lp| PointEntry { label: lp.label.clone(), x: lp.point.x.clone(), y: lp.point.y.clone() })
                .collect(),
            disks: family.disks().iter().map(DiskEntry::of).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub x: String,
    pub y: String,
    pub witness: String,
    pub curve: Vec<Coord>,
    pub ledger: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrawingFile {
    pub version: u32,
    pub edges: Vec<EdgeEntry>,
    /// Shrinking steps that produced `witness_family`.
    pub provenance: Vec<ShrinkStep>,
    /// The normalized two-point family the curves were routed in.
    pub witness_family: Vec<DiskEntry>,
}

impl DrawingFile {
    pub fn of(pd: &PlaneDrawing) -> Self {
        DrawingFile {
            version: FORMAT_VERSION,
            edges: pd
                .drawing
                .edges
                .iter()
                .map(|e| EdgeEntry {
                    x: e.x.clone(),
                    y: e.y.clone(),
                    witness: e.witness.clone(),
                    curve: e.curve.vertices().iter().map(coord).collect(),
                    ledger: e.ledger.clone(),
                })
                .collect(),
            provenance: pd.steps.clone(),
            witness_family: pd.witness_family.disks().iter().map(DiskEntry::of).collect(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("schema error at {at}: {msg}")]
    Schema { at: String, msg: String },
    #[error("invalid instance: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
}

fn read_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, ParseError> {
    serde_json::from_str(text).map_err(|e| match e.classify() {
        Category::Data => schema(format!("line {}, column {}", e.line(), e.column()), &e),
        _ => ParseError::Syntax { line: e.line(), column: e.column(), msg: e.to_string() },
    })
}

fn schema(at: impl Into<String>, msg: impl ToString) -> ParseError {
    ParseError::Schema { at: at.into(), msg: msg.to_string() }
}

fn check_version(v: u32) -> Result<(), ParseError> {
    if v != FORMAT_VERSION {
        return Err(schema("version", format!("unsupported version {v}, expected {FORMAT_VERSION}")));
    }
    Ok(())
}

fn disks_of(entries: &[DiskEntry], field: &str) -> Result<Family, ParseError> {
    let mut disks = Vec::with_capacity(entries.len());
    for (i, d) in entries.iter().enumerate() {
        let region = SimplePolygon::new(d.polygon.iter().map(point).collect())
            .map_err(|e| schema(format!("{field}[{i}] ({})", d.id), e))?;
        disks.push(PseudoDisk::new(d.id.clone(), region));
    }
    Family::new(disks).map_err(|e| schema(field, e))
}

/// Reads an instance file and checks that it is a valid pseudo-disk family
/// in generic position with respect to its points.
pub fn parse_instance(text: &str) -> Result<(Family, PointSet), ParseError> {
    let file: InstanceFile = read_json(text)?;
    check_version(file.version)?;
    let pts = file
        .points
        .iter()
        .map(|p| LabeledPoint { label: p.label.clone(), point: Point { x: p.x.clone(), y: p.y.clone() } })
        .collect();
    let s = PointSet::new(pts).map_err(|e| schema("points", e))?;
    let family = disks_of(&file.disks, "disks")?;
    let report = validate_family(family.disks(), &s);
    if !report.is_valid() {
        return Err(ParseError::Validation(report.violations));
    }
    Ok((family, s))
}

pub fn write_instance(family: &Family, s: &PointSet) -> String {
    to_text(&InstanceFile::of(family, s))
}

pub fn write_drawing(pd: &PlaneDrawing) -> String {
    to_text(&DrawingFile::of(pd))
}

fn to_text<T: Serialize>(v: &T) -> String {
    let mut t = serde_json::to_string_pretty(v).expect("file types always serialize");
    t.push('\n');
    t
}

/// Reads a drawing file back into the drawing, witness family and step log.
/// Checks the structure only; use the verify functions for geometry.
pub fn parse_drawing(text: &str) -> Result<PlaneDrawing, ParseError> {
    let file: DrawingFile = read_json(text)?;
    check_version(file.version)?;
    let witness_family = disks_of(&file.witness_family, "witness_family")?;
    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(file.edges.len());
    for (i, e) in file.edges.into_iter().enumerate() {
        let at = format!("edges[{i}] ({}-{})", e.x, e.y);
        if !seen.insert((e.x.clone().min(e.y.clone()), e.x.clone().max(e.y.clone()))) {
            return Err(schema(at, "edge listed twice"));
        }
        let curve = Polyline::new(e.curve.iter().map(point).collect()).map_err(|err| schema(at.clone(), err))?;
        edges.push(DrawnEdge { x: e.x, y: e.y, curve, witness: e.witness, ledger: e.ledger });
    }
    Ok(PlaneDrawing { drawing: Drawing { edges }, witness_family, steps: file.provenance })
}
