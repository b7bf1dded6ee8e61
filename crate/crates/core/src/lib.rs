//! Generalized Delaunay-graphs of pseudo-disk families, with exact
//! construction and certification of plane drawings.
//!
//! All geometry is polygonal with exact rational coordinates.

pub mod arrangement;
pub mod delaunay;
pub mod error;
pub mod family;
pub mod generators;
pub mod geom;
pub mod io;
pub mod normalize;
pub mod routing;
pub mod verify;

pub use arrangement::{build_arrangement, route_in_face, Arrangement, Face, FaceId};
pub use delaunay::{
    check_shrinkable, delaunay_graph, induced_connectivity, restrict_two_point, DelaunayGraph, ShrinkableReport,
};
pub use error::{Error, Result};
pub use family::{
    enumerate_lenses, find_min_empty_lens, total_crossings, trace_of, validate_family, Family, LabeledPoint, Lens,
    LensKind, LensRef, PointSet, PseudoDisk, Trace, ValidationReport, Violation,
};
pub use generators::{generate, GenKind, GenSpec};
pub use geom::{Point, Polyline, Scalar, SimplePolygon};
pub use io::{emit_svg, parse_drawing, parse_instance, write_drawing, write_instance, ParseError, SvgOptions};
pub use normalize::{check_respects, dedupe_traces, remove_lens, respect_normalize, ShrinkKind, ShrinkStep};
pub use routing::{
    insert_edge, plane_drawing, ray_route, remove_loops, transversal_edge, Drawing, DrawnEdge, PlaneDrawing,
};
pub use verify::{
    brute_force_delaunay, mixed_deep_faces, verify_containment, verify_coverage, verify_crossing_budget,
    verify_drawing, verify_parity, verify_planarity, CheckKind, Counterexample, MixedFace, VerifyReport,
};
