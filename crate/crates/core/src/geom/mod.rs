//! Exact planar primitives: rational scalars, points, segments, polylines and
//! simple polygons, with the predicates the rest of the crate relies on.
//! Nothing here uses floating point except explicit display conversions.

mod offset;
mod polygon;
mod polyline;
mod primitives;
mod scalar;

pub use offset::{offset_chain, side_of_segment, OffsetLine};
pub(crate) use polygon::signed_area2;
pub use polygon::{locate_in_ring, point_in_polygon, ring_orientation, same_ring, Location, SimplePolygon};
pub(crate) use polyline::count_ring_crossings;
pub use polyline::{polyline_crossings, Polyline};
pub use primitives::{
    angle_cmp, cross, orientation, segment_crossing, BBox, Crossing, Orientation, Point, SegIntersection, Segment,
};
pub use scalar::{ParseScalarError, Scalar};
