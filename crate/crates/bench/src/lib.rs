//! Fixed instances shared by the benchmarks.

use pseudodisk::{generate, Family, GenKind, GenSpec, PointSet};

/// A deterministic instance of the given size.
pub fn instance(kind: GenKind, n_points: usize, n_disks: usize) -> (Family, PointSet) {
    let spec = GenSpec { k: 8, ..GenSpec::new(kind, 7, n_points, n_disks) };
    generate(&spec).expect("bench instances generate")
}

/// Sizes used for the scaling benchmarks, as (points, disks).
pub const SIZES: [(usize, usize); 3] = [(4, 4), (6, 8), (8, 14)];
