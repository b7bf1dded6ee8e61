use std::collections::BTreeSet;

use proptest::prelude::*;
use pseudodisk::geom::{polyline_crossings, Location};
use pseudodisk::*;

fn spec() -> impl Strategy<Value = GenSpec> {
    (0u64..100_000, 0usize..3, 2usize..8, 0usize..9, 3usize..10)
        .prop_map(|(seed, kind, n, m, k)| GenSpec { k, ..GenSpec::new(GenKind::ALL[kind], seed, n, m) })
}

fn instance(spec: &GenSpec) -> (Family, PointSet) {
    generate(spec).unwrap_or_else(|e| panic!("{spec:?}: {e}"))
}

fn traces(f: &Family, s: &PointSet) -> Vec<BTreeSet<String>> {
    f.disks().iter().map(|d| trace_of(d, s).unwrap()).collect()
}

fn crossings_with(curve: &Polyline, d: &PseudoDisk) -> usize {
    let mut ring = d.region.vertices().to_vec();
    ring.push(ring[0].clone());
    polyline_crossings(curve, &Polyline::new(ring).unwrap()).unwrap().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_instances_are_valid_and_repeatable(spec in spec()) {
        let (f, s) = instance(&spec);
        prop_assert!(validate_family(f.disks(), &s).is_valid());
        prop_assert_eq!(s.len(), spec.n_points);
        prop_assert_eq!(f.len(), spec.n_disks);
        prop_assert_eq!(generate(&spec).unwrap(), (f, s));
    }

    #[test]
    fn delaunay_matches_brute_force(spec in spec()) {
        let (f, s) = instance(&spec);
        let g = delaunay_graph(&f, &s).unwrap();
        prop_assert_eq!(&g, &brute_force_delaunay(&f, &s));
        // every edge is the trace of its witness
        for ((x, y), w) in &g.edges {
            let want: BTreeSet<String> = [x.clone(), y.clone()].into();
            prop_assert_eq!(trace_of(f.get(w).unwrap(), &s).unwrap(), want);
        }
    }

    #[test]
    fn normalization_postconditions(spec in spec()) {
        let (f, s) = instance(&spec);
        let (g, steps) = respect_normalize(&f, &s).unwrap();
        prop_assert!(check_respects(&g, &s).unwrap().respects());
        prop_assert!(find_min_empty_lens(&g, &s).unwrap().is_none());
        let t = traces(&g, &s);
        let distinct: BTreeSet<_> = t.iter().cloned().collect();
        prop_assert_eq!(distinct.len(), t.len());
        let want: BTreeSet<_> = traces(&f, &s).into_iter().filter(|t| t.len() >= 2).collect();
        prop_assert_eq!(distinct, want);
        prop_assert!(total_crossings(&g).unwrap() <= total_crossings(&f).unwrap());
        for st in &steps {
            if let ShrinkKind::LensRemoval(_) = st.kind {
                prop_assert_eq!(st.crossings_before, st.crossings_after + 2);
            }
        }
    }

    #[test]
    fn ray_route_crosses_each_separating_boundary_once(spec in spec(), qx in 0i64..=128, qy in 0i64..=128) {
        let (f, s) = instance(&spec);
        let q = Point::new(Scalar::new(qx, 8), Scalar::new(qy, 8));
        prop_assume!(f.disks().iter().all(|d| d.locate(&q) != Location::OnBoundary));
        for lp in s.points() {
            let fam = f.filter(|d| d.locate(&lp.point) == Location::Inside);
            if fam.is_empty() || lp.point == q {
                continue;
            }
            let curve = ray_route(&fam, &lp.point, &q).unwrap();
            prop_assert_eq!(curve.first(), &q);
            prop_assert_eq!(curve.last(), &lp.point);
            prop_assert!(curve.is_simple());
            for d in fam.disks() {
                let want = usize::from(d.locate(&q) != Location::Inside);
                prop_assert_eq!(crossings_with(&curve, d), want, "{}", d.id);
            }
        }
    }

    #[test]
    fn remove_loops_gives_simple_curve(pts in prop::collection::vec((0i64..6, 0i64..6), 2..9)) {
        let mut v: Vec<Point> = pts.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        v.dedup();
        prop_assume!(v.len() >= 2 && v[0] != v[v.len() - 1]);
        let Ok(curve) = Polyline::new(v) else { return Ok(()) };
        let out = remove_loops(&curve);
        prop_assert!(out.is_simple());
        prop_assert_eq!(out.first(), curve.first());
        prop_assert_eq!(out.last(), curve.last());
        prop_assert_eq!(remove_loops(&out), out);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn plane_drawings_verify(spec in spec()) {
        let (f, s) = instance(&spec);
        let pd = plane_drawing(&f, &s).unwrap();
        let rep = verify_drawing(&pd.drawing, &f, &pd.witness_family, &s);
        prop_assert!(rep.passed(), "{}", rep);
        prop_assert_eq!(pd.drawing.edges.len(), delaunay_graph(&f, &s).unwrap().num_edges());
    }
}
