//! End-to-end acceptance run over a seeded corpus. Prints one line per
//! criterion and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pseudodisk::geom::{polyline_crossings, Location};
use pseudodisk::*;

const CORPUS: u64 = 200;
const MAX_DRAW: Duration = Duration::from_secs(5);
const CAPSULE_SEEDS: u64 = 100;

struct Instance {
    spec: GenSpec,
    family: Family,
    s: PointSet,
}

fn corpus_spec(seed: u64) -> GenSpec {
    let kinds = [GenKind::PolyDisks, GenKind::Homothets, GenKind::Blobs];
    GenSpec {
        k: 3 + (seed % 14) as usize,
        ..GenSpec::new(kinds[(seed % 3) as usize], seed, 4 + (seed % 7) as usize, 3 + (seed % 13) as usize)
    }
}

fn corpus() -> Vec<Instance> {
    (0..CORPUS)
        .map(|seed| {
            let spec = corpus_spec(seed);
            let (family, s) = generate(&spec).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            Instance { spec, family, s }
        })
        .collect()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    let mut detail = detail;
    if let Some(f) = failures.first() {
        detail = format!("{detail}; {} failure(s), first: {f}", failures.len());
    }
    Outcome { passed: failures.is_empty(), detail }
}

/// Boundary crossings of a curve with a disk, counted directly on segments.
fn crossings_with(curve: &Polyline, d: &PseudoDisk) -> Result<usize> {
    let mut ring = d.region.vertices().to_vec();
    ring.push(ring[0].clone());
    Ok(polyline_crossings(curve, &Polyline::new(ring)?)?.len())
}

fn ring_crossings(a: &PseudoDisk, b: &PseudoDisk) -> Result<usize> {
    let mut r = a.region.vertices().to_vec();
    r.push(r[0].clone());
    crossings_with(&Polyline::new(r)?, b)
}

fn family_crossings(f: &Family) -> Result<usize> {
    let d = f.disks();
    let mut n = 0;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            n += ring_crossings(&d[i], &d[j])?;
        }
    }
    Ok(n)
}

fn trace_set(d: &PseudoDisk, s: &PointSet) -> BTreeSet<String> {
    s.points().iter().filter(|lp| d.locate(&lp.point) == Location::Inside).map(|lp| lp.label.clone()).collect()
}

fn c1_oracle(corpus: &[Instance]) -> Outcome {
    let t = Instant::now();
    let mut fails = Vec::new();
    let mut edges = 0;
    for inst in corpus {
        match delaunay_graph(&inst.family, &inst.s) {
            Ok(g) => {
                edges += g.num_edges();
                if g != brute_force_delaunay(&inst.family, &inst.s) {
                    fails.push(format!("seed {}", inst.spec.seed));
                }
            }
            Err(e) => fails.push(format!("seed {}: {e}", inst.spec.seed)),
        }
    }
    let el = t.elapsed();
    if el > Duration::from_secs(60) {
        fails.push(format!("took {el:?}"));
    }
    outcome(&fails, format!("{} instances, {edges} edges, {:.2}s", corpus.len(), el.as_secs_f64()))
}

fn c2_drawing(corpus: &[Instance], drawings: &mut Vec<Option<PlaneDrawing>>) -> Outcome {
    let mut fails = Vec::new();
    let (mut edges, mut slowest) = (0, Duration::ZERO);
    for inst in corpus {
        let t = Instant::now();
        let pd = match plane_drawing(&inst.family, &inst.s) {
            Ok(pd) => pd,
            Err(e) => {
                fails.push(format!("seed {}: {e}", inst.spec.seed));
                drawings.push(None);
                continue;
            }
        };
        let el = t.elapsed();
        slowest = slowest.max(el);
        if el > MAX_DRAW {
            fails.push(format!("seed {} took {el:?}", inst.spec.seed));
        }
        let mut rep = verify_planarity(&pd.drawing);
        rep.merge(verify_containment(&pd.drawing, &inst.family, &inst.s));
        rep.merge(verify_coverage(&pd.drawing, &inst.family, &inst.s));
        for e in &pd.drawing.edges {
            rep.merge(verify_crossing_budget(e, &pd.witness_family));
        }
        if !rep.passed() {
            fails.push(format!("seed {}: {}", inst.spec.seed, rep.failures[0]));
        }
        edges += pd.drawing.edges.len();
        drawings.push(Some(pd));
    }
    outcome(&fails, format!("{} drawings, {edges} curves, slowest {:.2}s", corpus.len(), slowest.as_secs_f64()))
}

/// Replays normalization one lens at a time, checking each step against
/// direct crossing counts and traces.
fn c3_decrement(corpus: &[Instance]) -> Outcome {
    let mut fails = Vec::new();
    let mut steps = 0;
    for inst in corpus {
        let seed = inst.spec.seed;
        let s = &inst.s;
        let mut cur = inst.family.filter(|d| trace_set(d, s).len() >= 2);
        let run = (|| -> Result<()> {
            while let Some(lens) = find_min_empty_lens(&cur, s)? {
                let before = family_crossings(&cur)?;
                let (next, step) = remove_lens(&cur, s, &lens)?;
                let after = family_crossings(&next)?;
                steps += 1;
                if before != after + 2 || step.crossings_before != before || step.crossings_after != after {
                    fails.push(format!("seed {seed} {step}: counted {before} -> {after}"));
                }
                let (old, new) = (cur.get(&step.disk).unwrap(), next.get(&step.disk).unwrap());
                if trace_set(old, s) != trace_set(new, s) {
                    fails.push(format!("seed {seed}: trace of {} changed", step.disk));
                }
                cur = next;
            }
            let (deduped, _) = dedupe_traces(&cur, s)?;
            if deduped != respect_normalize(&inst.family, s)?.0 {
                fails.push(format!("seed {seed}: replay disagrees with respect_normalize"));
            }
            Ok(())
        })();
        if let Err(e) = run {
            fails.push(format!("seed {seed}: {e}"));
        }
    }
    outcome(&fails, format!("{steps} lens removals"))
}

fn c4_postconditions(corpus: &[Instance]) -> Outcome {
    let mut fails = Vec::new();
    let mut disks = 0;
    for inst in corpus {
        let seed = inst.spec.seed;
        let s = &inst.s;
        let run = (|| -> Result<()> {
            let (g, _) = respect_normalize(&inst.family, s)?;
            disks += g.len();
            if !check_respects(&g, s)?.respects() {
                fails.push(format!("seed {seed}: does not respect"));
            }
            if let Some(l) = find_min_empty_lens(&g, s)? {
                fails.push(format!("seed {seed}: empty lens {} remains", l.reference()));
            }
            let traces: Vec<BTreeSet<String>> = g.disks().iter().map(|d| trace_set(d, s)).collect();
            let distinct: BTreeSet<_> = traces.iter().cloned().collect();
            if distinct.len() != traces.len() {
                fails.push(format!("seed {seed}: repeated trace"));
            }
            let want: BTreeSet<_> =
                inst.family.disks().iter().map(|d| trace_set(d, s)).filter(|t| t.len() >= 2).collect();
            if distinct != want {
                fails.push(format!("seed {seed}: surviving traces differ from input traces"));
            }
            Ok(())
        })();
        if let Err(e) = run {
            fails.push(format!("seed {seed}: {e}"));
        }
    }
    outcome(&fails, format!("{} normalized families, {disks} disks kept", corpus.len()))
}

fn c5_ray_ledger(corpus: &[Instance]) -> Outcome {
    let mut fails = Vec::new();
    let (mut routes, mut crossings) = (0, 0);
    for inst in corpus {
        for (i, lp) in inst.s.points().iter().enumerate() {
            let fam = inst.family.filter(|d| d.locate(&lp.point) == Location::Inside);
            if fam.is_empty() {
                continue;
            }
            // two targets per centre keep the run short
            for lq in inst.s.points().iter().cycle().skip(i + 1).take(2.min(inst.s.len() - 1)) {
                routes += 1;
                let tag = format!("seed {} {}->{}", inst.spec.seed, lq.label, lp.label);
                let curve = match ray_route(&fam, &lp.point, &lq.point) {
                    Ok(c) => c,
                    Err(e) => {
                        fails.push(format!("{tag}: {e}"));
                        continue;
                    }
                };
                if curve.first() != &lq.point || curve.last() != &lp.point || !curve.is_simple() {
                    fails.push(format!("{tag}: bad curve"));
                }
                for d in fam.disks() {
                    let want = usize::from(d.locate(&lq.point) != Location::Inside);
                    match crossings_with(&curve, d) {
                        Ok(n) if n == want => crossings += n,
                        Ok(n) => fails.push(format!("{tag}: {} crossed {n} times, want {want}", d.id)),
                        Err(e) => fails.push(format!("{tag}: {e}")),
                    }
                }
            }
        }
    }
    if routes < 100 {
        fails.push(format!("only {routes} subfamilies"));
    }
    outcome(&fails, format!("{routes} routes, {crossings} boundary crossings"))
}

fn c6_parity(corpus: &[Instance], drawings: &[Option<PlaneDrawing>]) -> Outcome {
    let mut fails = Vec::new();
    let (mut pairs, mut total) = (0, 0);
    for (inst, pd) in corpus.iter().zip(drawings) {
        let Some(pd) = pd else { continue };
        let fam = &pd.witness_family;
        let raw: Vec<DrawnEdge> =
            match pd.drawing.edges.iter().map(|e| transversal_edge(fam, &inst.s, &e.x, &e.y)).collect::<Result<_>>() {
                Ok(v) => v,
                Err(e) => {
                    fails.push(format!("seed {}: {e}", inst.spec.seed));
                    continue;
                }
            };
        for i in 0..raw.len() {
            for j in i + 1..raw.len() {
                let (a, b) = (&raw[i], &raw[j]);
                if a.touches(&b.x) || a.touches(&b.y) {
                    continue;
                }
                pairs += 1;
                let (da, db) = (fam.get(&a.witness).unwrap(), fam.get(&b.witness).unwrap());
                match verify_parity(a, b, da, db, &inst.s) {
                    Ok(rep) if rep.passed() => total += polyline_crossings(&a.curve, &b.curve).map_or(0, |v| v.len()),
                    Ok(rep) => fails.push(format!("seed {}: {}", inst.spec.seed, rep.failures[0])),
                    Err(e) => fails.push(format!("seed {}: {e}", inst.spec.seed)),
                }
            }
        }
    }
    if pairs < 100 {
        fails.push(format!("only {pairs} disjoint pairs"));
    }
    outcome(&fails, format!("{pairs} disjoint-trace pairs, {total} crossings in all"))
}

/// Checks the corpus drawings, plus capsule families: those stack many
/// two-point disks over one point, which random disks almost never do.
fn c7_same_type(corpus: &[Instance], drawings: &[Option<PlaneDrawing>]) -> Outcome {
    let mut fails = Vec::new();
    let (mut families, mut deep) = (0, 0);
    let mut check = |fails: &mut Vec<String>, tag: String, fam: &Family, s: &PointSet| {
        families += 1;
        match build_arrangement(fam) {
            Ok(arr) => deep += arr.faces.iter().filter(|f| f.containment.len() >= 4).count(),
            Err(e) => fails.push(format!("{tag}: {e}")),
        }
        match mixed_deep_faces(fam, s) {
            Ok(v) if v.is_empty() => {}
            Ok(v) => fails.push(format!("{tag}: face at {} in {} mixes types", v[0].rep, v[0].witness)),
            Err(e) => fails.push(format!("{tag}: {e}")),
        }
    };
    for (inst, pd) in corpus.iter().zip(drawings) {
        if let Some(pd) = pd {
            check(&mut fails, format!("seed {}", inst.spec.seed), &pd.witness_family, &inst.s);
        }
    }
    for seed in 0..CAPSULE_SEEDS {
        let spec = GenSpec { k: 8, ..GenSpec::new(GenKind::Capsules, seed, 8 + (seed % 3) as usize, 20) };
        let tag = format!("capsules seed {seed}");
        let run = generate(&spec).and_then(|(f, s)| Ok((plane_drawing(&f, &s)?, s)));
        match run {
            Ok((pd, s)) => check(&mut fails, tag, &pd.witness_family, &s),
            Err(e) => fails.push(format!("{tag}: {e}")),
        }
    }
    if deep == 0 {
        fails.push("no face of depth >= 4 found".into());
    }
    outcome(&fails, format!("{families} witness families, {deep} faces of depth >= 4"))
}

fn c8_connectivity() -> Outcome {
    let mut fails = Vec::new();
    let (mut instances, mut traces) = (0, 0);
    for seed in 0..24u64 {
        let spec = GenSpec::new(GenKind::ShrinkableFixture, seed, 3 + (seed % 8) as usize, 0);
        let run = (|| -> Result<()> {
            let (f, s) = generate(&spec)?;
            if !check_shrinkable(&f, &s)?.shrinkable() {
                fails.push(format!("seed {seed}: fixture not shrinkable"));
                return Ok(());
            }
            instances += 1;
            let g = delaunay_graph(&f, &s)?;
            for d in f.disks() {
                traces += 1;
                if !induced_connectivity(&g, &trace_of(d, &s)?) {
                    fails.push(format!("seed {seed}: trace of {} disconnected", d.id));
                }
            }
            Ok(())
        })();
        if let Err(e) = run {
            fails.push(format!("seed {seed}: {e}"));
        }
    }
    if instances < 20 {
        fails.push(format!("only {instances} shrinkable instances"));
    }
    outcome(&fails, format!("{instances} shrinkable instances, {traces} traces"))
}

fn artifacts(spec: &GenSpec) -> Result<(String, String, String)> {
    let (f, s) = generate(spec)?;
    let pd = plane_drawing(&f, &s)?;
    Ok((write_instance(&f, &s), write_drawing(&pd), emit_svg(&f, &s, Some(&pd.drawing), &SvgOptions::default())))
}

fn c9_determinism() -> Outcome {
    let mut fails = Vec::new();
    let mut bytes = 0;
    let specs: Vec<GenSpec> = (0..12)
        .map(corpus_spec)
        .chain((0..4).map(|seed| GenSpec::new(GenKind::ShrinkableFixture, seed, 6, 0)))
        .collect();
    for spec in &specs {
        match (artifacts(spec), artifacts(spec)) {
            (Ok(a), Ok(b)) => {
                bytes += a.0.len() + a.1.len() + a.2.len();
                if a != b {
                    fails.push(format!("{} seed {} differs", spec.kind, spec.seed));
                }
            }
            (Err(e), _) | (_, Err(e)) => fails.push(format!("{} seed {}: {e}", spec.kind, spec.seed)),
        }
    }
    outcome(&fails, format!("{} specs, {bytes} bytes compared per run", specs.len()))
}

fn main() -> ExitCode {
    // honour `cargo test <filter>` the way the default harness would
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filters.is_empty() && !filters.iter().any(|f| "acceptance".contains(f.as_str())) {
        return ExitCode::SUCCESS;
    }
    let t = Instant::now();
    let corpus = corpus();
    let mut drawings = Vec::with_capacity(corpus.len());
    let results = [
        ("1 delaunay-oracle", c1_oracle(&corpus)),
        ("2 plane-drawing", c2_drawing(&corpus, &mut drawings)),
        ("3 lens-decrement", c3_decrement(&corpus)),
        ("4 normalize-post", c4_postconditions(&corpus)),
        ("5 ray-ledger", c5_ray_ledger(&corpus)),
        ("6 parity", c6_parity(&corpus, &drawings)),
        ("7 same-type", c7_same_type(&corpus, &drawings)),
        ("8 connectivity", c8_connectivity()),
        ("9 determinism", c9_determinism()),
    ];
    let mut ok = true;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        ok &= o.passed;
    }
    println!("acceptance finished in {:.1}s", t.elapsed().as_secs_f64());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
