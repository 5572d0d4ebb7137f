//! The ten acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p dualcx --test acceptance -- --nocapture` to see
//! the report.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use dualcx::balls::{audit_in, critical_radii_in, field_for, partition, simplicial_ball, BallError};
use dualcx::complex::{
    check_link_condition, triangle_shape, validate_disk_condition, DiskCondition, DiskVerdict, LinkGraph, LinkVerdict,
    TriComplex, VertexId,
};
use dualcx::exactnum::{rat, QField, RadicalSum};
use dualcx::expansion::{
    epsilon_between, epsilon_for, expand_to, expand_with_order, hash_set, verify_certificate, ExpansionCertificate,
};
use dualcx::generators::{gen_regular, gen_seifert, gen_seifert_patch, EdgeOrders, SeifertPatch};
use dualcx::geodesics::{cmp_distances, vertex_distance, DistanceField};

const FAMILIES: [(u32, u32, u32); 3] = [(6, 6, 6), (4, 8, 8), (4, 6, 12)];

fn dc(t: (u32, u32, u32)) -> DiskCondition {
    DiskCondition::new(t.0, t.1, t.2)
}

fn int(n: i64) -> RadicalSum {
    RadicalSum::from_int(n)
}

fn sqrt(n: i64) -> RadicalSum {
    RadicalSum::sqrt_of(&QField::from_int(n))
}

fn frac(n: i64, d: i64) -> RadicalSum {
    RadicalSum::from_field(QField::from_rational(rat(n, d)))
}

fn regular_666(radius: u32) -> TriComplex {
    gen_regular(dc((6, 6, 6)), EdgeOrders::uniform(3), radius).unwrap()
}

type Outcome = Result<String, String>;

struct Report {
    lines: Vec<(usize, bool)>,
}

impl Report {
    fn run(&mut self, n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) {
        let t0 = Instant::now();
        let out = f();
        let took = t0.elapsed();
        let (ok, detail) = match out {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} limit", limit)),
            Err(e) => (false, e),
        };
        println!(
            "{} criterion {n:>2} {name}: {detail} [{:.2}s / {}s]",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
        self.lines.push((n, ok));
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_disk_gate() -> Outcome {
    let bases: BTreeSet<[u32; 3]> = [[6, 6, 6], [4, 8, 8], [4, 6, 12]].into();
    let mut accepted = 0;
    for a in 1..=16i64 {
        for b in 1..=16i64 {
            for c in 1..=16i64 {
                let v = validate_disk_condition([a, b, c]).map_err(|e| e.to_string())?;
                // 1/a + 1/b + 1/c ≤ 1/2 over the integers
                let oracle = 2 * (a * b + b * c + c * a) <= a * b * c;
                ensure(v.is_accepted() == oracle, || format!("({a},{b},{c}) judged {v:?}"))?;
                let mut s = [a as u32, b as u32, c as u32];
                s.sort_unstable();
                let is_base = matches!(v, DiskVerdict::Base(_));
                ensure(is_base == bases.contains(&s), || format!("({a},{b},{c}) base flag {is_base}"))?;
                accepted += usize::from(oracle);
            }
        }
    }
    Ok(format!("4096 triples, {accepted} accepted, base exactly the permutations of 3 triples"))
}

fn c2_shapes() -> Outcome {
    let expect: [[i64; 3]; 3] = [[1, 1, 1], [1, 1, 2], [1, 3, 4]];
    for (fam, want) in FAMILIES.iter().zip(expect) {
        let shape = triangle_shape(&dc(*fam)).map_err(|e| e.to_string())?;
        let mut got: Vec<QField> = [(1, 2), (1, 3), (2, 3)].iter().map(|&(s, t)| shape.edge_sq(s, t).clone()).collect();
        got.sort_by(|x, y| x.cmp_value(y));
        let want: Vec<QField> = want.iter().map(|&n| QField::from_int(n)).collect();
        ensure(got == want, || format!("{fam:?}: {got:?}"))?;
    }
    Ok("side squares {1,1,1}, {1,1,2}, {1,3,4}".into())
}

/// A type-1 vertex of a (6,6,6) complex whose link is a 4-cycle.
fn four_cycle_star() -> TriComplex {
    // 0 centre, 1 and 3 of type 2, 2 and 4 of type 3
    let faces = vec![[0, 1, 2], [0, 3, 2], [0, 3, 4], [0, 1, 4]];
    TriComplex::new(dc((6, 6, 6)), vec![1, 2, 3, 2, 3], faces, 1).unwrap()
}

fn c3_link_condition() -> Outcome {
    let mut checked = 0;
    for fam in FAMILIES {
        let cx = gen_seifert(dc(fam), 4).map_err(|e| e.to_string())?;
        for v in 0..cx.num_vertices() as VertexId {
            if !cx.is_interior(v) {
                continue;
            }
            let lv = check_link_condition(&cx, v).map_err(|e| e.to_string())?;
            ensure(lv.passes && lv.girth_angle_units == Some(24), || format!("{fam:?} vertex {v}: {lv:?}"))?;
            checked += 1;
        }
    }
    let five = LinkVerdict::for_graph(&LinkGraph::from_cycle(5), 0, 6);
    ensure(!five.passes, || "5-cycle link at n=6 passes".into())?;
    let four = check_link_condition(&four_cycle_star(), 0).map_err(|e| e.to_string())?;
    ensure(!four.passes, || "4-cycle star passes".into())?;
    Ok(format!("{checked} interior vertices tight at 2π; 5-cycle and 4-cycle mutations fail"))
}

fn near_base(patch: &SeifertPatch, r_sq: i64) -> Vec<VertexId> {
    let o = &patch.coords[0];
    (0..patch.complex.num_vertices() as VertexId)
        .filter(|&v| patch.coords[v as usize].dist_sq(o).cmp_value(&QField::from_int(r_sq)).is_le())
        .collect()
}

/// Exact agreement of `vertex_distance` with `sqrt(oracle)`, plus
/// containment of the oracle in a rational enclosure of the result.
fn agree(cx: &TriComplex, a: VertexId, b: VertexId, oracle_sq: &QField) -> Result<(), String> {
    let g = vertex_distance(cx, a, b).map_err(|e| format!("{a}-{b}: {e}"))?;
    ensure(g.length == RadicalSum::sqrt_of(oracle_sq), || {
        format!("{a}-{b}: {} against √({oracle_sq})", g.length)
    })?;
    let (lo, hi) = g.length.enclosure(96);
    let (qlo, qhi) = oracle_sq.enclosure(96);
    ensure(&lo * &lo <= qhi && qlo <= &hi * &hi, || format!("{a}-{b}: enclosure misses the oracle"))
}

fn eisenstein_sq(patch: &SeifertPatch, a: VertexId, b: VertexId) -> QField {
    // coordinates x = m + n/2, y = n·√3/2
    let p = &patch.coords[a as usize];
    let q = &patch.coords[b as usize];
    let dx = (&p.x - &q.x).a.clone();
    let dy3 = (&p.y - &q.y).c.clone();
    let n = &dy3 * BigRational::from_integer(2.into());
    let m = &dx - &n / BigRational::from_integer(2.into());
    QField::from_rational(&m * &m + &m * &n + &n * &n)
}

fn c4_eisenstein() -> Outcome {
    let patch = gen_seifert_patch(dc((6, 6, 6)), 5).map_err(|e| e.to_string())?;
    let cx = &patch.complex;
    let near = near_base(&patch, 16);
    let mut pairs = 0;
    for (i, &a) in near.iter().enumerate() {
        for &b in &near[i + 1..] {
            agree(cx, a, b, &eisenstein_sq(&patch, a, b))?;
            pairs += 1;
        }
    }
    let field = field_for(cx, 0, &int(4)).map_err(|e| e.to_string())?;
    let radii = critical_radii_in(cx, &field, &int(4)).map_err(|e| e.to_string())?;
    let want = vec![int(1), sqrt(3), int(2), sqrt(7), int(3), sqrt(12), sqrt(13), int(4)];
    ensure(radii == want, || format!("critical radii {radii:?}"))?;
    Ok(format!("{} vertices, {pairs} pairs exact; 8 critical radii up to 4", near.len()))
}

fn c5_planar(fam: (u32, u32, u32)) -> Outcome {
    let patch = gen_seifert_patch(dc(fam), 5).map_err(|e| e.to_string())?;
    let cx = &patch.complex;
    let near = near_base(&patch, 16);
    let mut pairs = 0;
    for (i, &a) in near.iter().enumerate() {
        for &b in &near[i + 1..] {
            agree(cx, a, b, &patch.coords[a as usize].dist_sq(&patch.coords[b as usize]))?;
            pairs += 1;
        }
    }
    Ok(format!("{} vertices, {pairs} pairs exact", near.len()))
}

fn c6_sphere_audit() -> Outcome {
    let mut complexes: Vec<(String, TriComplex)> = FAMILIES
        .iter()
        .map(|&f| (format!("{f:?}"), gen_seifert(dc(f), 5).unwrap()))
        .collect();
    complexes.push(("(6,6,6) orders 3".into(), regular_666(4)));
    let mut summary = Vec::new();
    for (name, cx) in &complexes {
        let field = field_for(cx, 0, &frac(7, 2)).map_err(|e| e.to_string())?;
        let mut audited = 0;
        for k in 0..24 {
            let r = frac(3 + 7 * k, 53);
            let a = audit_in(cx, &field, &r).map_err(|e| format!("{name} r={r}: {e}"))?;
            ensure(a.is_clean(), || format!("{name} r={r}: {:?}", a.violations))?;
            audited += 1;
        }
        summary.push(format!("{name} {audited}"));
    }
    Ok(format!("zero violations at regular radii: {}", summary.join(", ")))
}

fn check_certificate(cx: &TriComplex, cert: &ExpansionCertificate) -> Result<usize, String> {
    ensure(verify_certificate(cx, cert).is_valid(), || "certificate rejected".into())?;
    let mut steps = 0;
    for st in &cert.stages {
        for step in &st.steps {
            let e = &step.evidence;
            ensure(
                e.connected && e.acyclic && 2 * e.diameter_units <= cx.vertex_n(step.x),
                || format!("step at {} has evidence {e:?}", step.x),
            )?;
            steps += 1;
        }
        let ball = simplicial_ball(cx, cert.base_vertex, &st.radius).map_err(|e| e.to_string())?;
        ensure(hash_set(&ball) == st.final_hash, || format!("stage {} differs from the ball", st.radius))?;
    }
    Ok(steps)
}

fn c7_round_trip() -> Outcome {
    let mut summary = Vec::new();
    for fam in FAMILIES {
        let cx = gen_seifert(dc(fam), 4).map_err(|e| e.to_string())?;
        let cert = expand_to(&cx, 0, &int(3)).map_err(|e| e.to_string())?;
        let steps = check_certificate(&cx, &cert).map_err(|e| format!("{fam:?}: {e}"))?;
        summary.push(format!("{fam:?} {} stages/{steps} steps", cert.stages.len()));
    }
    let cx = regular_666(3);
    let cert = expand_to(&cx, 0, &int(2)).map_err(|e| e.to_string())?;
    let steps = check_certificate(&cx, &cert).map_err(|e| format!("orders 3: {e}"))?;
    summary.push(format!("(6,6,6) orders 3 {} stages/{steps} steps", cert.stages.len()));
    Ok(summary.join(", "))
}

fn mutants(cert: &ExpansionCertificate) -> Vec<(String, ExpansionCertificate)> {
    let mut out = Vec::new();
    for (i, st) in cert.stages.iter().enumerate() {
        for (j, step) in st.steps.iter().enumerate() {
            for e in &step.gamma.edges {
                let mut m = cert.clone();
                m.stages[i].steps[j].gamma.edges.remove(e);
                out.push((format!("stage {i} step {j}: drop link edge {e:?}"), m));
            }
        }
        // ε at the bound itself and beyond it
        let r = &st.radius;
        let r_sq = (r * r).as_field().expect("critical radii here have field squares");
        let bound = r - &RadicalSum::sqrt_of(&(r_sq - QField::from_rational(rat(1, 4))));
        for eps in [bound.clone(), &bound + &frac(1, 1000), r.clone()] {
            let mut m = cert.clone();
            m.stages[i].epsilon = eps.clone();
            out.push((format!("stage {i}: epsilon {eps}"), m));
        }
        for k in 0..st.boundary.len() {
            let mut m = cert.clone();
            m.stages[i].boundary.remove(k);
            m.stages[i].steps.remove(k);
            out.push((format!("stage {i}: drop boundary vertex {k}"), m));
        }
        for which in ["start", "final"] {
            let mut m = cert.clone();
            let h = if which == "start" {
                &mut m.stages[i].start_hash
            } else {
                &mut m.stages[i].final_hash
            };
            let flipped = if h.starts_with('0') { "1" } else { "0" };
            h.replace_range(0..1, flipped);
            out.push((format!("stage {i}: alter {which} hash"), m));
        }
    }
    out
}

fn c8_mutations() -> Outcome {
    let mut total = 0;
    let mut killed = 0;
    let mut survivors = Vec::new();
    for (fam, r) in [((6, 6, 6), int(2)), ((4, 8, 8), sqrt(2))] {
        let cx = gen_seifert(dc(fam), 3).map_err(|e| e.to_string())?;
        let cert = expand_to(&cx, 0, &r).map_err(|e| e.to_string())?;
        for (what, m) in mutants(&cert) {
            total += 1;
            if verify_certificate(&cx, &m).is_valid() {
                survivors.push(format!("{fam:?} {what}"));
            } else {
                killed += 1;
            }
        }
    }
    ensure(survivors.is_empty(), || format!("survivors: {survivors:?}"))?;
    Ok(format!("{killed}/{total} mutants rejected"))
}

fn c9_permutations() -> Outcome {
    let cx = gen_seifert(dc((6, 6, 6)), 3).map_err(|e| e.to_string())?;
    let r = sqrt(3);
    let reference = expand_to(&cx, 0, &r).map_err(|e| e.to_string())?;
    let finals = |c: &ExpansionCertificate| c.stages.iter().map(|s| s.final_hash.clone()).collect::<Vec<_>>();
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut distinct = BTreeSet::new();
    for _ in 0..20 {
        let cert = expand_with_order(&cx, 0, &r, |_, b| b.shuffle(&mut rng)).map_err(|e| e.to_string())?;
        ensure(verify_certificate(&cx, &cert).is_valid(), || "shuffled certificate rejected".into())?;
        ensure(finals(&cert) == finals(&reference), || "final sets differ".into())?;
        distinct.insert(cert.stages.iter().map(|s| s.boundary.clone()).collect::<Vec<_>>());
    }
    Ok(format!("20 orders ({} distinct) valid with identical final sets", distinct.len()))
}

/// `0 < ε < r − √(r² − 1/4)`, in the form `ε < r` and `ε(2r − ε) < 1/4`.
fn below_bound(eps: &RadicalSum, r: &RadicalSum) -> Result<bool, String> {
    let e = |x| format!("{x}");
    let positive = eps.sign().map_err(e)?.is_gt();
    let under_r = cmp_distances(eps, r).map_err(e)?.is_lt();
    let lhs = eps * &(&(r + r) - eps);
    let quarter = cmp_distances(&lhs, &frac(1, 4)).map_err(e)?.is_lt();
    Ok(positive && under_r && quarter)
}

fn check_epsilons(cx: &TriComplex, field: &DistanceField, max: &RadicalSum) -> Result<usize, String> {
    let radii = critical_radii_in(cx, field, max).map_err(|e| e.to_string())?;
    let mut prev = RadicalSum::zero();
    for r in &radii {
        let eps = epsilon_between(r, &prev).map_err(|e| e.to_string())?;
        ensure(below_bound(&eps, r)?, || format!("ε = {eps} at r = {r}"))?;
        let below = partition(cx, field, &(r - &eps)).map_err(|e: BallError| e.to_string())?;
        let strictly: BTreeSet<VertexId> = field
            .settled()
            .iter()
            .copied()
            .filter(|&w| cmp_distances(field.distance(w).unwrap(), r).is_ok_and(|o| o.is_lt()))
            .collect();
        ensure(below.closed() == strictly, || format!("B^s(r − ε) at r = {r} is not the open ball"))?;
        prev = r.clone();
    }
    Ok(radii.len())
}

fn c10_epsilon() -> Outcome {
    let mut summary = Vec::new();
    for fam in FAMILIES {
        let cx = gen_seifert(dc(fam), 5).map_err(|e| e.to_string())?;
        let field = field_for(&cx, 0, &int(4)).map_err(|e| e.to_string())?;
        let n = check_epsilons(&cx, &field, &int(4)).map_err(|e| format!("{fam:?}: {e}"))?;
        summary.push(format!("{fam:?} {n}"));
    }
    let cx = regular_666(4);
    let field = field_for(&cx, 0, &int(3)).map_err(|e| e.to_string())?;
    let n = check_epsilons(&cx, &field, &int(3)).map_err(|e| format!("orders 3: {e}"))?;
    summary.push(format!("(6,6,6) orders 3 {n} (r ≤ 3)"));
    // the public entry point agrees with the schedule
    let cx = gen_seifert(dc((6, 6, 6)), 3).map_err(|e| e.to_string())?;
    let e = epsilon_for(&cx, 0, &sqrt(3)).map_err(|e| e.to_string())?;
    ensure(e == epsilon_between(&sqrt(3), &int(1)).unwrap(), || "epsilon_for disagrees".into())?;
    Ok(format!("critical radii checked: {}", summary.join(", ")))
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let mut report = Report { lines: Vec::new() };
    report.run(1, "base-condition gate", secs(1), c1_disk_gate);
    report.run(2, "shape exactness", secs(1), c2_shapes);
    report.run(3, "link condition", secs(5), c3_link_condition);
    report.run(4, "distance oracle (6,6,6)", secs(60), c4_eisenstein);
    report.run(5, "distance oracle (4,8,8)", secs(60), || c5_planar((4, 8, 8)));
    report.run(5, "distance oracle (4,6,12)", secs(60), || c5_planar((4, 6, 12)));
    report.run(6, "sphere lemma audit", secs(120), c6_sphere_audit);
    report.run(7, "expansion round trip", secs(120), c7_round_trip);
    report.run(8, "mutation kill rate", secs(30), c8_mutations);
    report.run(9, "permutation stability", secs(30), c9_permutations);
    report.run(10, "epsilon conformance", secs(30), c10_epsilon);
    let failed: Vec<usize> = report.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
