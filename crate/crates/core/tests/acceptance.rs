//! One PASS/FAIL line per acceptance criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relaxcomp::bounds::{chromatic_number, hiding_graph, max_clique};
use relaxcomp::fixtures::{delta3_graph, four_facet_set, pentagon, DELTA3_EDGES};
use relaxcomp::lattice::{
    ball, box_set, cross, debruijn_set, delta3_certificate, delta3_certificate_ordered,
    dim_of, observers_in_region, parity_candidates, simplex,
};
use relaxcomp::rat::{self, Rat};
use relaxcomp::rc2d::{maximal_arcs, min_circular_cover, observers_2d, polygon_points, rc_2d};
use relaxcomp::relaxations::{
    box_simplex, cross_lift, cross_relaxation, iterative_rc, verify_relaxation, IterOutcome,
    Verification,
};
use relaxcomp::separation::{rc_eps_full, rc_finite};
use relaxcomp::{LatticeSet, Result};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn c1() -> Outcome {
    let x = simplex(3);
    let ids = delta3_certificate_ordered();
    let full = ok(hiding_graph(&x, &delta3_certificate()))?;
    let order: Vec<usize> = ids
        .iter()
        .map(|p| full.index_of(p).expect("table point is a vertex"))
        .collect();
    let computed = full.induced(&order);
    let fixture = delta3_graph();
    let shared = DELTA3_EDGES
        .iter()
        .filter(|&&(u, v)| computed.has_edge(u, v))
        .count();
    check(shared == 54, format!("only {shared} of 54 fixture edges are hiding pairs"))?;
    let (w, _) = max_clique(&fixture);
    check(w == 2, format!("clique {w}"))?;
    let (chi, _) = chromatic_number(&fixture);
    check(chi == 4, format!("chromatic {chi}"))?;
    for &(u, v) in DELTA3_EDGES.iter() {
        let (c, _) = chromatic_number(&fixture.without_edge(u, v));
        check(c == 3, format!("deleting ({u},{v}) leaves chromatic {c}"))?;
    }
    let (k, cert) = ok(rc_finite(&x, &delta3_certificate()))?;
    ok(cert.validate(&x.rat_points()))?;
    check(k == 4, format!("rc = {k}"))?;
    Ok(format!(
        "54/54 edges (computed graph has {}), clique 2, chromatic 4, 54 deletions give 3, rc = 4",
        computed.edge_count()
    ))
}

fn c2() -> Outcome {
    for d in [3, 4] {
        let q = ok(cross_relaxation(d))?;
        check(q.len() == d + 1, format!("d = {d}: {} rows", q.len()))?;
        let v = ok(verify_relaxation(&q, &cross(d)))?;
        check(v == Verification::Verified, format!("d = {d}: {v:?}"))?;
    }
    let x = cross(3);
    let g = ok(hiding_graph(&x, &ok(ball(&x, 2))?))?;
    let (w, _) = max_clique(&g);
    let (chi, _) = chromatic_number(&g);
    let note = if chi >= 4 { "reaches 4" } else { "recorded only" };
    Ok(format!(
        "rc(cross_3) = 4, rc(cross_4) = 5 (upper bounds verified); hiding graph on B_2: clique {w}, chromatic {chi} ({note})"
    ))
}

fn c3() -> Outcome {
    let q4 = ok(cross_lift(&ok(cross_relaxation(3))?))?;
    check(q4.len() == 6, format!("{} rows in d = 4", q4.len()))?;
    let v = ok(verify_relaxation(&q4, &cross(4)))?;
    check(v == Verification::Verified, format!("d = 4: {v:?}"))?;
    let q5 = ok(cross_lift(&q4))?;
    check(q5.len() == 8, format!("{} rows in d = 5", q5.len()))?;
    let v = ok(verify_relaxation(&q5, &cross(5)))?;
    check(v == Verification::Verified, format!("d = 5: {v:?}"))?;
    Ok("6-row relaxation of cross_4 and 8-row relaxation of cross_5 verify".into())
}

fn c4() -> Outcome {
    let cases: [(&[(i64, i64)], usize); 3] = [
        (&[(0, 2)], 2),
        (&[(0, 2), (0, 1)], 3),
        (&[(0, 2), (0, 2)], 4),
    ];
    let mut got = Vec::new();
    for (segs, want) in cases {
        let x = ok(box_set(segs))?;
        let cand = parity_candidates(&x).ok_or("box misses a parity class")?;
        let obs = ok(observers_in_region(&x, &cand))?;
        let (k, _) = ok(rc_finite(&x, &obs))?;
        check(k == want, format!("{segs:?}: rc = {k}, expected {want}"))?;
        if x.dim() == 2 {
            let (k2, _) = ok(rc_2d(&x))?;
            check(k2 == want, format!("{segs:?}: planar rc = {k2}"))?;
        }
        got.push(k);
    }
    Ok(format!("rc = {got:?}; planar pipeline agrees"))
}

fn c5() -> Outcome {
    for l in 0..=2usize {
        for b in [2i64, 3, 5] {
            let mut segs = vec![(0, 1); l];
            segs.push((0, b));
            let x = ok(box_set(&segs))?;
            let v = ok(verify_relaxation(&ok(box_simplex(l, b))?, &x))?;
            check(v == Verification::Verified, format!("l = {l}, b = {b}: {v:?}"))?;
        }
    }
    Ok("9 box simplices verify".into())
}

fn c6() -> Outcome {
    let x = ok(polygon_points(&pentagon()))?;
    let cyc = ok(observers_2d(&x))?;
    let arcs = ok(maximal_arcs(&x, &cyc))?;
    let (k, _) = ok(min_circular_cover(&arcs, cyc.len()))?;
    check(cyc.len() == 10, format!("{} observers", cyc.len()))?;
    check(arcs.len() == 6, format!("{} arcs", arcs.len()))?;
    check(k == 3, format!("cover {k}"))?;
    let (sq, _) = ok(rc_2d(&ok(box_set(&[(0, 1), (0, 1)]))?))?;
    check(sq == 3, format!("rc(square) = {sq}"))?;
    Ok("10 observers, 6 arcs, cover 3, rc(square) = 3".into())
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    let mut hist = [0usize; 8];
    while done < 200 {
        let n = rng.gen_range(3..=7);
        let pts: Vec<Vec<i64>> = (0..n)
            .map(|_| vec![rng.gen_range(0..=8), rng.gen_range(0..=8)])
            .collect();
        let v = ok(LatticeSet::from_points_dedup(2, pts))?;
        if dim_of(&v) != 2 {
            continue;
        }
        let x = ok(polygon_points(&v))?;
        let obs = ok(observers_2d(&x))?.to_set();
        let (k, _) = ok(rc_2d(&x))?;
        let (h, _) = max_clique(&ok(hiding_graph(&x, &obs))?);
        check(h <= k && k <= h + 1, format!("{:?}: H = {h}, rc = {k}", v.points()))?;
        let (kf, _) = ok(rc_finite(&x, &obs))?;
        check(kf == k, format!("{:?}: planar {k}, finite {kf}", v.points()))?;
        hist[k] += 1;
        done += 1;
    }
    Ok(format!("200 polygons; rc histogram 3..=5: {:?}", &hist[3..=5]))
}

fn c8() -> Outcome {
    let sets = [
        ("square", ok(box_set(&[(0, 1), (0, 1)]))?),
        ("simplex", simplex(2)),
        ("cross", cross(2)),
    ];
    let eps: [Rat; 3] = [rat::int(1), rat::ratio(1, 2), rat::ratio(1, 4)];
    let mut summary = Vec::new();
    for (name, x) in &sets {
        let lower: Vec<usize> = [1, 2]
            .iter()
            .map(|&t| ok(rc_finite(x, &ok(ball(x, t))?)).map(|r| r.0))
            .collect::<std::result::Result<_, _>>()?;
        let mut prev = usize::MAX;
        let mut vals = Vec::new();
        for e in &eps {
            let (k, _) = ok(rc_eps_full(x, e))?;
            for (t, l) in lower.iter().enumerate() {
                check(*l <= k, format!("{name}: rc(X, B_{}) = {l} > {k} at eps {e}", t + 1))?;
            }
            check(k <= prev, format!("{name}: {k} after {prev} as eps shrinks"))?;
            prev = k;
            vals.push(k);
        }
        summary.push(format!("{name} B_t {lower:?} eps {vals:?}"));
    }
    Ok(summary.join("; "))
}

fn c9() -> Outcome {
    let x = simplex(4);
    let y = ok(ball(&x, 1))?;
    let (k, _) = ok(rc_finite(&x, &y))?;
    check(k <= 4, format!("rc(X, B_1) = {k}"))?;
    let out = ok(iterative_rc(&x, &y, 2, 3))?;
    match &out {
        IterOutcome::Converged { k, .. } if *k <= 4 => {
            return Err(format!("converged with {k} inequalities"));
        }
        _ => {}
    }
    Ok(format!("rc(X, B_1) = {k}; iteration: {}", describe(&out)))
}

fn describe(o: &IterOutcome) -> String {
    match o {
        IterOutcome::Converged { k, rounds, .. } => format!("converged k = {k} after {rounds}"),
        IterOutcome::BoundOnly { k, rounds } => format!("bound k = {k} after {rounds} rounds"),
    }
}

fn c10() -> Outcome {
    let mut vals = Vec::new();
    for d in 5..=8 {
        let (k, _) = ok(rc_finite(&simplex(d), &ok(debruijn_set(d))?))?;
        check(k >= 2, format!("d = {d}: {k}"))?;
        vals.push(k);
    }
    Ok(format!("d = 5..8 give {vals:?}"))
}

fn c11() -> Outcome {
    let mut vals = Vec::new();
    for i in 1..=4 {
        let x = ok(four_facet_set(i))?;
        let (k, _) = ok(rc_finite(&x, &ok(ball(&x, 2))?))?;
        check(k == 4, format!("set {i}: {k}"))?;
        vals.push(k);
    }
    Ok(format!("all four give {vals:?}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("simplex certificate and hiding graph", c1),
        ("crosspolytope relaxations", c2),
        ("crosspolytope lift", c3),
        ("box formula", c4),
        ("box simplex", c5),
        ("planar pipeline", c6),
        ("hiding bound sandwich on random polygons", c7),
        ("finite and epsilon sandwich", c8),
        ("no finite certificate signal for simplex_4", c9),
        ("De Bruijn lower bound", c10),
        ("four three-dimensional fixtures", c11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
