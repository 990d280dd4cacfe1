use proptest::prelude::*;
use relaxcomp::bounds::{hiding_graph, max_clique};
use relaxcomp::halfspace::HPolyhedron;
use relaxcomp::lattice::{
    ball, box_set, cube, dim_of, is_observer, observers_in_region, parity_candidates,
};
use relaxcomp::rat;
use relaxcomp::rc2d::{hull_hrep_2d, observers_2d, polygon_points, rc_2d};
use relaxcomp::relaxations::{
    box_rc, box_simplex, cross_lift, cross_relaxation, iterative_rc, verify_relaxation,
    IterOutcome, Verification,
};
use relaxcomp::separation::rc_finite;
use relaxcomp::{lattice_points, LatticeSet};

fn polygon() -> impl Strategy<Value = LatticeSet> {
    prop::collection::vec((0i64..6, 0i64..6), 3..7).prop_filter_map("flat", |v| {
        let s = LatticeSet::from_points_dedup(2, v.iter().map(|&(a, b)| vec![a, b]).collect())
            .ok()?;
        (dim_of(&s) == 2).then(|| polygon_points(&s).unwrap())
    })
}

/// Products of elementary integer matrices, so the determinant is ±1.
fn unimodular() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0usize..3, -2i64..3), 1..5).prop_map(|ops| {
        let mut u = vec![vec![1, 0], vec![0, 1]];
        for (op, c) in ops {
            match op {
                0 => {
                    let r = [u[0][0] + c * u[1][0], u[0][1] + c * u[1][1]];
                    u[0] = r.to_vec();
                }
                1 => {
                    let r = [u[1][0] + c * u[0][0], u[1][1] + c * u[0][1]];
                    u[1] = r.to_vec();
                }
                _ => u.swap(0, 1),
            }
        }
        u
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn monotone_in_the_outer_set(x in polygon(), t in 1i64..3) {
        let small = ball(&x, t).unwrap().union(&x).unwrap();
        let big = ball(&x, t + 1).unwrap().union(&x).unwrap();
        prop_assume!(!small.difference(&x).unwrap().is_empty());
        let (a, _) = rc_finite(&x, &small).unwrap();
        let (b, _) = rc_finite(&x, &big).unwrap();
        prop_assert!(a <= b);
    }

    #[test]
    fn unimodular_invariance(x in polygon(), u in unimodular(), sx in -3i64..4, sy in -3i64..4) {
        let y = cube(2, 7).unwrap().difference(&x).unwrap();
        let (k, _) = rc_finite(&x, &y).unwrap();
        let t = [sx, sy];
        let (k2, _) = rc_finite(&x.transform(&u, &t).unwrap(), &y.transform(&u, &t).unwrap()).unwrap();
        prop_assert_eq!(k, k2);
        prop_assert_eq!(rc_2d(&x).unwrap().0, rc_2d(&x.transform(&u, &t).unwrap()).unwrap().0);
    }

    #[test]
    fn certificates_hold_by_substitution(x in polygon()) {
        let y = ball(&x, 2).unwrap().union(&cube(2, 7).unwrap()).unwrap();
        let (k, cert) = rc_finite(&x, &y).unwrap();
        prop_assert_eq!(cert.k(), k);
        for w in &cert.inequalities {
            for p in x.iter() {
                prop_assert!(w.contains_int(p));
            }
        }
        for (p, i) in &cert.assignment {
            prop_assert!(!x.contains(p));
            let w = &cert.inequalities[*i];
            prop_assert!(w.slack_int(p) <= -rat::one());
        }
        prop_assert_eq!(cert.assignment.len(), y.difference(&x).unwrap().len());
    }

    #[test]
    fn planar_pipeline_matches_finite_search(x in polygon()) {
        let obs = observers_2d(&x).unwrap().to_set();
        let (k, cert) = rc_2d(&x).unwrap();
        cert.validate(&x.rat_points()).unwrap();
        prop_assert_eq!(rc_finite(&x, &obs).unwrap().0, k);
        let (h, _) = max_clique(&hiding_graph(&x, &obs).unwrap());
        prop_assert!(h <= k && k <= h + 1);
        // the certificate cuts every observer, so it is a relaxation
        let q = HPolyhedron::new(2, cert.inequalities.clone()).unwrap();
        prop_assert_eq!(verify_relaxation(&q, &x).unwrap(), Verification::Verified);
    }

    #[test]
    fn observers_agree_with_brute_force(x in polygon()) {
        let obs = observers_2d(&x).unwrap().to_set();
        let bb = obs.union(&x).unwrap().bounding_box().unwrap();
        let region = box_set(&[(bb[0].0 - 3, bb[0].1 + 3), (bb[1].0 - 3, bb[1].1 + 3)]).unwrap();
        prop_assert_eq!(observers_in_region(&x, &region).unwrap(), obs.clone());
        for p in obs.iter() {
            prop_assert!(is_observer(&x, p).unwrap());
        }
        if let Some(c) = parity_candidates(&x) {
            prop_assert_eq!(observers_in_region(&x, &c).unwrap(), obs);
        }
    }

    #[test]
    fn hull_is_a_relaxation(x in polygon()) {
        let h = hull_hrep_2d(&x).unwrap();
        let normals: Vec<[i64; 2]> = h.rows.iter().map(|r| [r.0, r.1]).collect();
        let rows: Vec<(&[i64], i64)> = normals.iter().zip(&h.rows).map(|(a, r)| (&a[..], r.2)).collect();
        let q = HPolyhedron::from_int_rows(&rows).unwrap();
        prop_assert_eq!(lattice_points(&q).unwrap(), x.clone());
        prop_assert_eq!(verify_relaxation(&q, &x).unwrap(), Verification::Verified);
    }

    #[test]
    fn iteration_converges_in_the_plane(x in polygon()) {
        match iterative_rc(&x, &ball(&x, 1).unwrap(), 8, 12).unwrap() {
            IterOutcome::Converged { k, q, .. } => {
                prop_assert_eq!(q.len(), k);
                prop_assert_eq!(lattice_points(&q).unwrap(), x.clone());
                prop_assert_eq!(k, rc_2d(&x).unwrap().0);
            }
            IterOutcome::BoundOnly { k, .. } => prop_assert!(k <= rc_2d(&x).unwrap().0),
        }
    }
}

#[test]
fn box_simplices_relax_boxes() {
    for l in 0..=2usize {
        for b in 1..=5i64 {
            let mut segs = vec![(0, 1); l];
            segs.push((0, b));
            let x = box_set(&segs).unwrap();
            let q = box_simplex(l, b).unwrap();
            assert_eq!(q.len(), l + 2);
            assert_eq!(verify_relaxation(&q, &x).unwrap(), Verification::Verified, "l={l} b={b}");
        }
    }
}

#[test]
fn planar_boxes_follow_the_formula() {
    for a in 1..=4i64 {
        for b in 1..=4i64 {
            let x = box_set(&[(0, a), (0, b)]).unwrap();
            let long = usize::from(a >= 2) + usize::from(b >= 2);
            let want = if long == 0 { 3 } else { box_rc(long, 2 - long).unwrap() };
            assert_eq!(rc_2d(&x).unwrap().0, want, "{a}x{b}");
        }
    }
}

#[test]
fn lifting_adds_two_rows() {
    let q3 = cross_relaxation(3).unwrap();
    let scaled = HPolyhedron::new(
        3,
        q3.rows().iter().map(|r| r.scaled(&rat::int(5))).collect(),
    )
    .unwrap();
    for q in [q3, scaled] {
        let lifted = cross_lift(&q).unwrap();
        assert_eq!(lifted.len(), q.len() + 2);
        assert_eq!(
            verify_relaxation(&lifted, &relaxcomp::lattice::cross(4)).unwrap(),
            Verification::Verified
        );
    }
    let q4 = cross_relaxation(4).unwrap();
    let lifted = cross_lift(&q4).unwrap();
    assert_eq!(lifted.len(), 7);
    assert_eq!(
        verify_relaxation(&lifted, &relaxcomp::lattice::cross(5)).unwrap(),
        Verification::Verified
    );
}
