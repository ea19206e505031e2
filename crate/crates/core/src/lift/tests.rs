use super::*;
use crate::census;
use crate::symcore::Poly;

type P = Poly<ExactScalar>;

fn rfi(num: &[i64], den: &[i64]) -> RF {
    RF::new(P::from_ints(num), P::from_ints(den)).unwrap()
}

fn o112_system() -> LiftSystem {
    let rec = census::o112().unwrap();
    LiftSystem::from_spec(rec.spec.as_ref().unwrap()).unwrap()
}

#[test]
fn coefficient_matrix_is_trace_free_and_finite_at_umbilics() {
    // Trinoid data with umbilics q1 = 3, q2 = 5: Q̂/G' cancels exactly.
    let rec = census::o222_h3(4).unwrap();
    let system = LiftSystem::from_spec(rec.spec.as_ref().unwrap()).unwrap();
    // q1 = 3/4 for m = 4.
    let m = system.coefficient_matrix(C::new(0.75, 0.0));
    assert!(m.a.is_finite() && m.b.is_finite() && m.c.is_finite());
    assert_eq!(m.d, -m.a);
    for k in 0..50 {
        let z = C::new(0.3 + 0.01 * k as f64, 0.2 - 0.007 * k as f64);
        let m = system.coefficient_matrix(z);
        assert!((m.a + m.d).norm() < 1e-14);
    }
}

#[test]
fn zero_hopf_differential_freezes_the_lift() {
    let g = RF::var();
    let q = RF::zero();
    let system = LiftSystem::new(&g, &q, &[SpherePoint::Infinity]).unwrap();
    let path = [PathSeg::Line(C::new(0.0, 0.0), C::new(1.0, 0.7))];
    let state = integrate_lift(&system, &path, C2x2::identity(), 1e-10, None).unwrap();
    assert!(state.f.sub(&C2x2::identity()).norm() < 1e-12);
}

#[test]
fn contractible_loop_returns_to_start() {
    let system = o112_system();
    let a = C::new(2.0, 1.5);
    let b = C::new(2.6, 1.5);
    let c = C::new(2.6, 2.1);
    let d = C::new(2.0, 2.1);
    let tol = 1e-10;
    let path = [
        PathSeg::Line(a, b),
        PathSeg::Line(b, c),
        PathSeg::Line(c, d),
        PathSeg::Line(d, a),
    ];
    let state = integrate_lift(&system, &path, C2x2::identity(), tol, None).unwrap();
    assert!(
        state.f.sub(&C2x2::identity()).norm() < 10.0 * tol.sqrt().min(1e-6).max(10.0 * tol),
        "loop defect {}",
        state.f.sub(&C2x2::identity()).norm()
    );
    assert!(state.max_det_drift < 1e-9 * (1.0 + state.path_arclength));
}

#[test]
fn tolerance_scaling_improves_accuracy() {
    let system = o112_system();
    let path = [PathSeg::Line(C::new(2.0, 1.0), C::new(3.0, 2.0))];
    let reference = integrate_lift(&system, &path, C2x2::identity(), 1e-13, None)
        .unwrap()
        .f;
    let coarse = integrate_lift(&system, &path, C2x2::identity(), 1e-6, None)
        .unwrap()
        .f;
    let fine = integrate_lift(&system, &path, C2x2::identity(), 1e-9, None)
        .unwrap()
        .f;
    let e_coarse = coarse.sub(&reference).norm();
    let e_fine = fine.sub(&reference).norm();
    assert!(
        e_fine < e_coarse / 8.0 || e_fine < 1e-11,
        "coarse {e_coarse:.3e}, fine {e_fine:.3e}"
    );
}

#[test]
fn clearance_is_enforced() {
    let system = o112_system();
    // Straight through the end at z = 1.
    let path = [PathSeg::Line(C::new(0.5, -1.0), C::new(1.5, 1.0))];
    match integrate_lift(&system, &path, C2x2::identity(), 1e-9, None) {
        Err(LiftError::ClearanceViolated { .. }) => {}
        other => panic!("expected clearance violation, got {other:?}"),
    }
}

#[test]
fn immerse_basics() {
    let origin = immerse(&C2x2::identity());
    assert!(origin.iter().all(|x| x.abs() < 1e-15));
    // diag(e^{t/2}, e^{-t/2}) → (0, 0, tanh(t/2))
    for t in [0.3f64, 1.0, 2.5] {
        let f = C2x2 {
            a: C::new((t / 2.0).exp(), 0.0),
            b: C::new(0.0, 0.0),
            c: C::new(0.0, 0.0),
            d: C::new((-t / 2.0).exp(), 0.0),
        };
        let p = immerse(&f);
        assert!((p[0]).abs() < 1e-15 && (p[1]).abs() < 1e-15);
        assert!((p[2] - (t / 2.0).tanh()).abs() < 1e-12);
    }
    // Right multiplication by SU(2) fixes the immersion point.
    let f = C2x2 {
        a: C::new(1.1, 0.2),
        b: C::new(-0.3, 0.5),
        c: C::new(0.0, 0.4),
        d: C::new(0.9, -0.1),
    };
    // normalize det to 1
    let det = f.det();
    let f = f.scale(1.0 / det.sqrt());
    let (cth, sth) = (0.6f64, 0.8f64);
    let u = C2x2 {
        a: C::new(cth, 0.0),
        b: C::new(sth * 0.28, sth * 0.96),
        c: C::new(-sth * 0.28, sth * 0.96),
        d: C::new(cth, 0.0),
    };
    assert!((u.det() - C::new(1.0, 0.0)).norm() < 1e-12);
    let p1 = immerse(&f);
    let p2 = immerse(&f.mul(&u));
    for k in 0..3 {
        assert!((p1[k] - p2[k]).abs() < 1e-12);
    }
}

#[test]
fn monodromy_of_h3_trinoid_is_identity_like() {
    let rec = census::o222_h3(2).unwrap();
    let system = LiftSystem::from_spec(rec.spec.as_ref().unwrap()).unwrap();
    let base = C::new(0.5, -1.3);
    let report = monodromy(
        &system,
        base,
        &[SpherePoint::zero(), SpherePoint::from_int(1)],
        1e-10,
        1e-6,
    )
    .unwrap();
    assert_eq!(report.class, MonodromyClass::IdentityLike);
    for l in &report.loops {
        assert!(l.identity_deviation < 1e-6, "loop deviation {}", l.identity_deviation);
    }
}

#[test]
fn monodromy_eigenphases_match_indicial_gap() {
    // θ = 3/16 on the (-2,-3) type: gap 1/2 at z = 1, eigenphases ±π/2.
    let rec = census::o23_a(crate::symcore::Rat::new(3.into(), 16.into())).unwrap();
    let system = LiftSystem::from_spec(rec.spec.as_ref().unwrap()).unwrap();
    let base = C::new(0.4, 0.9);
    let report = monodromy(&system, base, &[SpherePoint::from_int(1)], 1e-10, 1e-6).unwrap();
    let (e1, e2) = report.loops[0].eigenvalues;
    let expected = std::f64::consts::FRAC_PI_2;
    let phase_err = |e: C, sign: f64| (e.arg() - sign * expected).abs();
    let err = phase_err(e1, 1.0).min(phase_err(e1, -1.0))
        + phase_err(e2, 1.0).min(phase_err(e2, -1.0));
    assert!(err < 1e-6, "eigenphase error {err:.3e}; eigenvalues {e1}, {e2}");
}

#[test]
fn monodromy_eigenphase_for_larger_gap() {
    // Three-ended H¹ data with p = 4: the indicial gap at z = 1 is
    // 3 + 4/(p-1) = 13/3. Up to the global SL(2)-lift sign the loop
    // eigenvalues are ±e^{±iπ·13/3} = ±e^{±iπ/3}.
    let rec = census::o122_h1(crate::symcore::Rat::new(4.into(), 1.into())).unwrap();
    let system = LiftSystem::from_spec(rec.spec.as_ref().unwrap()).unwrap();
    let report = monodromy(
        &system,
        C::new(0.6, 1.1),
        &[SpherePoint::from_int(1)],
        1e-10,
        1e-6,
    )
    .unwrap();
    let gap = 13.0 / 3.0;
    let target = C::new(0.0, std::f64::consts::PI * gap).exp();
    let (e1, e2) = report.loops[0].eigenvalues;
    for e in [e1, e2] {
        assert!((e.norm() - 1.0).abs() < 1e-6, "non-unimodular eigenvalue {e}");
    }
    let err = [1.0f64, -1.0]
        .iter()
        .map(|sign| {
            let a = (sign * e1 - target).norm().min((sign * e1 - target.conj()).norm());
            let b = (sign * e2 - target).norm().min((sign * e2 - target.conj()).norm());
            a.max(b)
        })
        .fold(f64::INFINITY, f64::min);
    assert!(err < 1e-6, "eigenvalues {e1}, {e2} vs ±e^(±iπ·13/3), err {err:.2e}");
}

#[test]
fn numeric_ta_degrees() {
    let ta1 = numeric_ta(&RF::var(), 1e-6);
    let four_pi = 4.0 * std::f64::consts::PI;
    assert!((ta1 - four_pi).abs() < 1e-3 * four_pi, "TA(z) = {ta1}");
    let ta2 = numeric_ta(&rfi(&[0, 0, 1], &[1]), 1e-6);
    assert!((ta2 - 2.0 * four_pi).abs() < 1e-3 * 2.0 * four_pi, "TA(z²) = {ta2}");
}

#[test]
fn mesh_stays_in_the_ball_and_dual_differs() {
    // Enneper-dual data G = z, Q = dz² on a rectangle.
    let g = RF::var();
    let q = RF::one();
    let system = LiftSystem::new(&g, &q, &[SpherePoint::Infinity]).unwrap();
    let domain = MeshDomain::Rect {
        x0: -1.0,
        x1: 1.0,
        y0: -1.0,
        y1: 1.0,
    };
    let m = mesh(&system, domain, (8, 8), C2x2::identity(), 1e-9, false).unwrap();
    assert_eq!(m.vertices.len(), 81);
    for v in &m.vertices {
        assert!(v.iter().map(|x| x * x).sum::<f64>() < 1.0);
    }
    let md = mesh(&system, domain, (8, 8), C2x2::identity(), 1e-9, true).unwrap();
    let difference: f64 = m
        .vertices
        .iter()
        .zip(md.vertices.iter())
        .map(|(a, b)| {
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
        })
        .sum();
    assert!(difference > 1e-3, "dual mesh should differ");
    let obj = mesh_to_obj(&m);
    assert!(obj.starts_with("v "));
    assert!(obj.contains("\nf 1 2 "));
}

#[test]
fn secondary_gauss_matches_exact_map_up_to_moebius() {
    // The numeric secondary map determined by F0 = I is a fixed Möbius
    // transform of the exactly integrated one; cross-ratios are the
    // Möbius-invariant comparison.
    let rec = census::o222_h3(2).unwrap();
    let spec = rec.spec.as_ref().unwrap();
    let system = LiftSystem::from_spec(spec).unwrap();
    let g_exact = match rec.secondary_g.as_ref().unwrap() {
        census::SecondaryGauss::Rational(g) => g.clone(),
        _ => panic!("expected rational secondary map"),
    };
    let path = [PathSeg::Line(C::new(0.3, 0.8), C::new(0.9, 1.1))];
    let samples = integrate_with_samples(&system, &path, C2x2::identity(), 1e-11, 52).unwrap();
    let numeric = secondary_gauss_numeric(&samples);
    let pairs: Vec<(C, C)> = numeric
        .iter()
        .enumerate()
        .filter_map(|(k, v)| v.map(|g_num| (g_num, crate::flatlab::eval_rf(&g_exact, samples[k].0))))
        .collect();
    assert!(pairs.len() > 40);
    let cr = |z: C, a: C, b: C, c: C| ((z - a) * (b - c)) / ((z - c) * (b - a));
    let (n1, r1) = pairs[0];
    let (n2, r2) = pairs[pairs.len() / 2];
    let (n3, r3) = pairs[pairs.len() - 1];
    let mut worst = 0.0f64;
    for &(gn, gr) in &pairs[1..pairs.len() - 1] {
        let a = cr(gn, n1, n2, n3);
        let b = cr(gr, r1, r2, r3);
        worst = worst.max((a - b).norm() / (1.0 + b.norm()));
    }
    assert!(worst < 1e-4, "max cross-ratio mismatch {worst:.3e}");
}
