use super::*;
use crate::symcore::{mobius, sqrt_rational, Rat};

type P = Poly<ExactScalar>;

fn rf(num: &[i64], den: &[i64]) -> RF {
    RF::new(P::from_ints(num), P::from_ints(den)).unwrap()
}

fn es(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_ratio(n, d)
}

/// Three double ends at 0, 1, ∞ with two simple umbilics q1, q2.
fn trinoid_spec(q1: ExactScalar, q2: ExactScalar, theta: ExactScalar) -> SurfaceSpec {
    let g = RF::new(
        P::linear_from_root(&q1).pow(2),
        P::linear_from_root(&q2).pow(2),
    )
    .unwrap();
    let q = RF::new(
        P::linear_from_root(&q1)
            .mul(&P::linear_from_root(&q2))
            .scale(&theta),
        P::from_ints(&[0, 1]).pow(2).mul(&P::from_ints(&[-1, 1]).pow(2)),
    )
    .unwrap();
    SurfaceSpec::rational(
        "O(-2,-2,-2)",
        vec![
            SpherePoint::zero(),
            SpherePoint::from_int(1),
            SpherePoint::Infinity,
        ],
        g,
        q,
    )
    .unwrap()
}

#[test]
fn trinoid_analysis() {
    let spec = trinoid_spec(es(3, 1), es(5, 1), es(1, 1));
    let (ends, umb) = analyze(&spec).unwrap();
    assert_eq!(ends.len(), 3);
    for e in &ends {
        assert_eq!(e.d, -2);
        assert_eq!(e.mu_sharp, 0);
        assert_eq!(e.slack, 2);
        assert!(e.regular_singular);
    }
    assert_eq!(umb.len(), 2);
    assert!(umb.iter().all(|u| u.xi() == 1));
    let curv = curvature_report(&spec).unwrap();
    assert_eq!(curv.ta_over_4pi, 2);
    assert_eq!(curv.osserman_slack, 0);
}

#[test]
fn single_end_o5() {
    // G = z², Q = θ z dz²: end at ∞ with d = -5, μ# = 1; umbilic at 0.
    let spec = SurfaceSpec::rational(
        "O(-5)",
        vec![SpherePoint::Infinity],
        rf(&[0, 0, 1], &[1]),
        rf(&[0, 7], &[1]),
    )
    .unwrap();
    let (ends, umb) = analyze(&spec).unwrap();
    assert_eq!(ends[0].d, -5);
    assert_eq!(ends[0].mu_sharp, 1);
    assert!(!ends[0].regular_singular);
    assert_eq!(umb.len(), 1);
    assert_eq!(umb[0].xi(), 1);
    let curv = curvature_report(&spec).unwrap();
    assert_eq!(curv.ta_over_4pi, 2);
    assert_eq!(curv.osserman_slack, 4);
}

#[test]
fn unmatched_branch_point_is_rejected() {
    // G = z², Q = dz²: branch at 0 but Q has no zero there.
    let spec = SurfaceSpec::rational(
        "bad",
        vec![SpherePoint::Infinity],
        rf(&[0, 0, 1], &[1]),
        rf(&[1], &[1]),
    )
    .unwrap();
    match analyze(&spec) {
        Err(ModuliError::Compatibility(_)) => {}
        other => panic!("expected compatibility error, got {other:?}"),
    }
}

#[test]
fn incomplete_end_is_rejected() {
    // G = z (no branching), Q = θ/z² dz²: at the end 0 slack = 0 - (-2) = 2 ok;
    // but at a d = -1 end with μ# = 0 the slack is 1: force it.
    let spec = SurfaceSpec::rational(
        "bad",
        vec![SpherePoint::zero()],
        rf(&[0, 1], &[1]),
        rf(&[1], &[0, 1]),
    )
    .unwrap();
    match analyze(&spec) {
        Err(ModuliError::Incomplete { slack: 1, .. }) => {}
        other => panic!("expected incompleteness, got {other:?}"),
    }
}

#[test]
fn genus_one_integer_reports() {
    // Single end, d = -4, μ# = 0, four simple umbilics: TA = 8π.
    let spec = SurfaceSpec::genus_one("I(-4)", vec![(-4, 0)], vec![1, 1, 1, 1], 2);
    let curv = curvature_report(&spec).unwrap();
    assert_eq!(curv.ta_over_4pi, 2);
    assert_eq!(curv.osserman_slack, 2);
    // Enneper-dual-like data at genus 0 for comparison: d=-4 end, μ#=0.
    let spec0 = SurfaceSpec::rational(
        "O(-4)",
        vec![SpherePoint::Infinity],
        rf(&[0, 1], &[1]),
        rf(&[3], &[1]),
    )
    .unwrap();
    let c0 = curvature_report(&spec0).unwrap();
    assert_eq!(c0.ta_over_4pi, 1);
    assert_eq!(c0.osserman_slack, 2);
}

#[test]
fn umbilics_as_irreducible_factors() {
    // Umbilics at the two roots of z² - 2 (not rational): G branched there.
    // Build G with branch points at ±√2 by integrating G' = (z²-2):
    // G = z³/3 - 2z; its branch points are the roots of z² - 2, each order 1.
    let g = rf(&[0, -6, 0, 1], &[3]);
    // Q = (z²-2)/z⁴ dz², ends 0 and ∞.
    let q = rf(&[-2, 0, 1], &[0, 0, 0, 0, 1]);
    let spec = SurfaceSpec::rational(
        "irr-umbilics",
        vec![SpherePoint::zero(), SpherePoint::Infinity],
        g,
        q,
    )
    .unwrap();
    let (_, umb) = analyze(&spec).unwrap();
    assert_eq!(umb.len(), 1);
    match &umb[0] {
        UmbilicReport::Factor { factor, xi } => {
            assert_eq!(*xi, 1);
            assert_eq!(factor.degree(), Some(2));
        }
        other => panic!("expected factor umbilic, got {other:?}"),
    }
    let curv = curvature_report(&spec).unwrap();
    assert_eq!(curv.gauss_bonnet_residual, 0);
}

#[test]
fn moebius_invariance_of_reports() {
    let spec = trinoid_spec(es(3, 1), es(5, 1), es(1, 1));
    let (g, q) = spec.rational_data().unwrap();
    let a = [
        [es(1, 1), es(3, 1)],
        [es(1, 1), es(4, 1)],
    ];
    let g2 = mobius(&a, g).unwrap();
    let spec2 = SurfaceSpec::rational("moved", spec.ends.clone(), g2, q.clone()).unwrap();
    let (e1, u1) = analyze(&spec).unwrap();
    let (e2, u2) = analyze(&spec2).unwrap();
    let key = |es: &[EndReport]| {
        let mut v: Vec<(i64, i64)> = es.iter().map(|e| (e.d, e.mu_sharp)).collect();
        v.sort();
        v
    };
    assert_eq!(key(&e1), key(&e2));
    let xs = |us: &[UmbilicReport]| {
        let mut v: Vec<i64> = us.iter().map(|u| u.xi()).collect();
        v.sort();
        v
    };
    assert_eq!(xs(&u1), xs(&u2));
    assert_eq!(
        curvature_report(&spec).unwrap(),
        curvature_report(&spec2).unwrap()
    );
}

#[test]
fn chart_swap_invariance() {
    // z ↦ 1/z moves ends {0, 1, ∞} to {∞, 1, 0} and transforms (G, Q).
    let spec = trinoid_spec(es(3, 1), es(5, 1), es(1, 1));
    let (g, q) = spec.rational_data().unwrap();
    let g2 = g.subst_inv();
    // 2-differential: Q(1/w) w^{-4}
    let q2 = q
        .subst_inv()
        .div(&RF::from_poly(P::monomial(ExactScalar::one(), 4)))
        .unwrap();
    let spec2 = SurfaceSpec::rational(
        "swapped",
        vec![
            SpherePoint::Infinity,
            SpherePoint::from_int(1),
            SpherePoint::zero(),
        ],
        g2,
        q2,
    )
    .unwrap();
    let c1 = curvature_report(&spec).unwrap();
    let c2 = curvature_report(&spec2).unwrap();
    assert_eq!(c1, c2);
}

#[test]
fn enumeration_4pi() {
    let out = enumerate_types(1).unwrap();
    let labels: Vec<&str> = out.admitted.iter().map(|t| t.label.as_str()).collect();
    assert_eq!(labels, vec!["O(-4)", "O(-2,-2)"]);
    assert!(out.excluded.is_empty());
    let zero = enumerate_types(0).unwrap();
    assert_eq!(zero.admitted[0].label, "O(0)");
}

#[test]
fn enumeration_8pi_matches_census_table() {
    let out = enumerate_types(2).unwrap();
    let mut labels: Vec<String> = out
        .admitted
        .iter()
        .map(|t| format!("{}|mu={:?}", t.label, t.mu_pattern()))
        .collect();
    labels.sort();
    let expected = vec![
        "I(-1,-1)|mu=[1, 1]",
        "I(-2,-2)|mu=[0, 0]",
        "I(-3)|mu=[1]",
        "I(-4)|mu=[0]",
        "O(-1,-1,-2)|mu=[1, 1, 0]",
        "O(-1,-2,-2)|mu=[1, 0, 0]",
        "O(-1,-4)|mu=[1, 0]",
        "O(-2,-2)|mu=[1, 1]",
        "O(-2,-2,-2)|mu=[0, 0, 0]",
        "O(-2,-3)|mu=[0, 1]",
        "O(-2,-3)|mu=[1, 0]",
        "O(-2,-4)|mu=[0, 0]",
        "O(-3,-3)|mu=[0, 0]",
        "O(-5)|mu=[1]",
        "O(-6)|mu=[0]",
    ];
    assert_eq!(labels, expected);
    // Exclusions present with their labels.
    let ex: Vec<&str> = out.excluded.iter().map(|e| e.description.as_str()).collect();
    assert!(ex.iter().any(|d| d.contains("γ=2")));
    assert!(ex.iter().any(|d| d.contains("O(-1,-3)")));
    assert!(ex.iter().any(|d| d.contains("mixed regular end types")));
    // Every admitted tuple re-checks against the constraints.
    for t in &out.admitted {
        let gamma = t.genus as i64;
        let sum_slack: i64 = t.ends.iter().map(|&(d, mu)| mu - d).sum();
        assert_eq!(2 * 2, 2 * gamma - 2 + sum_slack);
        assert!(t.ends.iter().all(|&(d, mu)| mu - d >= 2 && mu <= 1));
        let sum_d: i64 = t.ends.iter().map(|&(d, _)| d).sum();
        assert_eq!(t.xi_total, -2 * (2 - 2 * gamma) - sum_d);
    }
}

#[test]
fn spec_json_round_trip() {
    let mut spec = trinoid_spec(
        sqrt_rational(&Rat::new(2.into(), 1.into())).unwrap(),
        es(5, 1),
        es(1, 1),
    );
    spec = spec.with_param("theta", es(1, 1));
    let v = spec_to_json(&spec);
    let back = spec_from_json(&v).unwrap();
    let (g1, q1) = spec.rational_data().unwrap();
    let (g2, q2) = back.rational_data().unwrap();
    assert_eq!(g1, g2);
    assert_eq!(q1, q2);
    assert_eq!(spec.ends, back.ends);
    assert_eq!(spec.params, back.params);
}
