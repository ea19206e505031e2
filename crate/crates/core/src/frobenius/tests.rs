use super::*;
use crate::symcore::{laurent_at, sqrt_rational};

type RF = RationalFunction<ExactScalar>;
type P = Poly<ExactScalar>;

fn rf(num: &[i64], den: &[i64]) -> RF {
    RF::new(P::from_ints(num), P::from_ints(den)).unwrap()
}

fn es(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_ratio(n, d)
}

/// G = ((z-1)/z)^2, Q = θ/(z(z-1)) dz² — the three-ended no-umbilic data.
fn g112() -> RF {
    rf(&[1, -2, 1], &[0, 0, 1])
}

fn q112(theta: &ExactScalar) -> RF {
    RF::new(P::constant(theta.clone()), P::from_ints(&[0, -1, 1])).unwrap()
}

#[test]
fn euler_equation_series_is_trivial() {
    // z²u'' + z p0 u' + q0 u = 0 with constant coefficients: ζ_j = 0, j ≥ 1.
    let ode = RegularSingularODE::from_series(
        vec![ExactScalar::from_int(3)],
        vec![ExactScalar::from_int(1)],
    );
    let ind = indicial(&ode);
    let (l1, _) = ind.roots.unwrap();
    let zeta = series_solution(&ode, &l1, 6).unwrap();
    assert!(zeta[1..].iter().all(|z| z.is_zero()));
}

#[test]
fn operator_applied_to_series_solution_truncates() {
    // For any λ off resonance, L[X(λ)] = z^λ φ(λ): all higher coefficients 0.
    let ode = RegularSingularODE::from_series(
        vec![es(1, 2), ExactScalar::from_int(1), ExactScalar::from_int(-2)],
        vec![ExactScalar::from_int(-1), ExactScalar::from_int(3), es(5, 7)],
    );
    let lambda = es(1, 3);
    let zeta = series_solution(&ode, &lambda, 8).unwrap();
    let residual = apply_operator(&ode, &lambda, &zeta, 8);
    assert_eq!(residual[0], ode.phi(&lambda));
    assert!(residual[1..].iter().all(|r| r.is_zero()));
}

#[test]
fn indicial_basics() {
    // p0 = q0 = 0: roots 0, 1
    let ode = RegularSingularODE::from_series(vec![ExactScalar::zero()], vec![ExactScalar::zero()]);
    let ind = indicial(&ode);
    assert_eq!(ind.gap_class, GapClass::PositiveInteger);
    assert_eq!(ind.gap_integer, Some(1));
    let (l1, l2) = ind.roots.unwrap();
    assert_eq!(l1, ExactScalar::one());
    assert!(l2.is_zero());
}

#[test]
fn indicial_sum_product_identities() {
    for (p0n, p0d, q0n, q0d) in [(1i64, 2i64, -3i64, 4i64), (0, 1, -1, 1), (5, 1, 7, 3)] {
        let ode = RegularSingularODE::from_series(vec![es(p0n, p0d)], vec![es(q0n, q0d)]);
        let ind = indicial(&ode);
        if let Some((l1, l2)) = ind.roots {
            assert_eq!(l1.add_ref(&l2), ExactScalar::one().sub_ref(&es(p0n, p0d)));
            assert_eq!(l1.mul_ref(&l2), es(q0n, q0d));
        }
    }
}

#[test]
fn o24_indicial_introduces_surd() {
    // E0 at z = 0 for G = ((z-q)/(z-1))², Q = θ(z-1)(z-q)/z²: roots
    // (1 ± sqrt(1-4θq))/2. Take θ = 1, q = -1: radicand 5.
    let q = ExactScalar::from_int(-1);
    let g = RF::new(
        P::linear_from_root(&q).pow(2),
        P::from_ints(&[-1, 1]).pow(2),
    )
    .unwrap();
    let qd = RF::new(
        P::from_ints(&[-1, 1]).mul(&P::linear_from_root(&q)),
        P::from_ints(&[0, 0, 1]),
    )
    .unwrap();
    let ode = from_e0(&g, &qd, &SpherePoint::zero(), 12).unwrap();
    let ind = indicial(&ode);
    assert_eq!(ind.gap_class, GapClass::RealNonInteger);
    let sqrt5 = sqrt_rational(&Rat::new(5.into(), 1.into())).unwrap();
    let half = es(1, 2);
    let expect_l1 = ExactScalar::one().add_ref(&sqrt5).mul_ref(&half);
    assert_eq!(ind.roots.unwrap().0, expect_l1);
}

#[test]
fn go112_log_term_vanishes_exactly_at_theta_minus_two() {
    for (theta, expect_zero) in [(-2i64, true), (-3, false), (1, false)] {
        let theta = ExactScalar::from_int(theta);
        for end in [SpherePoint::zero(), SpherePoint::from_int(1)] {
            let ode = from_e0(&g112(), &q112(&theta), &end, 12).unwrap();
            let ind = indicial(&ode);
            let (l1, l2) = ind.roots.clone().unwrap();
            assert_eq!(l1, es(3, 2));
            assert_eq!(l2, es(-1, 2));
            let (m, c) = log_term(&ode).unwrap();
            assert_eq!(m, 2);
            assert_eq!(c.is_zero(), expect_zero, "theta = {theta}, end = {end}");
        }
    }
}

#[test]
fn o122_expansion_matches_closed_form() {
    // G = z², Q = θ/(z(z-1)²(z-p)²): r(z) = -3/(4z²) + (θ/p²)/z + 2θ(p+1)/p³ + O(z)
    let p = es(3, 1);
    let theta = es(7, 2);
    let g = rf(&[0, 0, 1], &[1]);
    let den = P::from_ints(&[0, 1])
        .mul(&P::from_ints(&[-1, 1]).pow(2))
        .mul(&P::linear_from_root(&p).pow(2));
    let qd = RF::new(P::constant(theta.clone()), den).unwrap();
    let s = crate::symcore::schwarzian(&g).unwrap();
    let r = s.scale_rat(&Rat::new(1.into(), 2.into())).add(&qd);
    let series = laurent_at(&r, &SpherePoint::zero(), 3).unwrap();
    assert_eq!(series.coeff(-2), es(-3, 4));
    let p2 = p.mul_ref(&p);
    assert_eq!(series.coeff(-1), theta.div_ref(&p2).unwrap());
    let expect = ExactScalar::from_int(2)
        .mul_ref(&theta)
        .mul_ref(&p.add_ref(&ExactScalar::one()))
        .div_ref(&p2.mul_ref(&p))
        .unwrap();
    assert_eq!(series.coeff(0), expect);
}

#[test]
fn e1_sharp_for_o23_type_a() {
    // G = z², Q = θ z/(z-1)²: at the end z = 1 the E1# form has
    // p0 = 2, p_j = 0 (j ≥ 1), q0 = q1 = θ, q_j = 0 (j ≥ 2).
    let theta = es(5, 3);
    let g = rf(&[0, 0, 1], &[1]);
    let qd = RF::new(
        P::monomial(theta.clone(), 1),
        P::from_ints(&[-1, 1]).pow(2),
    )
    .unwrap();
    let ode = from_e1_sharp(&g, &qd, &SpherePoint::from_int(1), 10).unwrap();
    assert_eq!(ode.pc(0), ExactScalar::from_int(2));
    for j in 1..8 {
        assert!(ode.pc(j).is_zero(), "p_{j} should vanish");
    }
    assert_eq!(ode.qc(0), theta);
    assert_eq!(ode.qc(1), theta);
    for j in 2..8 {
        assert!(ode.qc(j).is_zero(), "q_{j} should vanish");
    }
}

#[test]
fn e1_sharp_for_o23_type_b_is_the_paper_shape() {
    // G = ((z-1)/z)², Q = θ(z-1)/z²: at z = 0 the mechanically built E1#
    // is z²X'' - zX' + θ(z-1)X = 0, i.e. p ≡ -1, q0 = -θ, q1 = θ.
    let theta = es(4, 7);
    let g = g112();
    let qd = RF::new(
        P::from_ints(&[-1, 1]).scale(&theta),
        P::from_ints(&[0, 0, 1]),
    )
    .unwrap();
    let ode = from_e1_sharp(&g, &qd, &SpherePoint::zero(), 10).unwrap();
    assert_eq!(ode.pc(0), ExactScalar::from_int(-1));
    for j in 1..8 {
        assert!(ode.pc(j).is_zero());
    }
    assert_eq!(ode.qc(0), theta.neg_ref());
    assert_eq!(ode.qc(1), theta);
    // The E2# companion for the same data has a different normal form, but
    // the log-free predicate must agree across all three (checked below on
    // integer-gap instances; here just confirm it builds).
    let ode2 = from_e2_sharp(&g, &qd, &SpherePoint::zero(), 10).unwrap();
    let i1 = indicial(&ode);
    let i2 = indicial(&ode2);
    assert_eq!(i1.radicand, i2.radicand);
}

#[test]
fn e1_sharp_coefficients_for_two_ended_gap_data() {
    // G = ((z-q)/(z-1))², Q = θ(z-1)(z-q)/z² with numeric θ, q: the sharp
    // form at z = 0 is z²X'' + z{2 + 4z/(1-z)}X' + θ(z-1)(z-q)X = 0, i.e.
    // p = (2, 4, 4, ...), q-series = (θq, -θ(1+q), θ, 0, ...).
    let theta = es(-3, 8);
    let q_pt = es(2, 1);
    let g = RF::new(
        P::linear_from_root(&q_pt).pow(2),
        P::from_ints(&[-1, 1]).pow(2),
    )
    .unwrap();
    let qd = RF::new(
        P::from_ints(&[-1, 1])
            .mul(&P::linear_from_root(&q_pt))
            .scale(&theta),
        P::monomial(ExactScalar::one(), 2),
    )
    .unwrap();
    let ode = from_e1_sharp(&g, &qd, &SpherePoint::zero(), 10).unwrap();
    assert_eq!(ode.pc(0), ExactScalar::from_int(2));
    for j in 1..8 {
        assert_eq!(ode.pc(j), ExactScalar::from_int(4), "p_{j}");
    }
    assert_eq!(ode.qc(0), theta.mul_ref(&q_pt));
    assert_eq!(
        ode.qc(1),
        theta.neg_ref().mul_ref(&ExactScalar::one().add_ref(&q_pt))
    );
    assert_eq!(ode.qc(2), theta);
    for j in 3..8 {
        assert!(ode.qc(j).is_zero(), "q_{j}");
    }
}

#[test]
fn closed_forms_match_recursion_for_small_gaps() {
    // p ≡ 0, gap m ∈ {1,2,3}: c = 0 iff q1 = 0; q2 + q1² = 0;
    // q3 + q1 q2 + q1³/4 = 0 respectively.
    let cases: Vec<(u64, Vec<ExactScalar>)> = vec![
        (1, vec![es(0, 1), es(3, 2), es(7, 5), es(-2, 3)]),
        (2, vec![es(1, 2), es(-1, 4), es(5, 3), es(0, 1)]),
        (3, vec![es(2, 1), es(4, 9), es(-7, 2), es(1, 6)]),
    ];
    for (m, tail) in cases {
        let q0 = es(1 - (m * m) as i64, 4);
        let mut q = vec![q0];
        q.extend(tail.clone());
        let ode = RegularSingularODE::from_series(vec![ExactScalar::zero()], q.clone());
        let (gap, c) = log_term(&ode).unwrap();
        assert_eq!(gap, m);
        let q1 = &tail[0];
        let q2 = &tail[1];
        let q3 = &tail[2];
        let closed = match m {
            1 => q1.clone(),
            2 => q2.add_ref(&q1.mul_ref(q1)),
            3 => q3
                .add_ref(&q1.mul_ref(q2))
                .add_ref(&q1.mul_ref(q1).mul_ref(q1).mul_ref(&es(1, 4))),
            _ => unreachable!(),
        };
        assert_eq!(c.is_zero(), closed.is_zero());
        // and the exact scaling relation: c is a nonzero rational multiple of
        // the closed form (checked by proportionality against a second sample)
        if !closed.is_zero() {
            let ratio = c.div_ref(&closed).unwrap();
            assert!(!ratio.is_zero());
        }
    }
}

#[test]
fn resonance_is_detected() {
    // gap 2 with p ≡ 0: λ2 = -1/2, resonance at j = 2.
    let ode = RegularSingularODE::from_series(
        vec![ExactScalar::zero()],
        vec![es(-3, 4), es(1, 1), es(2, 1)],
    );
    let ind = indicial(&ode);
    let (_, l2) = ind.roots.unwrap();
    match series_solution(&ode, &l2, 5) {
        Err(FrobError::Resonance { j: 2 }) => {}
        other => panic!("expected resonance at 2, got {other:?}"),
    }
}

#[test]
fn second_solution_agrees_with_recursion_and_satisfies_ode() {
    // Randomized-ish integer-gap instances with deterministic coefficients.
    let mut seeds = 1i64;
    for m in 1..=4u64 {
        for trial in 0..6 {
            seeds = seeds.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mix = |k: i64| ((seeds >> (8 + k)) % 7) - 3;
            let p0 = es(mix(0), 1);
            // Choose q0 so that the gap is exactly m: (1-p0)² - 4 q0 = m².
            let om = ExactScalar::one().sub_ref(&p0);
            let q0 = om
                .mul_ref(&om)
                .sub_ref(&ExactScalar::from_int((m * m) as i64))
                .mul_ref(&es(1, 4));
            let p = vec![p0, es(mix(1), 2), es(mix(2), 1), es(mix(3), 3)];
            let q = vec![q0, es(mix(4), 1), es(mix(5), 2), es(mix(6), 1)];
            let ode = RegularSingularODE::from_series(p, q);
            let n = m as usize + 8;
            let sol = second_solution(&ode, n).unwrap();
            let (gap, c) = log_term(&ode).unwrap();
            assert_eq!(gap, m);
            assert_eq!(sol.c, c, "m={m} trial={trial}: jet and recursion differ");
            // Residual of L[X2] vanishes through the truncation.
            let res = apply_operator_with_log(&ode, &sol, n - 2);
            assert!(
                res.iter().all(|r| r.is_zero()),
                "m={m} trial={trial}: nonzero residual {res:?}"
            );
            // X1 residual as well.
            let r1 = apply_operator(&ode, &sol.lambda1, &sol.x1, n - 2);
            assert!(r1.iter().all(|r| r.is_zero()));
        }
    }
}

#[test]
fn gap_zero_log_term_never_vanishes() {
    // z²u'' + u/4 = 0 has the double root 1/2.
    let ode = RegularSingularODE::from_series(vec![ExactScalar::zero()], vec![es(1, 4)]);
    let ind = indicial(&ode);
    assert_eq!(ind.gap_class, GapClass::Zero);
    let (m, c) = log_term(&ode).unwrap();
    assert_eq!(m, 0);
    assert!(!c.is_zero());
    let sol = second_solution(&ode, 8).unwrap();
    assert!(!sol.c.is_zero());
    assert_eq!(sol.lambda1, es(1, 2));
    // Residual check for the m = 0 log construction.
    let res = apply_operator_with_log(&ode, &sol, 6);
    assert!(res.iter().all(|r| r.is_zero()));
}

#[test]
fn theta_poly_log_term_for_go112() {
    // Numeric and θ-parametric paths agree, and the polynomial's nonzero
    // root set is exactly {-2}.
    let theta = RF::new(P::from_ints(&[0, 1]), P::one()).unwrap(); // θ as a function of θ
    let g_theta: RationalFunction<ThetaRat> = lift_rf(&g112());
    let q_theta = RationalFunction::<ThetaRat>::new(
        Poly::constant(theta),
        lift_poly(&P::from_ints(&[0, -1, 1])),
    )
    .unwrap();
    let ode = from_e0(&g_theta, &q_theta, &SpherePoint::zero(), 8).unwrap();
    let (m, c) = log_term_theta_poly(&ode, None).unwrap();
    assert_eq!(m, 2);
    // c(θ) is a rational multiple of θ(θ + 2)
    let expected = ThetaPoly::from_ints(&[0, 2, 1]);
    let lead = c.leading().unwrap().clone();
    assert_eq!(c, expected.scale(&lead));
    // Substituting θ0 into the polynomial equals the numeric log-term.
    for t in [-2i64, -1, 3] {
        let t = ExactScalar::from_int(t);
        let ode_num = from_e0(&g112(), &q112(&t), &SpherePoint::zero(), 8).unwrap();
        let (_, c_num) = log_term(&ode_num).unwrap();
        assert_eq!(c.eval(&t), c_num);
    }
}

#[test]
fn equivalence_report_consistency() {
    // go112 at θ = -2: all three forms report integer gap + log-free.
    let theta = ExactScalar::from_int(-2);
    let rep = equivalence_report(&g112(), &q112(&theta), &SpherePoint::zero()).unwrap();
    assert!(rep.consistent);
    assert!(rep.gaps_real_consistent);
    assert!(rep.e0.gap_positive_integer && rep.e0.log_free);
    assert!(rep.e1.gap_positive_integer && rep.e1.log_free);
    assert!(rep.e2.gap_positive_integer && rep.e2.log_free);
    // Generic θ on the O(-2,-3) type-a data: E1# has a log term; E0 gap is
    // sqrt(1 - 4θ), all forms agree it is real for θ = 3/16.
    let g = rf(&[0, 0, 1], &[1]);
    let qd = RF::new(P::monomial(es(3, 16), 1), P::from_ints(&[-1, 1]).pow(2)).unwrap();
    let rep = equivalence_report(&g, &qd, &SpherePoint::from_int(1)).unwrap();
    assert!(rep.consistent);
    assert!(rep.gaps_real_consistent);
    assert!(!rep.e1.log_free);
    assert!(rep.e0.gap_real);
}

#[test]
fn not_singular_and_irregular_are_rejected() {
    // G = z, Q = θ dz²: r = θ is holomorphic at 0 — z = 0 is no end.
    let g = RF::var();
    let qd = rf(&[5], &[1]);
    match from_e0(&g, &qd, &SpherePoint::zero(), 8) {
        Err(FrobError::NotSingular) => {}
        other => panic!("expected NotSingular, got {other:?}"),
    }
    // Q with a 3rd-order pole: irregular for E0.
    let qd3 = rf(&[1], &[0, 0, 0, 1]);
    match from_e0(&g, &qd3, &SpherePoint::zero(), 8) {
        Err(FrobError::Irregular { order: -3 }) => {}
        other => panic!("expected Irregular(-3), got {other:?}"),
    }
}

/// Lift an exact rational function to θ-rational coefficients (constants).
pub(super) fn lift_poly(p: &P) -> Poly<ThetaRat> {
    Poly::new(
        p.coeffs()
            .iter()
            .map(|c| ThetaRat::constant(c.clone()))
            .collect(),
    )
}

pub(super) fn lift_rf(f: &RF) -> RationalFunction<ThetaRat> {
    RationalFunction::new(lift_poly(f.num()), lift_poly(f.den())).unwrap()
}
