//! Randomized invariants over the exact layers. Deterministic seeds keep
//! the suite reproducible.

use cmc_core::census;
use cmc_core::frobenius::{self, equivalence_report, from_e0, log_term, second_solution};
use cmc_core::symcore::{
    divisor, mobius, residue_at, schwarzian, DivisorEntry, ExactScalar, Poly, RationalFunction,
    SpherePoint,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type RF = RationalFunction<ExactScalar>;
type P = Poly<ExactScalar>;

fn small_scalar(rng: &mut StdRng) -> ExactScalar {
    ExactScalar::from_ratio((rng.gen::<i64>() % 9) - 4, 1 + (rng.gen::<u64>() % 4) as i64)
}

fn random_poly(rng: &mut StdRng, max_deg: usize) -> P {
    let deg = 1 + rng.gen::<usize>() % max_deg;
    let mut coeffs: Vec<ExactScalar> = (0..=deg).map(|_| small_scalar(rng)).collect();
    if coeffs.iter().all(|c| c.is_zero()) {
        coeffs[0] = ExactScalar::one();
    }
    P::new(coeffs)
}

fn random_rf(rng: &mut StdRng) -> RF {
    loop {
        let num = random_poly(rng, 3);
        let den = random_poly(rng, 2);
        if num.is_zero() || den.is_zero() {
            continue;
        }
        let f = RF::new(num, den).unwrap();
        if !f.is_constant() {
            return f;
        }
    }
}

/// Unimodular matrix with small rational entries: a, b, c free, d solved.
fn random_unimodular(rng: &mut StdRng) -> [[ExactScalar; 2]; 2] {
    loop {
        let a = small_scalar(rng);
        if a.is_zero() {
            continue;
        }
        let b = small_scalar(rng);
        let c = small_scalar(rng);
        let d = ExactScalar::one()
            .add_ref(&b.mul_ref(&c))
            .div_ref(&a)
            .unwrap();
        return [[a, b], [c, d]];
    }
}

#[test]
fn schwarzian_is_moebius_invariant_randomized() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..12 {
        let g = random_rf(&mut rng);
        let a = random_unimodular(&mut rng);
        let moved = mobius(&a, &g).unwrap();
        if moved.is_constant() {
            continue;
        }
        assert_eq!(schwarzian(&moved).unwrap(), schwarzian(&g).unwrap());
    }
}

#[test]
fn residues_sum_to_zero_randomized() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..40 {
        // Build a 1-form density with scalar-domain poles: random partial
        // fractions plus a polynomial part.
        let mut f = RF::from_poly(random_poly(&mut rng, 2));
        for _ in 0..3 {
            let pole = small_scalar(&mut rng);
            let coeff = small_scalar(&mut rng);
            let order = 1 + rng.gen::<u32>() % 2;
            let den = P::linear_from_root(&pole).pow(order);
            f = f.add(&RF::new(P::constant(coeff), den).unwrap());
        }
        if f.is_zero() {
            continue;
        }
        let mut total = residue_at(&f, &SpherePoint::Infinity).unwrap();
        for entry in divisor(&f).unwrap() {
            if let DivisorEntry::Point(p @ SpherePoint::Finite(_), ord) = entry {
                if ord < 0 {
                    total = total.add_ref(&residue_at(&f, &p).unwrap());
                }
            }
        }
        assert!(total.is_zero(), "residue sum nonzero for {f}");
    }
}

#[test]
fn divisor_orders_sum_to_zero_randomized() {
    let mut rng = StdRng::seed_from_u64(37);
    for _ in 0..40 {
        let f = random_rf(&mut rng);
        let d = divisor(&f).unwrap();
        assert_eq!(d.iter().map(|e| e.total_order()).sum::<i64>(), 0);
    }
}

#[test]
fn second_solution_residual_randomized() {
    // 100 random integer-gap equations: L[X2] = 0 to truncation, and the
    // jet route agrees with the direct recursion.
    let mut rng = StdRng::seed_from_u64(41);
    for trial in 0..100 {
        let m = 1 + rng.gen::<u64>() % 4;
        let p0 = small_scalar(&mut rng);
        let om = ExactScalar::one().sub_ref(&p0);
        let q0 = om
            .mul_ref(&om)
            .sub_ref(&ExactScalar::from_int((m * m) as i64))
            .mul_ref(&ExactScalar::from_ratio(1, 4));
        let p = vec![p0, small_scalar(&mut rng), small_scalar(&mut rng)];
        let q = vec![q0, small_scalar(&mut rng), small_scalar(&mut rng)];
        let ode = frobenius::RegularSingularODE::from_series(p, q);
        let n = m as usize + 8;
        let sol = second_solution(&ode, n).unwrap();
        let (_, c) = log_term(&ode).unwrap();
        assert_eq!(sol.c, c, "trial {trial}");
        let res = frobenius::apply_operator_with_log(&ode, &sol, n - 2);
        assert!(res.iter().all(|r| r.is_zero()), "trial {trial}: {res:?}");
    }
}

#[test]
fn gap_zero_log_coefficient_never_vanishes_randomized() {
    let mut rng = StdRng::seed_from_u64(53);
    for _ in 0..50 {
        let p0 = small_scalar(&mut rng);
        let om = ExactScalar::one().sub_ref(&p0);
        // gap 0: q0 = (1-p0)²/4
        let q0 = om.mul_ref(&om).mul_ref(&ExactScalar::from_ratio(1, 4));
        let ode = frobenius::RegularSingularODE::from_series(
            vec![p0, small_scalar(&mut rng)],
            vec![q0, small_scalar(&mut rng)],
        );
        let (m, c) = log_term(&ode).unwrap();
        assert_eq!(m, 0);
        assert!(!c.is_zero());
    }
}

#[test]
fn equivalence_reports_consistent_on_census_specs() {
    let records = vec![
        census::o112().unwrap(),
        census::o14().unwrap(),
        census::o122_h1(cmc_core::symcore::Rat::new(4.into(), 1.into())).unwrap(),
        census::o122_h3(3).unwrap(),
        census::o23_a(cmc_core::symcore::Rat::new(3.into(), 16.into())).unwrap(),
        census::o24_h1(
            cmc_core::symcore::Rat::new(3.into(), 32.into()),
            cmc_core::symcore::Rat::new(2.into(), 1.into()),
        )
        .unwrap(),
        census::o222_h1(cmc_core::symcore::Rat::new(2.into(), 1.into())).unwrap(),
        census::o222_h3(2).unwrap(),
    ];
    let mut checked = 0;
    for rec in records {
        let spec = rec.spec.as_ref().unwrap();
        let (g, q) = spec.rational_data().unwrap();
        for end in &spec.ends {
            // Only regular singular ends admit the three-form comparison.
            let ord =
                cmc_core::symcore::differential_order_at(q, 2, end).unwrap();
            if ord < -2 {
                continue;
            }
            let rep = equivalence_report(g, q, end).unwrap();
            assert!(rep.consistent, "{} at {end}", rec.type_tag);
            assert!(rep.gaps_real_consistent, "{} at {end}", rec.type_tag);
            checked += 1;
        }
    }
    assert!(checked >= 12, "only {checked} ends checked");
}

#[test]
fn theta_and_numeric_paths_agree_randomized() {
    // Substituting rational θ0 into the θ-polynomial log-term equals the
    // log-term of the substituted equation, exactly.
    let mut rng = StdRng::seed_from_u64(61);
    let g = RF::new(P::from_ints(&[1, -2, 1]), P::from_ints(&[0, 0, 1])).unwrap();
    let den = P::from_ints(&[0, -1, 1]);
    let lift_p = |p: &P| -> Poly<RF> {
        Poly::new(p.coeffs().iter().map(|c| RF::constant(c.clone())).collect())
    };
    // θ enters as a coefficient: the coefficient domain is the field of
    // rational functions in θ.
    let g_t = RationalFunction::new(lift_p(g.num()), lift_p(g.den())).unwrap();
    let q_t = RationalFunction::new(Poly::constant(RF::var()), lift_p(&den)).unwrap();
    let ode_t = from_e0(&g_t, &q_t, &SpherePoint::zero(), 8).unwrap();
    let (_, c_poly) = frobenius::log_term_theta_poly(&ode_t, None).unwrap();
    for _ in 0..20 {
        let theta0 = small_scalar(&mut rng);
        if theta0.is_zero() {
            continue;
        }
        let q = RF::new(P::constant(theta0.clone()), den.clone()).unwrap();
        let ode = from_e0(&g, &q, &SpherePoint::zero(), 8).unwrap();
        let (_, c_num) = log_term(&ode).unwrap();
        assert_eq!(c_poly.eval(&theta0), c_num, "θ = {theta0}");
    }
}
