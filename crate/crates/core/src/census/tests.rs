use super::*;

#[test]
fn four_pi_cases() {
    let h = build_4pi(FourPiCase::Horosphere).unwrap();
    assert_eq!(h.verdict, Verdict::Verified);

    let e = build_4pi(FourPiCase::EnneperDual { theta: es(1, 1) }).unwrap();
    assert_eq!(e.verdict, Verdict::Verified);

    // catenoid cousin a = 1, μ = 1/2: Q = (3/16) z^{-2}
    let c = build_4pi(FourPiCase::CatenoidCousin {
        a: rat(1, 1),
        mu: rat(1, 2),
    })
    .unwrap();
    let (_, q) = c.spec.as_ref().unwrap().rational_data().unwrap();
    assert_eq!(q.num().coeff(0), es(3, 16));
    assert_eq!(c.verdict, Verdict::Verified);

    // warped catenoid a = b = 1, l = 2: S(z²+1) = -3/(2z²) = 2Q
    let w = build_4pi(FourPiCase::WarpedCatenoid {
        a: ExactScalar::one(),
        b: ExactScalar::one(),
        l: 2,
    })
    .unwrap();
    assert_eq!(w.verdict, Verdict::Verified);

    assert!(build_4pi(FourPiCase::CatenoidCousin {
        a: rat(1, 1),
        mu: rat(1, 1),
    })
    .is_err());
    assert!(build_4pi(FourPiCase::WarpedCatenoid {
        a: ExactScalar::one(),
        b: ExactScalar::zero(),
        l: 2,
    })
    .is_err());
}

#[test]
fn o112_pins_theta_minus_two() {
    let rec = o112().unwrap();
    assert_eq!(rec.verdict, Verdict::Verified);
    assert_eq!(rec.params.get("theta").unwrap(), "-2");
    assert_eq!(rec.family_dim, Some(3));
}

#[test]
fn o14_pins_theta_minus_four() {
    let rec = o14().unwrap();
    assert_eq!(rec.verdict, Verdict::Verified);
    assert_eq!(rec.params.get("theta").unwrap(), "-4");
}

#[test]
fn o13_is_nonexistent() {
    let rec = o13().unwrap();
    assert_eq!(rec.verdict, Verdict::Nonexistent);
}

#[test]
fn o122_h1_accepts_and_rejects() {
    // 4/(p-1): p = 2 → 4 ∈ Z rejected; p = 1/2 → -8 ∈ Z rejected;
    // p = 3 → 2 ∈ Z rejected; p = 4 → 4/3 ∉ Z verified.
    assert!(matches!(o122_h1(rat(2, 1)), Err(CensusError::Constraint(_))));
    assert!(matches!(o122_h1(rat(1, 2)), Err(CensusError::Constraint(_))));
    assert!(matches!(o122_h1(rat(3, 1)), Err(CensusError::Constraint(_))));
    let rec = o122_h1(rat(4, 1)).unwrap();
    assert_eq!(rec.verdict, Verdict::Verified);
    // θ = -2·4·5 = -40
    assert_eq!(rec.params.get("theta").unwrap(), "-40");
}

#[test]
fn o122_h3_r3() {
    let rec = o122_h3(3).unwrap();
    assert_eq!(rec.verdict, Verdict::Verified);
    assert_eq!(rec.params.get("p").unwrap(), "5");
    match rec.secondary_g {
        Some(SecondaryGauss::Rational(ref g)) => {
            // dg = z(z-5)/(z-1)^5
            let expect_dg = rf(P::from_ints(&[0, -5, 1]), P::from_ints(&[-1, 1]).pow(5));
            assert_eq!(g.derivative(), expect_dg);
        }
        _ => panic!("expected exact secondary map"),
    }
}

#[test]
fn o24_h1_checks() {
    // θq = 3/16 → radicand 1/4, gap 1/2 ∉ Z: verified.
    let rec = o24_h1(rat(3, 32), rat(2, 1)).unwrap();
    assert_eq!(rec.verdict, Verdict::Verified);
    // Integer-gap parameters are rejected: θq = -2 gives radicand 9.
    assert!(o24_h1(rat(-1, 1), rat(2, 1)).is_err());
}

#[test]
fn o24_h3_small_m() {
    for m in 2..=4 {
        let analysis = o24_h3(m).unwrap();
        assert_eq!(analysis.c_poly.degree(), Some(m as usize));
        assert_eq!(
            analysis.leading_ratio,
            rat((m as i64) * (49 - (m as i64) * (m as i64)), 12)
        );
        let n = analysis.records.len();
        assert!((1..=m as usize).contains(&n), "m={m}: {n} records");
        // Independent oracle: the explicit recursion gives the same c(θ)
        // after normalizing both to monic.
        let oracle = o24_recursion_oracle(m);
        let lead_a = analysis.c_poly.leading().unwrap().clone();
        let lead_b = oracle.leading().unwrap().clone();
        let scaled_a = analysis.c_poly.scale(&lead_a.inv_ref().unwrap());
        let scaled_b = oracle.scale(&lead_b.inv_ref().unwrap());
        assert_eq!(scaled_a, scaled_b, "m = {m}");
    }
}

#[test]
fn o24_intermediate_series_coefficients_agree() {
    // The generic recursion's a_j at λ2 reproduce the explicit a_j of the
    // specialized recursion, term by term, as θ-polynomials.
    use crate::frobenius::{from_e1_sharp, log_term_recursion};
    for m in [3u32, 4, 6] {
        let s = rat(1 - (m as i64) * (m as i64), 4);
        let s_s = ExactScalar::from_rat(s.clone());
        let q_theta = ThetaRat::new(
            Poly::constant(s_s.clone()),
            Poly::new(vec![ExactScalar::zero(), ExactScalar::one()]),
        )
        .unwrap();
        let g_param: RationalFunction<ThetaRat> = RationalFunction::new(
            Poly::<ThetaRat>::linear_from_root(&q_theta).pow(2),
            lift_poly(&P::from_ints(&[-1, 1]).pow(2)),
        )
        .unwrap();
        let qd_num = Poly::<ThetaRat>::new(vec![ThetaRat::constant(s_s.neg_ref()), theta_var()]);
        let qd_param = RationalFunction::new(
            lift_poly(&P::from_ints(&[-1, 1])).mul(&qd_num),
            lift_poly(&P::monomial(ExactScalar::one(), 2)),
        )
        .unwrap();
        let ode = from_e1_sharp(&g_param, &qd_param, &SpherePoint::zero(), (m as usize) + 4)
            .unwrap();
        // Generic recursion over θ-polynomials with λ2 = -(m+1)/2.
        let mut p_polys = vec![];
        let mut q_polys = vec![];
        for j in 0..=(m as usize) {
            let to_poly = |v: &ThetaRat| -> ThetaPoly {
                assert_eq!(v.den().degree(), Some(0));
                v.num().scale(&v.den().coeff(0).inv_ref().unwrap())
            };
            p_polys.push(to_poly(&ode.pc(j)));
            q_polys.push(to_poly(&ode.qc(j)));
        }
        let poly_ode = crate::frobenius::RegularSingularODE::<ThetaPoly>::from_series(
            p_polys, q_polys,
        );
        let lambda2 = ThetaPoly::constant(es(-((m as i64) + 1), 2));
        let (a_generic, c_generic) =
            log_term_recursion(&poly_ode, &lambda2, m as u64).unwrap();
        let a_explicit = o24_recursion_oracle_full(m);
        assert_eq!(a_generic.len(), m as usize);
        for (j, aj) in a_generic.iter().enumerate() {
            assert_eq!(aj, &a_explicit[j], "m = {m}, a_{j}");
        }
        assert_eq!(c_generic, a_explicit[m as usize], "m = {m}, c = a_m");
    }
}

#[test]
fn o24_lambda_example() {
    // Λ_5 = 5(49-25)/12 = 10
    assert_eq!(o24_h3(5).unwrap().leading_ratio, rat(10, 1));
}

#[test]
fn o23_h1_accept_reject() {
    // √(1 - 3/4) = 1/2 ∉ Z → verified
    let rec = o23_a(rat(3, 16)).unwrap();
    assert_eq!(rec.verdict, Verdict::Verified);
    // √(4 + 5) = 3 ∈ Z → rejected
    assert!(matches!(o23_b(rat(5, 4)), Err(CensusError::Constraint(_))));
    // √(4 - 3) = 1 ∈ Z → rejected; √(4 + 2) = √6 ∉ Z → verified
    assert!(o23_b(rat(-3, 4)).is_err());
    assert!(o23_b(rat(1, 2)).is_ok());
}

#[test]
fn o23_nonexistence_formula() {
    // m = 3: c = -θ³/(3!·2!) = -θ³/12
    let nx = o23_h3_nonexistence(3).unwrap();
    let expect = ThetaPoly::monomial(es(-1, 12), 3);
    assert_eq!(nx.c_mu0, expect);
    assert_eq!(nx.record.verdict, Verdict::Nonexistent);
    // The branched variant is a nonzero θ-monomial of the same degree.
    assert_eq!(nx.c_mu1.degree(), Some(3));
}

#[test]
fn o22_dichotomy() {
    // Integer exponent 4 with b ≠ 0: exact Schwarzian identity.
    let rec = o22(es(4, 1), ExactScalar::one(), ExactScalar::one()).unwrap();
    assert_eq!(rec.verdict, Verdict::Verified);
    assert_eq!(rec.params.get("theta").unwrap(), "-3");
    // μ = √2 with b = 0: double cover of the rotational family.
    let mu = sqrt_rational(&rat(2, 1)).unwrap();
    let rec = o22(mu.clone(), ExactScalar::one(), ExactScalar::zero()).unwrap();
    assert_eq!(rec.verdict, Verdict::Verified);
    // μ = √2 with b ≠ 0 violates the dichotomy.
    assert!(o22(mu, ExactScalar::one(), ExactScalar::one()).is_err());
    // μ = 2 is degenerate (θ = 0).
    assert!(o22(es(2, 1), ExactScalar::one(), ExactScalar::one()).is_err());
}

#[test]
fn one_ended_cases() {
    let rec = o5(ExactScalar::one()).unwrap();
    assert_eq!(rec.verdict, Verdict::Verified);
    let rec = o6(ExactScalar::one()).unwrap();
    assert_eq!(rec.verdict, Verdict::Verified);
}

#[test]
fn o222_h1_gap_arithmetic() {
    // s = 2: gap at z = 1 is -4·13/25 = -52/25, not an integer → verified.
    let rec = o222_h1(rat(2, 1)).unwrap();
    assert_eq!(
        rec.verdict,
        Verdict::Existence {
            data_complete: true
        }
    );
    assert!(o222_h1(rat(1, 1)).is_err());
    assert!(o222_h1(rat(0, 1)).is_err());
}

#[test]
fn o222_h3_exact_over_extension() {
    // m = 4: q1 = 3/4, q2 = 1/4, θ = -20, all rational (√4 = 2).
    let rec = o222_h3(4).unwrap();
    assert_eq!(rec.params.get("q1").unwrap(), "3/4");
    assert_eq!(rec.params.get("q2").unwrap(), "1/4");
    assert_eq!(rec.params.get("theta").unwrap(), "-20");
    // m = 2: computation over Q(√2).
    let rec = o222_h3(2).unwrap();
    assert!(rec.params.get("q1").unwrap().contains("sqrt(2)"));
    assert_eq!(
        rec.verdict,
        Verdict::Existence {
            data_complete: true
        }
    );
}

#[test]
fn i11_candidate_square_lattice() {
    let rec = i11_candidate(C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(1.0, 0.0)).unwrap();
    assert_eq!(
        rec.verdict,
        Verdict::Unknown {
            data_complete: true
        }
    );
    assert!(rec.checks.iter().all(|c| c.passed));
}

#[test]
fn table_runs_green() {
    let rows = census_table(2);
    assert_eq!(rows.len(), 21);
    for row in &rows {
        assert!(
            row.consistent,
            "{} [{}] expected {} got {:?}",
            row.type_tag, row.reducibility, row.status, row.computed_verdict
        );
    }
    let eight_pi: Vec<_> = rows.iter().filter(|r| r.ta_over_4pi == 2).collect();
    assert_eq!(eight_pi.len(), 18);
}
