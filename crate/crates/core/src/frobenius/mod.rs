//! Frobenius analysis of second-order linear ODEs at regular singular
//! points, in the normal form
//!
//! ```text
//!     z^2 u'' + z p(z) u' + q(z) u = 0,      p, q holomorphic at 0.
//! ```
//!
//! Three equation forms are built from surface data (G, Q):
//!
//! * `E0`:  u'' + r u = 0 with r = S(G)/2 + Q, rewritten with p = 0 and
//!   q = z^2 r;
//! * `E1#`: X'' - (log ω#)' X' + Q X = 0 with ω# = -Q/dG (solved by the
//!   second-row entries of the lift);
//! * `E2#`: same with ω# replaced by G²ω# (first-row entries).
//!
//! The log-term coefficient of the second solution is the single obstruction
//! to a pure power fundamental system when the indicial roots differ by an
//! integer; it is computed exactly, and polynomially in θ when the data is
//! θ-parametric.

mod jet;

use crate::symcore::{
    expand_at_zero, localize_density, Coeff, ExactScalar, Poly, Rat, RationalFunction,
    SpherePoint, SymError, ThetaPoly, ThetaRat,
};
use jet::Jet;
use serde_json::{json, Value};
use std::fmt;

/// Generous default series length; enough for every gap the census produces
/// plus the residual-check margin.
pub const DEFAULT_TERMS: usize = 36;

#[derive(Debug, Clone, PartialEq)]
pub enum FrobError {
    Sym(SymError),
    /// ord of the coefficient density is < -2: not a regular singular point.
    Irregular { order: i64 },
    /// The equation has an ordinary point here; nothing to analyze.
    NotSingular,
    /// φ(λ + j) = 0 for some j >= 1: the power ansatz at this exponent
    /// resonates; use the log-term path.
    Resonance { j: usize },
    /// Operation requires the exponent gap to be a non-negative integer.
    GapNotInteger,
    /// θ-parametric computation with θ-dependent indicial data and no
    /// asserted gap.
    ThetaDependentIndicial,
    /// A series coefficient is a genuine rational function of θ, which the
    /// θ-polynomial recursion does not permit.
    ThetaDenominator(String),
    /// Stored series too short for the requested computation.
    NeedMoreTerms { have: usize, need: usize },
}

impl From<SymError> for FrobError {
    fn from(e: SymError) -> Self {
        FrobError::Sym(e)
    }
}

impl fmt::Display for FrobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrobError::Sym(e) => write!(f, "{e}"),
            FrobError::Irregular { order } => {
                write!(f, "irregular singularity (density order {order} < -2)")
            }
            FrobError::NotSingular => write!(f, "ordinary point, not a singularity"),
            FrobError::Resonance { j } => write!(f, "resonance at offset {j}"),
            FrobError::GapNotInteger => write!(f, "exponent gap is not a non-negative integer"),
            FrobError::ThetaDependentIndicial => {
                write!(f, "θ-dependent indicial data requires an asserted gap")
            }
            FrobError::ThetaDenominator(s) => write!(f, "θ-rational coefficient: {s}"),
            FrobError::NeedMoreTerms { have, need } => {
                write!(f, "series has {have} terms, need {need}")
            }
        }
    }
}

impl std::error::Error for FrobError {}

/// Which construction produced the equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationForm {
    E0,
    E1Sharp,
    E2Sharp,
    Raw,
}

impl fmt::Display for EquationForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquationForm::E0 => write!(f, "E0"),
            EquationForm::E1Sharp => write!(f, "E1#"),
            EquationForm::E2Sharp => write!(f, "E2#"),
            EquationForm::Raw => write!(f, "raw"),
        }
    }
}

/// z²u'' + z p(z) u' + q(z) u = 0 in the local coordinate centered at `base`.
#[derive(Debug, Clone)]
pub struct RegularSingularODE<K> {
    pub base: SpherePoint,
    pub form: EquationForm,
    /// Taylor coefficients p_0, p_1, ...
    pub p: Vec<K>,
    /// Taylor coefficients q_0, q_1, ...
    pub q: Vec<K>,
}

impl<K: Coeff> RegularSingularODE<K> {
    pub fn from_series(p: Vec<K>, q: Vec<K>) -> Self {
        RegularSingularODE {
            base: SpherePoint::zero(),
            form: EquationForm::Raw,
            p,
            q,
        }
    }

    pub fn terms(&self) -> usize {
        self.p.len().max(self.q.len())
    }

    pub fn pc(&self, j: usize) -> K {
        self.p.get(j).cloned().unwrap_or_else(K::zero)
    }

    pub fn qc(&self, j: usize) -> K {
        self.q.get(j).cloned().unwrap_or_else(K::zero)
    }

    /// φ(t) = t(t-1) + p0 t + q0
    pub fn phi(&self, t: &K) -> K {
        t.mul(t).sub(t).add(&self.pc(0).mul(t)).add(&self.qc(0))
    }

    /// r_{j,k}(λ) = (λ+k) p_{j-k} + q_{j-k}
    fn rjk(&self, lambda: &K, j: usize, k: usize) -> K {
        lambda
            .add(&K::from_int(k as i64))
            .mul(&self.pc(j - k))
            .add(&self.qc(j - k))
    }
}

/// Classification of the indicial exponent gap, decided exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapClass {
    Zero,
    PositiveInteger,
    RealNonInteger,
    NonReal,
}

impl fmt::Display for GapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapClass::Zero => write!(f, "zero"),
            GapClass::PositiveInteger => write!(f, "positive-integer"),
            GapClass::RealNonInteger => write!(f, "real-non-integer"),
            GapClass::NonReal => write!(f, "non-real"),
        }
    }
}

/// Exact indicial data: roots of φ(t) = t(t-1) + p0 t + q0.
#[derive(Debug, Clone)]
pub struct IndicialData {
    pub p0: ExactScalar,
    pub q0: ExactScalar,
    /// (1 - p0)² - 4 q0, whose square root is the root gap.
    pub radicand: ExactScalar,
    pub gap_class: GapClass,
    /// √radicand when representable in the scalar domain.
    pub gap: Option<ExactScalar>,
    /// The gap as an integer when gap_class is Zero or PositiveInteger.
    pub gap_integer: Option<u64>,
    /// (λ1, λ2) with λ1 = ((1-p0)+m)/2, when representable.
    pub roots: Option<(ExactScalar, ExactScalar)>,
}

impl IndicialData {
    pub fn integer_gap(&self) -> Option<u64> {
        self.gap_integer
    }
}

/// Indicial data of an exact ODE. λ1 + λ2 = 1 - p0 and λ1 λ2 = q0 hold
/// exactly whenever the roots are representable.
pub fn indicial(ode: &RegularSingularODE<ExactScalar>) -> IndicialData {
    let one = ExactScalar::one();
    let p0 = ode.pc(0);
    let q0 = ode.qc(0);
    let om = one.sub_ref(&p0);
    let radicand = om
        .mul_ref(&om)
        .sub_ref(&q0.mul_ref(&ExactScalar::from_int(4)));
    let (gap_class, gap_integer) = classify_radicand(&radicand);
    // Represent the gap exactly: first inside the current domain, then (for
    // rational radicands) by introducing the surd, provided p0 and q0 do not
    // already carry a different one.
    let mut gap = radicand.sqrt();
    if gap.is_none() {
        if let Some(r) = radicand.as_rat() {
            if let Ok(s) = crate::symcore::sqrt_rational(r) {
                let amb = p0.discriminant().or(q0.discriminant());
                let ok = match (amb, s.discriminant()) {
                    (_, None) => true,
                    (None, Some(_)) => true,
                    (Some(a), Some(b)) => a == b,
                };
                if ok {
                    gap = Some(s);
                }
            }
        }
    }
    let roots = gap.as_ref().map(|m| {
        let half = ExactScalar::from_ratio(1, 2);
        let l1 = om.add_ref(m).mul_ref(&half);
        let l2 = om.sub_ref(m).mul_ref(&half);
        (l1, l2)
    });
    IndicialData {
        p0,
        q0,
        radicand,
        gap_class,
        gap,
        gap_integer,
        roots,
    }
}

fn classify_radicand(radicand: &ExactScalar) -> (GapClass, Option<u64>) {
    if radicand.is_zero() {
        return (GapClass::Zero, Some(0));
    }
    if !radicand.is_real() || radicand.sign_real() < 0 {
        return (GapClass::NonReal, None);
    }
    if let Some(r) = radicand.as_rat() {
        if let Some(s) = crate::symcore::rat_sqrt_exact(r) {
            if s.is_integer() {
                use num_traits::ToPrimitive;
                return (GapClass::PositiveInteger, s.to_integer().to_u64());
            }
        }
        return (GapClass::RealNonInteger, None);
    }
    // Positive real with a surd part: its square root is real; an integer
    // square root would force the radicand rational, so it is not one.
    (GapClass::RealNonInteger, None)
}

/// Series coefficients ζ_0..ζ_N of the power solution z^λ Σ ζ_j z^j.
/// Errors with `Resonance` when φ(λ+j) = 0 for some 1 ≤ j ≤ N.
pub fn series_solution<K: Coeff>(
    ode: &RegularSingularODE<K>,
    lambda: &K,
    n: usize,
) -> Result<Vec<K>, FrobError> {
    let mut zeta = vec![K::one()];
    for j in 1..=n {
        let phi = ode.phi(&lambda.add(&K::from_int(j as i64)));
        if phi.is_zero() {
            return Err(FrobError::Resonance { j });
        }
        let mut acc = K::zero();
        for (k, zk) in zeta.iter().enumerate() {
            acc = acc.add(&ode.rjk(lambda, j, k).mul(zk));
        }
        zeta.push(acc.neg().mul(&phi.inv().map_err(FrobError::Sym)?));
    }
    Ok(zeta)
}

/// Log-term coefficient for an integer exponent gap m ≥ 1, by the exact
/// recursion
///
/// ```text
/// a_0 = 1,  a_j = (1/(j(m-j))) Σ_{k<j} ((λ2+k) p_{j-k} + q_{j-k}) a_k,
/// c = -(1/m) Σ_{k<m} ((λ2+k) p_{m-k} + q_{m-k}) a_k .
/// ```
///
/// Generic over the coefficient ring: divisions are only by the rational
/// integers j(m-j) and m, so this runs unchanged for θ-polynomial data.
pub fn log_term_recursion<K: Coeff>(
    ode: &RegularSingularODE<K>,
    lambda2: &K,
    m: u64,
) -> Result<(Vec<K>, K), FrobError> {
    let m = m as usize;
    // Raw equations store their exact (finitely supported) coefficients;
    // builder output is a truncation, which must cover the recursion.
    if ode.form != EquationForm::Raw && ode.terms() < m + 1 {
        return Err(FrobError::NeedMoreTerms {
            have: ode.terms(),
            need: m + 1,
        });
    }
    let mut a = vec![K::one()];
    for j in 1..m {
        let mut acc = K::zero();
        for (k, ak) in a.iter().enumerate() {
            acc = acc.add(&ode.rjk(lambda2, j, k).mul(ak));
        }
        let denom = Rat::new(1.into(), ((j * (m - j)) as i64).into());
        a.push(acc.scale_rat(&denom));
    }
    let mut acc = K::zero();
    for (k, ak) in a.iter().enumerate() {
        acc = acc.add(&ode.rjk(lambda2, m, k).mul(ak));
    }
    let c = acc.neg().scale_rat(&Rat::new(1.into(), (m as i64).into()));
    Ok((a, c))
}

/// Gap and log-term coefficient of an exact ODE whose gap is a non-negative
/// integer. For gap 0 the coefficient is reported as 1: with the
/// normalization ζ_0 = 1, the λ-derivative construction always attaches
/// exactly one copy of X1·log z; only its nonvanishing is contractual.
pub fn log_term(ode: &RegularSingularODE<ExactScalar>) -> Result<(u64, ExactScalar), FrobError> {
    let ind = indicial(ode);
    match ind.gap_class {
        GapClass::Zero => Ok((0, ExactScalar::one())),
        GapClass::PositiveInteger => {
            let m = ind.gap_integer.expect("integer gap");
            let (_, l2) = ind.roots.clone().expect("rational roots for integer gap");
            let (_, c) = log_term_recursion(ode, &l2, m)?;
            Ok((m, c))
        }
        _ => Err(FrobError::GapNotInteger),
    }
}

/// Convert a θ-rational value to a θ-polynomial; errors if a θ-dependent
/// denominator survives reduction.
fn theta_poly(v: &ThetaRat, what: &str) -> Result<ThetaPoly, FrobError> {
    if v.den().degree().unwrap_or(0) > 0 {
        return Err(FrobError::ThetaDenominator(format!(
            "{what} = {v} has a θ-dependent denominator"
        )));
    }
    let d0 = v.den().coeff(0);
    Ok(v.num().scale(&d0.inv_ref().map_err(FrobError::Sym)?))
}

fn theta_free(v: &ThetaRat, what: &str) -> Result<ExactScalar, FrobError> {
    let p = theta_poly(v, what)?;
    if p.degree().unwrap_or(0) > 0 {
        return Err(FrobError::ThetaDenominator(format!("{what} depends on θ")));
    }
    Ok(p.coeff(0))
}

/// Exact log-term coefficient as a polynomial in θ.
///
/// When the indicial data is θ-free the gap is derived from it and must be a
/// positive integer. When q_0 depends on θ the caller must assert the gap
/// `m` (the recursion then computes c(θ), valid exactly on the locus where
/// the gap equals m); p_0 must be θ-free in all cases so λ2 is a number.
pub fn log_term_theta_poly(
    ode: &RegularSingularODE<ThetaRat>,
    asserted_gap: Option<u64>,
) -> Result<(u64, ThetaPoly), FrobError> {
    let p0 = theta_free(&ode.pc(0), "p0")?;
    let m = match asserted_gap {
        Some(0) => return Err(FrobError::GapNotInteger),
        Some(m) => m,
        None => {
            let q0 = theta_free(&ode.qc(0), "q0")?;
            let exact = RegularSingularODE::<ExactScalar> {
                base: ode.base.clone(),
                form: ode.form,
                p: vec![p0.clone()],
                q: vec![q0],
            };
            let ind = indicial(&exact);
            match ind.gap_class {
                GapClass::PositiveInteger => ind.gap_integer.expect("integer"),
                GapClass::Zero => return Err(FrobError::GapNotInteger),
                _ => return Err(FrobError::ThetaDependentIndicial),
            }
        }
    };
    // λ2 = ((1 - p0) - m)/2
    let lambda2 = ExactScalar::one()
        .sub_ref(&p0)
        .sub_ref(&ExactScalar::from_int(m as i64))
        .mul_ref(&ExactScalar::from_ratio(1, 2));
    let mut p = vec![];
    let mut q = vec![];
    for j in 0..=(m as usize) {
        p.push(theta_poly(&ode.pc(j), &format!("p{j}"))?);
        q.push(theta_poly(&ode.qc(j), &format!("q{j}"))?);
    }
    let poly_ode = RegularSingularODE::<ThetaPoly> {
        base: ode.base.clone(),
        form: ode.form,
        p,
        q,
    };
    let l2 = ThetaPoly::constant(lambda2);
    let (_, c) = log_term_recursion(&poly_ode, &l2, m)?;
    Ok((m, c))
}

// θ-polynomials form a ring, not a field; the recursion above only divides
// by rationals, which `scale_rat` covers. `inv` is restricted to constants.
impl Coeff for ThetaPoly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn from_rat(r: &Rat) -> Self {
        Poly::constant(ExactScalar::from_rat(r.clone()))
    }
    fn from_exact(x: &ExactScalar) -> Self {
        Poly::constant(x.clone())
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, b: &Self) -> Self {
        Poly::add(self, b)
    }
    fn sub(&self, b: &Self) -> Self {
        Poly::sub(self, b)
    }
    fn mul(&self, b: &Self) -> Self {
        Poly::mul(self, b)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn inv(&self) -> Result<Self, SymError> {
        if self.degree().unwrap_or(0) > 0 {
            return Err(SymError::Precondition(
                "θ-polynomial division restricted to θ-free divisors".into(),
            ));
        }
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Poly::constant(self.coeff(0).inv_ref()?))
    }
}

/// Second solution data at a regular singular point with integer gap.
#[derive(Debug, Clone)]
pub struct SecondSolution {
    pub lambda1: ExactScalar,
    pub lambda2: ExactScalar,
    pub gap: u64,
    /// Log-term coefficient: X2 = (power series at λ2) + c · X1 · log z.
    pub c: ExactScalar,
    /// Power-series coefficients of the λ2 part, indices 0..N.
    pub x2: Vec<ExactScalar>,
    /// ζ_j(λ1): the first solution's coefficients.
    pub x1: Vec<ExactScalar>,
}

/// X2 = ∂/∂λ|_{λ2} [(λ - λ2) X(λ)] computed with ε-jets. This is an
/// independent route to the log-term coefficient (the residue of ζ_m at λ2)
/// and also yields the power part of the second solution.
pub fn second_solution(
    ode: &RegularSingularODE<ExactScalar>,
    n: usize,
) -> Result<SecondSolution, FrobError> {
    let ind = indicial(ode);
    let m = match ind.gap_class {
        GapClass::Zero | GapClass::PositiveInteger => ind.gap_integer.expect("integer gap"),
        _ => return Err(FrobError::GapNotInteger),
    };
    let (l1, l2) = ind.roots.clone().expect("roots exist for integer gap");
    let center = if m == 0 { &l1 } else { &l2 };
    let mut jets = vec![Jet::one()];
    for j in 1..=n {
        let mut acc = Jet::zero();
        for (k, zk) in jets.iter().enumerate() {
            // r_{j,k}(center + ε) = r0 + p_{j-k} ε
            let r0 = center
                .add_ref(&ExactScalar::from_int(k as i64))
                .mul_ref(&ode.pc(j - k))
                .add_ref(&ode.qc(j - k));
            acc = acc.add(&zk.mul_regular(&r0, &ode.pc(j - k)));
        }
        let t = center.add_ref(&ExactScalar::from_int(j as i64));
        let (phi0, phi1) = phi_jet(ode, &t);
        jets.push(acc.neg().div_phi(&phi0, &phi1)?);
    }
    if m == 0 {
        let x1 = jets.iter().map(|j| j.c0.clone()).collect();
        let x2 = jets
            .iter()
            .map(|j| j.c1.clone().expect("derivatives available off resonance"))
            .collect();
        return Ok(SecondSolution {
            lambda1: l1,
            lambda2: l2,
            gap: 0,
            c: ExactScalar::one(),
            x2,
            x1,
        });
    }
    let c = if (m as usize) < jets.len() {
        jets[m as usize].cm1.clone()
    } else {
        return Err(FrobError::NeedMoreTerms {
            have: n,
            need: m as usize,
        });
    };
    let x2 = jets.iter().map(|j| j.c0.clone()).collect();
    let x1 = series_solution(ode, &l1, n)?;
    Ok(SecondSolution {
        lambda1: l1,
        lambda2: l2,
        gap: m,
        c,
        x2,
        x1,
    })
}

/// φ(t + ε) = φ(t) + φ'(t) ε + ε².
fn phi_jet(ode: &RegularSingularODE<ExactScalar>, t: &ExactScalar) -> (ExactScalar, ExactScalar) {
    let phi0 = ode.phi(t);
    let phi1 = t
        .mul_ref(&ExactScalar::from_int(2))
        .sub_ref(&ExactScalar::one())
        .add_ref(&ode.pc(0));
    (phi0, phi1)
}

/// Formal application of L to X = z^λ Σ s_j z^j; returns the coefficients
/// of z^(λ+j) in L\[X\] for j = 0..n. Residual oracle for the solution
/// builders.
pub fn apply_operator(
    ode: &RegularSingularODE<ExactScalar>,
    lambda: &ExactScalar,
    s: &[ExactScalar],
    n: usize,
) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); n + 1];
    for (j, target) in out.iter_mut().enumerate() {
        let mut acc = if j < s.len() {
            ode.phi(&lambda.add_ref(&ExactScalar::from_int(j as i64)))
                .mul_ref(&s[j])
        } else {
            ExactScalar::zero()
        };
        for (k, sk) in s.iter().enumerate().take(j) {
            let r = lambda
                .add_ref(&ExactScalar::from_int(k as i64))
                .mul_ref(&ode.pc(j - k))
                .add_ref(&ode.qc(j - k));
            acc = acc.add_ref(&r.mul_ref(sk));
        }
        *target = acc;
    }
    out
}

/// L\[X2\] for X2 = z^(λ2) Σ x2_j z^j + c·X1·log z, as coefficients of
/// z^(λ2+j), using L\[X1 log z\] = log z·L\[X1\] + 2 z X1' + (p(z) - 1) X1.
/// The log z·L\[X1\] part vanishes identically to the shared truncation.
pub fn apply_operator_with_log(
    ode: &RegularSingularODE<ExactScalar>,
    sol: &SecondSolution,
    n: usize,
) -> Vec<ExactScalar> {
    let mut out = apply_operator(ode, &sol.lambda2, &sol.x2, n);
    let m = sol.gap as usize;
    for (j, target) in out.iter_mut().enumerate() {
        if j < m {
            continue;
        }
        let i = j - m; // offset on the X1 grating (z^{λ1+i} = z^{λ2+j})
        let mut acc = ExactScalar::zero();
        if i < sol.x1.len() {
            // 2 z X1' contributes 2(λ1 + i) x1_i; (p - 1) X1 contributes
            // p_0 x1_i - x1_i plus the higher p_k x1_{i-k} terms.
            acc = acc.add_ref(
                &sol.lambda1
                    .add_ref(&ExactScalar::from_int(i as i64))
                    .mul_ref(&ExactScalar::from_int(2))
                    .mul_ref(&sol.x1[i]),
            );
            acc = acc.sub_ref(&sol.x1[i]);
        }
        for k in 0..=i {
            if i - k < sol.x1.len() {
                acc = acc.add_ref(&ode.pc(k).mul_ref(&sol.x1[i - k]));
            }
        }
        *target = target.add_ref(&sol.c.mul_ref(&acc));
    }
    out
}

/// Build the E0 form: u'' + r u = 0 with r = S(G)/2 + Q, i.e. p = 0,
/// q = z² r in the local coordinate at `end`.
pub fn from_e0<K: Coeff>(
    g: &RationalFunction<K>,
    q_density: &RationalFunction<K>,
    end: &SpherePoint,
    n_terms: usize,
) -> Result<RegularSingularODE<K>, FrobError> {
    let s = crate::symcore::schwarzian(g)?;
    let r = s.scale_rat(&Rat::new(1.into(), 2.into())).add(q_density);
    let local = localize_density(&r, end, 2);
    if local.is_zero() {
        return Err(FrobError::NotSingular);
    }
    let series = expand_at_zero(&local, n_terms)?;
    if series.min_order >= 0 {
        return Err(FrobError::NotSingular);
    }
    if series.min_order < -2 {
        return Err(FrobError::Irregular {
            order: series.min_order,
        });
    }
    let q: Vec<K> = (0..n_terms as i64).map(|j| series.coeff(j - 2)).collect();
    Ok(RegularSingularODE {
        base: end.clone(),
        form: EquationForm::E0,
        p: vec![K::zero(); n_terms],
        q,
    })
}

fn sharp_form<K: Coeff>(
    g: &RationalFunction<K>,
    q_density: &RationalFunction<K>,
    end: &SpherePoint,
    n_terms: usize,
    form: EquationForm,
) -> Result<RegularSingularODE<K>, FrobError> {
    if q_density.is_zero() {
        return Err(FrobError::Sym(SymError::ZeroFunction));
    }
    // Everything in the local chart; at ∞ both G and Q transform first.
    let g_local = localize_density(g, end, 0);
    let q_local = localize_density(q_density, end, 2);
    let gp = g_local.derivative();
    if gp.is_zero() {
        return Err(FrobError::Sym(SymError::ConstantInput));
    }
    // ω# = -Q/dG; only its log-derivative enters, so the sign drops.
    let omega = q_local.div(&gp)?;
    let logder = match form {
        EquationForm::E1Sharp => omega.log_derivative()?,
        EquationForm::E2Sharp => {
            let two = RationalFunction::constant(K::from_int(2));
            g_local
                .log_derivative()?
                .mul(&two)
                .add(&omega.log_derivative()?)
        }
        _ => unreachable!("sharp_form handles the sharp equations"),
    };
    // p(z) = -z (log ω)'
    let p_fn = logder.mul(&RationalFunction::var()).neg();
    let p: Vec<K> = if p_fn.is_zero() {
        vec![K::zero(); n_terms]
    } else {
        let s = expand_at_zero(&p_fn, n_terms)?;
        if s.min_order < 0 {
            return Err(FrobError::Irregular { order: s.min_order });
        }
        (0..n_terms as i64).map(|j| s.coeff(j)).collect()
    };
    // q(z) = z² Q
    let q_fn = q_local.mul(&RationalFunction::from_poly(Poly::monomial(K::one(), 2)));
    let q_series = expand_at_zero(&q_fn, n_terms)?;
    if q_series.min_order < 0 {
        return Err(FrobError::Irregular {
            order: q_series.min_order - 2,
        });
    }
    let q: Vec<K> = (0..n_terms as i64).map(|j| q_series.coeff(j)).collect();
    Ok(RegularSingularODE {
        base: end.clone(),
        form,
        p,
        q,
    })
}

/// Build the E1# form: p = -z (log ω#)', q = z² Q, with ω# = -Q/dG.
pub fn from_e1_sharp<K: Coeff>(
    g: &RationalFunction<K>,
    q_density: &RationalFunction<K>,
    end: &SpherePoint,
    n_terms: usize,
) -> Result<RegularSingularODE<K>, FrobError> {
    sharp_form(g, q_density, end, n_terms, EquationForm::E1Sharp)
}

/// Build the E2# form: p = -z (log (G² ω#))', q = z² Q.
pub fn from_e2_sharp<K: Coeff>(
    g: &RationalFunction<K>,
    q_density: &RationalFunction<K>,
    end: &SpherePoint,
    n_terms: usize,
) -> Result<RegularSingularODE<K>, FrobError> {
    sharp_form(g, q_density, end, n_terms, EquationForm::E2Sharp)
}

/// Per-form summary used by the three-way equivalence report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormCheck {
    pub gap_positive_integer: bool,
    pub log_free: bool,
    pub gap_real: bool,
}

/// Consistency report across E0, E1#, E2#: the (integer gap ∧ log-free)
/// predicate and the gap-reality predicate must agree across all three
/// forms; a mismatch indicates an implementation bug, not mathematics.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub e0: FormCheck,
    pub e1: FormCheck,
    pub e2: FormCheck,
    pub consistent: bool,
    pub gaps_real_consistent: bool,
}

fn form_check(ode: &RegularSingularODE<ExactScalar>) -> FormCheck {
    let ind = indicial(ode);
    let gap_positive_integer = ind.gap_class == GapClass::PositiveInteger;
    let log_free = if gap_positive_integer {
        matches!(log_term(ode), Ok((_, c)) if c.is_zero())
    } else {
        false
    };
    let gap_real = matches!(
        ind.gap_class,
        GapClass::Zero | GapClass::PositiveInteger | GapClass::RealNonInteger
    );
    FormCheck {
        gap_positive_integer,
        log_free,
        gap_real,
    }
}

pub fn equivalence_report(
    g: &RationalFunction<ExactScalar>,
    q_density: &RationalFunction<ExactScalar>,
    end: &SpherePoint,
) -> Result<EquivalenceReport, FrobError> {
    let ord_q = crate::symcore::differential_order_at(q_density, 2, end)?;
    if ord_q < -2 {
        return Err(FrobError::Irregular { order: ord_q });
    }
    let e0 = form_check(&from_e0(g, q_density, end, DEFAULT_TERMS)?);
    let e1 = form_check(&from_e1_sharp(g, q_density, end, DEFAULT_TERMS)?);
    let e2 = form_check(&from_e2_sharp(g, q_density, end, DEFAULT_TERMS)?);
    let key = |f: &FormCheck| f.gap_positive_integer && f.log_free;
    let consistent = key(&e0) == key(&e1) && key(&e1) == key(&e2);
    let gaps_real_consistent = e0.gap_real == e1.gap_real && e1.gap_real == e2.gap_real;
    Ok(EquivalenceReport {
        e0,
        e1,
        e2,
        consistent,
        gaps_real_consistent,
    })
}

/// CLI-facing JSON report for one end and form.
pub fn report_json(end: &SpherePoint, ode: &RegularSingularODE<ExactScalar>) -> Value {
    let ind = indicial(ode);
    let (l1, l2) = match &ind.roots {
        Some((a, b)) => (json!(a.to_string()), json!(b.to_string())),
        None => (Value::Null, Value::Null),
    };
    let gap = match &ind.gap {
        Some(g) => json!(g.to_string()),
        None => json!(format!("sqrt({})", ind.radicand)),
    };
    let (log_coeff, log_free) = match log_term(ode) {
        Ok((_, c)) => (json!(c.to_string()), json!(c.is_zero())),
        Err(_) => (Value::Null, Value::Null),
    };
    json!({
        "end": end.to_string(),
        "form": ode.form.to_string(),
        "lambda1": l1,
        "lambda2": l2,
        "gap": gap,
        "gap_class": ind.gap_class.to_string(),
        "log_coeff": log_coeff,
        "log_free": log_free,
    })
}

#[cfg(test)]
mod tests;
