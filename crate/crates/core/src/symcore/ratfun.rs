//! Rational functions in one variable, points on the Riemann sphere, and the
//! operations built on them: orders, residues, divisors, branch orders,
//! Möbius actions and the Schwarzian derivative.

use super::{Coeff, ExactScalar, Poly, Rat, SymError};
use std::fmt;

/// A point of the Riemann sphere: finite (exact scalar) or ∞.
#[derive(Clone, PartialEq, Debug)]
pub enum SpherePoint {
    Finite(ExactScalar),
    Infinity,
}

impl SpherePoint {
    pub fn zero() -> Self {
        SpherePoint::Finite(ExactScalar::zero())
    }

    pub fn from_int(n: i64) -> Self {
        SpherePoint::Finite(ExactScalar::from_int(n))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(x) => write!(f, "{x}"),
            SpherePoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Reduced rational function: gcd(num, den) = 1 and the denominator is
/// monic. The zero function is 0/1.
#[derive(Clone, PartialEq)]
pub struct RationalFunction<K> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Coeff> RationalFunction<K> {
    pub fn new(num: Poly<K>, den: Poly<K>) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides");
        let mut den = den.div_exact(&g).expect("gcd divides");
        let lead = den.leading().expect("nonzero").inv()?;
        num = num.scale(&lead);
        den = den.scale(&lead);
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: K) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// max(deg num, deg den); the degree as a map of the sphere.
    pub fn map_degree(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn div(&self, other: &Self) -> Result<Self, SymError> {
        if other.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<Self, SymError> {
        Self::one().div(self)
    }

    pub fn scale(&self, k: &K) -> Self {
        Self::new(self.num.scale(k), self.den.clone()).expect("nonzero denominator")
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&K::from_rat(r))
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Formal d/dz.
    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        Self::new(num, den).expect("nonzero denominator")
    }

    /// f'/f, reduced. Exact for any nonzero f; common factors of num and den
    /// contribute their multiplicities.
    pub fn log_derivative(&self) -> Result<Self, SymError> {
        if self.is_zero() {
            return Err(SymError::ZeroFunction);
        }
        let n = RationalFunction::new(self.num.derivative(), self.num.clone())?;
        let d = RationalFunction::new(self.den.derivative(), self.den.clone())?;
        Ok(n.sub(&d))
    }

    /// f(z + c): recenter so that the point of interest sits at 0.
    pub fn shift(&self, c: &K) -> Self {
        RationalFunction {
            num: self.num.shift(c),
            den: self.den.shift(c),
        }
    }

    /// f(1/w) as a rational function of w.
    pub fn subst_inv(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        // f(1/w) = w^(dd-dn) rev(num)/rev(den)
        if dd > dn {
            num = num.mul(&Poly::monomial(K::one(), dd - dn));
        } else if dn > dd {
            den = den.mul(&Poly::monomial(K::one(), dn - dd));
        }
        Self::new(num, den).expect("nonzero denominator")
    }

    /// Evaluate; `None` at a pole.
    pub fn eval(&self, x: &K) -> Option<K> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x).mul(&d.inv().expect("nonzero")))
    }

    /// Value on the sphere at a sphere point (for K = ExactScalar contexts
    /// the caller lifts the point first).
    pub fn eval_sphere(&self, p: &K) -> SphereValue<K> {
        let d = self.den.eval(p);
        let n = self.num.eval(p);
        if d.is_zero() {
            if n.is_zero() {
                unreachable!("reduced rational function with common root");
            }
            SphereValue::Infinity
        } else {
            SphereValue::Finite(n.mul(&d.inv().expect("nonzero")))
        }
    }

    /// Order at a finite point given as a coefficient value.
    pub fn order_at_value(&self, p: &K) -> Result<i64, SymError> {
        if self.is_zero() {
            return Err(SymError::ZeroFunction);
        }
        let zn = self.num.root_multiplicity(p) as i64;
        let zd = self.den.root_multiplicity(p) as i64;
        Ok(zn - zd)
    }

    /// Order at ∞ (order of f(1/w) at w = 0).
    pub fn order_at_infinity(&self) -> Result<i64, SymError> {
        if self.is_zero() {
            return Err(SymError::ZeroFunction);
        }
        Ok(self.den.degree().unwrap_or(0) as i64 - self.num.degree().unwrap_or(0) as i64)
    }
}

/// Value of a rational function at a sphere point.
#[derive(Clone, PartialEq, Debug)]
pub enum SphereValue<K> {
    Finite(K),
    Infinity,
}

impl<K: Coeff> fmt::Display for RationalFunction<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl<K: Coeff> fmt::Debug for RationalFunction<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Rational functions over a field form a field, so they can serve as the
// coefficient domain of further polynomial layers (θ-rational coefficients).
impl<K: Coeff> Coeff for RationalFunction<K> {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn from_rat(r: &Rat) -> Self {
        RationalFunction::constant(K::from_rat(r))
    }
    fn from_exact(x: &ExactScalar) -> Self {
        RationalFunction::constant(K::from_exact(x))
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, b: &Self) -> Self {
        RationalFunction::add(self, b)
    }
    fn sub(&self, b: &Self) -> Self {
        RationalFunction::sub(self, b)
    }
    fn mul(&self, b: &Self) -> Self {
        RationalFunction::mul(self, b)
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
    fn inv(&self) -> Result<Self, SymError> {
        RationalFunction::inv(self)
    }
}

/// Exact rational function over the exact scalars: the workhorse type.
pub type ExactRat = RationalFunction<ExactScalar>;

fn lift_point<K: Coeff>(p: &SpherePoint) -> Option<K> {
    match p {
        SpherePoint::Finite(x) => Some(K::from_exact(x)),
        SpherePoint::Infinity => None,
    }
}

/// Order of f at a sphere point: zero order positive, pole order negative.
pub fn order_at<K: Coeff>(f: &RationalFunction<K>, p: &SpherePoint) -> Result<i64, SymError> {
    match lift_point::<K>(p) {
        Some(x) => f.order_at_value(&x),
        None => f.order_at_infinity(),
    }
}

/// Order of a density of weight 1 (1-form) or 2 (2-differential) at a sphere
/// point. At a finite point this is the plain order; at ∞ the density
/// transforms by w^(-2·weight) under the chart w = 1/z.
pub fn differential_order_at<K: Coeff>(
    q_density: &RationalFunction<K>,
    weight: u32,
    p: &SpherePoint,
) -> Result<i64, SymError> {
    assert!(weight == 1 || weight == 2, "weights 1 and 2 only");
    match p {
        SpherePoint::Finite(_) => order_at(q_density, p),
        SpherePoint::Infinity => Ok(q_density.order_at_infinity()? - 2 * weight as i64),
    }
}

/// Residue of the 1-form f·dz at a sphere point. At ∞ the chart change
/// contributes the factor -w^{-2}.
pub fn residue_at<K: Coeff>(f: &RationalFunction<K>, p: &SpherePoint) -> Result<K, SymError> {
    if f.is_zero() {
        return Ok(K::zero());
    }
    match lift_point::<K>(p) {
        Some(x) => residue_at_zero(&f.shift(&x)),
        None => {
            // res_inf f dz = res_0 ( -f(1/w)/w^2 ) dw
            let g = f
                .subst_inv()
                .mul(&RationalFunction::new(
                    Poly::from_ints(&[-1]),
                    Poly::monomial(K::one(), 2),
                )?);
            residue_at_zero(&g)
        }
    }
}

/// Coefficient of z^{-1} in the Laurent expansion at 0.
fn residue_at_zero<K: Coeff>(f: &RationalFunction<K>) -> Result<K, SymError> {
    let m = f.den().root_multiplicity(&K::zero());
    if m == 0 {
        return Ok(K::zero());
    }
    // f = N / (z^m D~), residue = [z^{m-1}] (N/D~)
    let zpow = Poly::monomial(K::one(), m);
    let dt = f.den().div_exact(&zpow).expect("multiplicity");
    let series = taylor_div(f.num(), &dt, m);
    Ok(series[m - 1].clone())
}

/// First `n` Taylor coefficients at 0 of num/den, with den(0) != 0.
pub(crate) fn taylor_div<K: Coeff>(num: &Poly<K>, den: &Poly<K>, n: usize) -> Vec<K> {
    let d0 = den.coeff(0);
    assert!(!d0.is_zero(), "denominator must be a unit at 0");
    let d0inv = d0.inv().expect("nonzero");
    let mut out: Vec<K> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = num.coeff(k);
        for j in 0..k {
            acc = acc.sub(&out[j].mul(&den.coeff(k - j)));
        }
        out.push(acc.mul(&d0inv));
    }
    out
}

/// One entry of a divisor: either a resolved sphere point or an irreducible
/// factor whose roots are outside the scalar domain.
#[derive(Clone, PartialEq, Debug)]
pub enum DivisorEntry<K: Coeff> {
    Point(SpherePoint, i64),
    /// Monic irreducible (over the domain) factor with its order; it stands
    /// for deg(factor) many points.
    Irreducible(Poly<K>, i64),
}

impl<K: Coeff> DivisorEntry<K> {
    /// Total order contribution, counting each root of an irreducible factor.
    pub fn total_order(&self) -> i64 {
        match self {
            DivisorEntry::Point(_, k) => *k,
            DivisorEntry::Irreducible(p, k) => *k * p.degree().unwrap_or(0) as i64,
        }
    }
}

/// The quadratic extension already present in a set of rational functions,
/// if any: this is the scalar domain root extraction is allowed to use.
pub fn ambient_discriminant(fs: &[&ExactRat]) -> Option<u64> {
    fs.iter().find_map(|f| {
        f.num()
            .coeffs()
            .iter()
            .chain(f.den().coeffs())
            .find_map(|c| c.discriminant())
    })
}

/// Divisor of a rational function over the exact scalars, including the
/// order at ∞. Root extraction is exact: linear and quadratic factors split
/// whenever their roots lie in the scalar domain; higher-degree factors with
/// rational coefficients split off rational roots; anything else is reported
/// as an irreducible factor rather than approximated.
pub fn divisor(f: &ExactRat) -> Result<Vec<DivisorEntry<ExactScalar>>, SymError> {
    divisor_in_domain(f, ambient_discriminant(&[f]))
}

/// `divisor` with an explicit ambient quadratic extension, for callers whose
/// domain is fixed by a wider computation context than this one function.
pub fn divisor_in_domain(
    f: &ExactRat,
    ambient: Option<u64>,
) -> Result<Vec<DivisorEntry<ExactScalar>>, SymError> {
    if f.is_zero() {
        return Err(SymError::ZeroFunction);
    }
    fn push_point(
        entries: &mut Vec<DivisorEntry<ExactScalar>>,
        p: SpherePoint,
        k: i64,
    ) {
        for e in entries.iter_mut() {
            if let DivisorEntry::Point(q, ord) = e {
                if *q == p {
                    *ord += k;
                    return;
                }
            }
        }
        entries.push(DivisorEntry::Point(p, k));
    }
    let mut entries: Vec<DivisorEntry<ExactScalar>> = vec![];
    for (poly, sign) in [(f.num(), 1i64), (f.den(), -1i64)] {
        if poly.is_constant() {
            continue;
        }
        for (factor, mult) in poly.squarefree_decomposition() {
            let (roots, leftover) = split_roots(&factor, ambient);
            for r in roots {
                push_point(&mut entries, SpherePoint::Finite(r), sign * mult as i64);
            }
            if let Some(irr) = leftover {
                entries.push(DivisorEntry::Irreducible(irr, sign * mult as i64));
            }
        }
    }
    let inf = f.order_at_infinity()?;
    if inf != 0 {
        entries.push(DivisorEntry::Point(SpherePoint::Infinity, inf));
    }
    debug_assert_eq!(entries.iter().map(|e| e.total_order()).sum::<i64>(), 0);
    Ok(entries)
}

/// Split a square-free monic polynomial into roots found in the domain and
/// an (optional) leftover factor.
///
/// The domain is fixed by the computation context: Gaussian rationals, plus
/// the one quadratic surd already present (in this factor or the wider
/// ambient data). No new extensions are introduced.
fn split_roots(
    factor: &Poly<ExactScalar>,
    ambient: Option<u64>,
) -> (Vec<ExactScalar>, Option<Poly<ExactScalar>>) {
    let ambient = ambient.or_else(|| factor.coeffs().iter().find_map(|c| c.discriminant()));
    let in_domain = |s: &ExactScalar| match (ambient, s.discriminant()) {
        (_, None) => true,
        (Some(a), Some(b)) => a == b,
        (None, Some(_)) => false,
    };
    let mut roots = vec![];
    let mut rem = factor.monic();
    loop {
        match rem.degree() {
            None | Some(0) => return (roots, None),
            Some(1) => {
                roots.push(rem.coeff(0).neg_ref());
                return (roots, None);
            }
            Some(2) => {
                // t^2 + b t + c: roots (-b ± sqrt(b^2 - 4c))/2
                let b = rem.coeff(1);
                let c = rem.coeff(0);
                let disc = b.mul_ref(&b).sub_ref(&c.mul_ref(&ExactScalar::from_int(4)));
                let sq = match disc.sqrt().filter(|s| in_domain(s)) {
                    Some(s) => s,
                    None => return (roots, Some(rem)),
                };
                let half = ExactScalar::from_ratio(1, 2);
                let r1 = b.neg_ref().add_ref(&sq).mul_ref(&half);
                let r2 = b.neg_ref().sub_ref(&sq).mul_ref(&half);
                roots.push(r1);
                roots.push(r2);
                return (roots, None);
            }
            Some(_) => {
                match rational_root(&rem) {
                    Some(r) => {
                        let lin = Poly::linear_from_root(&r);
                        rem = rem.div_exact(&lin).expect("root divides");
                        roots.push(r);
                    }
                    None => return (roots, Some(rem)),
                }
            }
        }
    }
}

/// A rational root of a polynomial with rational coefficients, if any.
fn rational_root(p: &Poly<ExactScalar>) -> Option<ExactScalar> {
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};
    // Require purely rational coefficients.
    let mut rats: Vec<Rat> = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        rats.push(c.as_rat()?.clone());
    }
    // Clear denominators.
    let mut lcm = BigInt::one();
    for r in &rats {
        lcm = num_integer::lcm(lcm, r.denom().clone());
    }
    let ints: Vec<BigInt> = rats.iter().map(|r| r.numer() * &lcm / r.denom()).collect();
    let a0 = ints.iter().find(|c| !c.is_zero())?.clone();
    if ints[0].is_zero() {
        return Some(ExactScalar::zero());
    }
    let an = ints.last()?.clone();
    let max_candidates = 20_000usize;
    let ds0 = small_divisors(&a0.abs(), max_candidates);
    let dsn = small_divisors(&an.abs(), max_candidates);
    for num in &ds0 {
        for den in &dsn {
            for sign in [1i64, -1] {
                let cand = Rat::new(num * BigInt::from(sign), den.clone());
                let x = ExactScalar::from_rat(cand);
                if p.eval(&x).is_zero() {
                    return Some(x);
                }
            }
        }
    }
    None
}

fn small_divisors(n: &num_bigint::BigInt, cap: usize) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let mut out = vec![];
    let mut d = BigInt::from(1);
    while &d * &d <= *n && out.len() < cap {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out
}

/// Branching order of a non-constant map at a sphere point: local
/// multiplicity minus one, in charts (so poles and ∞ are handled).
pub fn branch_order<K: Coeff>(g: &RationalFunction<K>, p: &SpherePoint) -> Result<i64, SymError> {
    if g.is_constant() {
        return Err(SymError::ConstantInput);
    }
    let local = match lift_point::<K>(p) {
        Some(x) => g.shift(&x),
        None => g.subst_inv(),
    };
    let mult = match local.eval_sphere(&K::zero()) {
        SphereValue::Infinity => -local.order_at_value(&K::zero())?,
        SphereValue::Finite(v) => local
            .sub(&RationalFunction::constant(v))
            .order_at_value(&K::zero())?,
    };
    Ok(mult - 1)
}

/// Möbius action a⋆g = (a11 g + a12)/(a21 g + a22) for unimodular a.
pub fn mobius<K: Coeff>(
    a: &[[K; 2]; 2],
    g: &RationalFunction<K>,
) -> Result<RationalFunction<K>, SymError> {
    let det = a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]));
    if det != K::one() {
        return Err(SymError::NonUnimodular);
    }
    let num = g.scale(&a[0][0]).add(&RationalFunction::constant(a[0][1].clone()));
    let den = g.scale(&a[1][0]).add(&RationalFunction::constant(a[1][1].clone()));
    num.div(&den)
}

/// Density of the Schwarzian derivative S(g) = (g''/g')' - (g''/g')^2 / 2.
pub fn schwarzian<K: Coeff>(g: &RationalFunction<K>) -> Result<RationalFunction<K>, SymError> {
    if g.is_constant() {
        return Err(SymError::ConstantInput);
    }
    let gp = g.derivative();
    let w = gp.derivative().div(&gp)?;
    let half = RationalFunction::constant(K::from_rat(&Rat::new(1.into(), 2.into())));
    Ok(w.derivative().sub(&w.mul(&w).mul(&half)))
}

/// Schwarzian density of the power map z ↦ a z^μ for an exact exponent μ
/// (not necessarily an integer): (1 - μ²)/(2 z²).
pub fn power_map_schwarzian_density(mu: &ExactScalar) -> ExactRat {
    let one = ExactScalar::one();
    let c = one
        .sub_ref(&mu.mul_ref(mu))
        .div_ref(&ExactScalar::from_int(2))
        .expect("nonzero");
    RationalFunction::new(Poly::constant(c), Poly::monomial(ExactScalar::one(), 2))
        .expect("nonzero denominator")
}

/// Rational antiderivative via Horowitz–Ostrogradsky reduction.
///
/// Errors with [`SymError::NonzeroResidue`] when the integral has a
/// logarithmic part, i.e. some residue is nonzero.
pub fn integrate_rational<K: Coeff>(
    f: &RationalFunction<K>,
) -> Result<RationalFunction<K>, SymError> {
    if f.is_zero() {
        return Ok(RationalFunction::zero());
    }
    // Split off the polynomial part.
    let (poly_part, rem) = f.num().div_rem(f.den())?;
    let poly_int = RationalFunction::from_poly(poly_part.antiderivative());
    if rem.is_zero() {
        return Ok(poly_int);
    }
    let den = f.den();
    let dstar = den.gcd(&den.derivative());
    if dstar.is_constant() {
        // Square-free denominator: every pole is simple, so any nonzero
        // proper part integrates to logs only.
        return Err(SymError::NonzeroResidue);
    }
    let dtilde = den.div_exact(&dstar).expect("gcd divides");
    // Ansatz: rem/den = (A/dstar)' + B/dtilde with deg A < deg dstar,
    // deg B < deg dtilde. Expanding:
    //   rem = A' dtilde - A (dstar' dtilde / dstar) + B dstar
    // where dstar' dtilde / dstar is a polynomial.
    let s = dstar
        .derivative()
        .mul(&dtilde)
        .div_exact(&dstar)
        .expect("exact by construction");
    let na = dstar.degree().unwrap();
    let nb = dtilde.degree().unwrap();
    let ncols = na + nb;
    let nrows = den.degree().unwrap();
    // Columns: coefficients a_0..a_{na-1}, b_0..b_{nb-1}.
    let mut m = vec![vec![K::zero(); ncols]; nrows];
    for j in 0..na {
        // contribution of a_j: (z^j)' dtilde - z^j s
        let mono = Poly::monomial(K::one(), j);
        let col = mono.derivative().mul(&dtilde).sub(&mono.mul(&s));
        for (i, row) in m.iter_mut().enumerate() {
            row[j] = col.coeff(i);
        }
    }
    for j in 0..nb {
        let col = Poly::monomial(K::one(), j).mul(&dstar);
        for (i, row) in m.iter_mut().enumerate() {
            row[na + j] = col.coeff(i);
        }
    }
    let rhs: Vec<K> = (0..nrows).map(|i| rem.coeff(i)).collect();
    let sol = solve_linear(m, rhs)?;
    let b = Poly::new(sol[na..].to_vec());
    if !b.is_zero() {
        return Err(SymError::NonzeroResidue);
    }
    let a = Poly::new(sol[..na].to_vec());
    let rational_part = RationalFunction::new(a, dstar)?;
    Ok(poly_int.add(&rational_part))
}

/// Dense Gaussian elimination over an exact field.
fn solve_linear<K: Coeff>(mut m: Vec<Vec<K>>, mut rhs: Vec<K>) -> Result<Vec<K>, SymError> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivot_of_col = vec![usize::MAX; cols];
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        rhs.swap(r, p);
        let inv = m[r][c].inv()?;
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        rhs[r] = rhs[r].mul(&inv);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let t = m[r][j].mul(&factor);
                    m[i][j] = m[i][j].sub(&t);
                }
                let t = rhs[r].mul(&factor);
                rhs[i] = rhs[i].sub(&t);
            }
        }
        pivot_of_col[c] = r;
        r += 1;
        if r == rows {
            break;
        }
    }
    // Consistency: zero rows must have zero rhs.
    for i in r..rows {
        if !rhs[i].is_zero() {
            return Err(SymError::Precondition("inconsistent linear system".into()));
        }
    }
    let mut sol = vec![K::zero(); cols];
    for c in 0..cols {
        if pivot_of_col[c] != usize::MAX {
            sol[c] = rhs[pivot_of_col[c]].clone();
        }
    }
    Ok(sol)
}
