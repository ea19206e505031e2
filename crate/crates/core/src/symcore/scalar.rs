//! Gaussian-rational scalars with one optional quadratic surd:
//! `(a + b√d) + (a' + b'√d) i` with `a, b, a', b'` rational and `d` a
//! positive square-free integer.
//!
//! The discriminant `d` is a property of the value, not of a global context.
//! Values with distinct discriminants cannot be combined; attempting to do
//! so panics, since it indicates a construction bug upstream — inputs are
//! validated to share at most one extension per computation.

use super::SymError;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rat = num_rational::BigRational;

pub(crate) fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact scalar of the form `(a + b√d) + (a' + b'√d) i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re_rat: Rat,
    re_surd: Rat,
    im_rat: Rat,
    im_surd: Rat,
    /// Positive square-free discriminant; `None` when both surd parts vanish.
    disc: Option<u64>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        ExactScalar {
            re_rat: r,
            re_surd: Rat::zero(),
            im_rat: Rat::zero(),
            im_surd: Rat::zero(),
            disc: None,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_i64(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rat(Rat::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `re + im·i` from rational parts.
    pub fn complex(re: Rat, im: Rat) -> Self {
        ExactScalar {
            re_rat: re,
            re_surd: Rat::zero(),
            im_rat: im,
            im_surd: Rat::zero(),
            disc: None,
        }
    }

    pub fn i() -> Self {
        Self::complex(Rat::zero(), Rat::one())
    }

    /// Build `(a + b√d) + (a' + b'√d)i`. `d` must be square-free and ≥ 2.
    pub fn with_surd(a: Rat, b: Rat, ap: Rat, bp: Rat, d: u64) -> Result<Self, SymError> {
        if d < 2 || !is_square_free(d) {
            return Err(SymError::UnsupportedRadicand(format!(
                "discriminant {d} must be square-free and >= 2"
            )));
        }
        Ok(ExactScalar {
            re_rat: a,
            re_surd: b,
            im_rat: ap,
            im_surd: bp,
            disc: Some(d),
        }
        .normalized())
    }

    fn normalized(mut self) -> Self {
        if self.re_surd.is_zero() && self.im_surd.is_zero() {
            self.disc = None;
        }
        self
    }

    pub fn discriminant(&self) -> Option<u64> {
        self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.re_rat.is_zero()
            && self.re_surd.is_zero()
            && self.im_rat.is_zero()
            && self.im_surd.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im_rat.is_zero() && self.im_surd.is_zero()
    }

    /// The rational value, if the scalar is purely rational.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.is_real() && self.re_surd.is_zero() {
            Some(&self.re_rat)
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rat().is_some()
    }

    pub fn is_integer(&self) -> bool {
        self.as_rat().map(|r| r.is_integer()).unwrap_or(false)
    }

    pub fn re_parts(&self) -> (&Rat, &Rat) {
        (&self.re_rat, &self.re_surd)
    }

    pub fn im_parts(&self) -> (&Rat, &Rat) {
        (&self.im_rat, &self.im_surd)
    }

    pub fn conj(&self) -> Self {
        ExactScalar {
            re_rat: self.re_rat.clone(),
            re_surd: self.re_surd.clone(),
            im_rat: -self.im_rat.clone(),
            im_surd: -self.im_surd.clone(),
            disc: self.disc,
        }
        .normalized()
    }

    fn join_disc(&self, other: &Self) -> Option<u64> {
        match (self.disc, other.disc) {
            (None, d) | (d, None) => d,
            (Some(a), Some(b)) if a == b => Some(a),
            (Some(a), Some(b)) => panic!(
                "mixed quadratic extensions: sqrt({a}) and sqrt({b}) cannot appear in one value"
            ),
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let disc = self.join_disc(other);
        ExactScalar {
            re_rat: &self.re_rat + &other.re_rat,
            re_surd: &self.re_surd + &other.re_surd,
            im_rat: &self.im_rat + &other.im_rat,
            im_surd: &self.im_surd + &other.im_surd,
            disc,
        }
        .normalized()
    }

    pub fn neg_ref(&self) -> Self {
        ExactScalar {
            re_rat: -self.re_rat.clone(),
            re_surd: -self.re_surd.clone(),
            im_rat: -self.im_rat.clone(),
            im_surd: -self.im_surd.clone(),
            disc: self.disc,
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let disc = self.join_disc(other);
        let d = disc.map(|d| rat_i64(d as i64)).unwrap_or_else(Rat::zero);
        // (x1 + i y1)(x2 + i y2) with x, y in Q(sqrt d)
        let (x1a, x1b) = (&self.re_rat, &self.re_surd);
        let (y1a, y1b) = (&self.im_rat, &self.im_surd);
        let (x2a, x2b) = (&other.re_rat, &other.re_surd);
        let (y2a, y2b) = (&other.im_rat, &other.im_surd);
        let base_mul = |aa: &Rat, ab: &Rat, ba: &Rat, bb: &Rat| -> (Rat, Rat) {
            (aa * ba + &(ab * bb) * &d, aa * bb + ab * ba)
        };
        let (x1x2a, x1x2b) = base_mul(x1a, x1b, x2a, x2b);
        let (y1y2a, y1y2b) = base_mul(y1a, y1b, y2a, y2b);
        let (x1y2a, x1y2b) = base_mul(x1a, x1b, y2a, y2b);
        let (y1x2a, y1x2b) = base_mul(y1a, y1b, x2a, x2b);
        ExactScalar {
            re_rat: x1x2a - y1y2a,
            re_surd: x1x2b - y1y2b,
            im_rat: x1y2a + y1x2a,
            im_surd: x1y2b + y1x2b,
            disc,
        }
        .normalized()
    }

    pub fn inv_ref(&self) -> Result<Self, SymError> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        // 1/(x + iy) = (x - iy)/(x^2 + y^2); the norm lives in Q(sqrt d).
        let conj = self.conj();
        let norm = self.mul_ref(&conj);
        debug_assert!(norm.is_real());
        let d = norm.disc.map(|d| rat_i64(d as i64)).unwrap_or_else(Rat::zero);
        let (a, b) = (&norm.re_rat, &norm.re_surd);
        // 1/(a + b sqrt d) = (a - b sqrt d)/(a^2 - b^2 d); the denominator is
        // a nonzero rational because d is square-free.
        let denom = a * a - &(b * b) * &d;
        if denom.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        let inv_norm = ExactScalar {
            re_rat: a / &denom,
            re_surd: -(b / &denom),
            im_rat: Rat::zero(),
            im_surd: Rat::zero(),
            disc: norm.disc,
        }
        .normalized();
        Ok(conj.mul_ref(&inv_norm))
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self, SymError> {
        Ok(self.mul_ref(&other.inv_ref()?))
    }

    /// Exact sign of a real scalar: -1, 0 or 1. Panics if not real.
    pub fn sign_real(&self) -> i32 {
        assert!(self.is_real(), "sign of a non-real scalar");
        let (a, b) = (&self.re_rat, &self.re_surd);
        if b.is_zero() {
            return rat_sign(a);
        }
        let d = rat_i64(self.disc.expect("surd part implies discriminant") as i64);
        let sa = rat_sign(a);
        let sb = rat_sign(b);
        if sa == sb || sa == 0 {
            return sb;
        }
        if sb == 0 {
            return sa;
        }
        // a and b have opposite signs: compare a^2 with b^2 d.
        let lhs = a * a;
        let rhs = &(b * b) * &d;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// Square root within the scalar domain, when one exists.
    ///
    /// Supported inputs: rational values (result is rational, a pure surd or
    /// `i`·such), and values `a + b√d` that are perfect squares in Q(√d).
    pub fn sqrt(&self) -> Option<ExactScalar> {
        if let Some(r) = self.as_rat() {
            return sqrt_rational(r).ok();
        }
        if self.is_real() && self.disc.is_some() {
            // Search (x + y sqrt d)^2 = a + b sqrt d: x^2 + y^2 d = a, 2xy = b.
            // Then x^2 solves t^2 - a t + b^2 d /4 = 0.
            let d = rat_i64(self.disc.unwrap() as i64);
            let (a, b) = (&self.re_rat, &self.re_surd);
            let quarter = Rat::new(BigInt::one(), BigInt::from(4));
            let discq = a * a - &(&(b * b) * &d) * &rat_i64(4) * &quarter;
            let s = rat_sqrt_exact(&discq)?;
            for x2 in [(a + &s) / rat_i64(2), (a - &s) / rat_i64(2)] {
                if rat_sign(&x2) >= 0 {
                    if let Some(x) = rat_sqrt_exact(&x2) {
                        if x.is_zero() {
                            continue;
                        }
                        let y = b / &(&x * &rat_i64(2));
                        let cand = ExactScalar {
                            re_rat: x,
                            re_surd: y,
                            im_rat: Rat::zero(),
                            im_surd: Rat::zero(),
                            disc: self.disc,
                        }
                        .normalized();
                        if cand.mul_ref(&cand) == *self {
                            return Some(cand);
                        }
                    }
                }
            }
            return None;
        }
        None
    }

    /// Floating-point value.
    pub fn to_c64(&self) -> num_complex::Complex64 {
        let sd = self
            .disc
            .map(|d| (d as f64).sqrt())
            .unwrap_or(0.0);
        let re = rat_f64(&self.re_rat) + rat_f64(&self.re_surd) * sd;
        let im = rat_f64(&self.im_rat) + rat_f64(&self.im_surd) * sd;
        num_complex::Complex64::new(re, im)
    }
}

pub(crate) fn rat_sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of leading digits for extreme magnitudes.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rat_sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

fn is_square_free(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// √r as an exact scalar: a rational, a reduced surd `s·√d`, or `i`·such for
/// negative input. Errors when the square-free reduction exceeds the
/// supported factoring range.
pub fn sqrt_rational(r: &Rat) -> Result<ExactScalar, SymError> {
    if r.is_zero() {
        return Ok(ExactScalar::zero());
    }
    if r.is_negative() {
        let pos = sqrt_rational(&-r.clone())?;
        return Ok(pos.mul_ref(&ExactScalar::i()));
    }
    // sqrt(p/q) = sqrt(p q)/q
    let pq = r.numer() * r.denom();
    let (square, free) = split_square(&pq)?;
    let coeff = Rat::new(square, r.denom().clone());
    if free == 1 {
        return Ok(ExactScalar::from_rat(coeff));
    }
    Ok(ExactScalar {
        re_rat: Rat::zero(),
        re_surd: coeff,
        im_rat: Rat::zero(),
        im_surd: Rat::zero(),
        disc: Some(free),
    })
}

/// Write n = s^2 * f with f square-free; returns (s, f).
fn split_square(n: &BigInt) -> Result<(BigInt, u64), SymError> {
    let mut m = n.clone();
    assert!(m.is_positive());
    let mut s = BigInt::one();
    let mut f: u64 = 1;
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &p * &p <= m && p <= limit {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            for _ in 0..e / 2 {
                s *= &p;
            }
            if e % 2 == 1 {
                let pf = p.to_u64().ok_or_else(|| {
                    SymError::UnsupportedRadicand(format!("prime factor {p} too large"))
                })?;
                f = f.checked_mul(pf).ok_or_else(|| {
                    SymError::UnsupportedRadicand("square-free part overflows u64".into())
                })?;
            }
        }
        p += 1;
    }
    if m > BigInt::one() {
        // Remaining cofactor has no prime factor below 1e6. Accept it as
        // square-free if it is not itself a perfect square and fits u64.
        let root = m.sqrt();
        if &(&root * &root) == &m {
            s *= root;
        } else {
            let mf = m.to_u64().ok_or_else(|| {
                SymError::UnsupportedRadicand(format!("cofactor {m} too large to certify"))
            })?;
            f = f.checked_mul(mf).ok_or_else(|| {
                SymError::UnsupportedRadicand("square-free part overflows u64".into())
            })?;
        }
    }
    Ok((s, f))
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $call:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$call(&rhs)
            }
        }
        impl<'a> $trait<&'a ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'a ExactScalar) -> ExactScalar {
                self.$call(rhs)
            }
        }
    };
}

impl_binop!(Add, add, add_ref);
impl_binop!(Sub, sub, sub_ref);
impl_binop!(Mul, mul, mul_ref);

// Display uses the same grammar the parser accepts: a sum of terms
// `rat`, `rat*i`, `rat*sqrt(d)`, `rat*i*sqrt(d)`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>,
                        coeff: &Rat,
                        tag: &str|
         -> fmt::Result {
            if coeff.is_zero() {
                return Ok(());
            }
            if first {
                first = false;
                if tag.is_empty() {
                    write!(f, "{coeff}")?;
                } else if coeff.is_one() {
                    write!(f, "{tag}")?;
                } else if (-coeff.clone()).is_one() {
                    write!(f, "-{tag}")?;
                } else {
                    write!(f, "{coeff}*{tag}")?;
                }
            } else {
                let (sign, mag) = if coeff.is_negative() {
                    ("-", -coeff.clone())
                } else {
                    ("+", coeff.clone())
                };
                if tag.is_empty() {
                    write!(f, "{sign}{mag}")?;
                } else if mag.is_one() {
                    write!(f, "{sign}{tag}")?;
                } else {
                    write!(f, "{sign}{mag}*{tag}")?;
                }
            }
            Ok(())
        };
        let d = self.disc.unwrap_or(0);
        term(f, &self.re_rat, "")?;
        if d != 0 {
            term(f, &self.re_surd, &format!("sqrt({d})"))?;
        }
        term(f, &self.im_rat, "i")?;
        if d != 0 {
            term(f, &self.im_surd, &format!("i*sqrt({d})"))?;
        }
        Ok(())
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.neg_ref()
    }
}

impl Div for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        self.div_ref(&rhs).expect("division by zero scalar")
    }
}

impl super::Coeff for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn from_rat(r: &Rat) -> Self {
        ExactScalar::from_rat(r.clone())
    }
    fn from_exact(x: &ExactScalar) -> Self {
        x.clone()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn add(&self, b: &Self) -> Self {
        self.add_ref(b)
    }
    fn sub(&self, b: &Self) -> Self {
        self.sub_ref(b)
    }
    fn mul(&self, b: &Self) -> Self {
        self.mul_ref(b)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn inv(&self) -> Result<Self, SymError> {
        self.inv_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::Coeff;

    #[test]
    fn arithmetic_is_closed_over_one_surd() {
        let a = ExactScalar::with_surd(rat_i64(1), rat_i64(2), Rat::zero(), Rat::zero(), 5)
            .unwrap();
        let b = ExactScalar::with_surd(rat_i64(3), rat_i64(-1), rat_i64(1), Rat::zero(), 5)
            .unwrap();
        let p = a.mul_ref(&b);
        assert_eq!(p.discriminant(), Some(5));
        let q = p.div_ref(&a).unwrap();
        assert_eq!(q, b);
    }

    #[test]
    fn surd_drops_when_parts_cancel() {
        let a = ExactScalar::with_surd(Rat::zero(), rat_i64(1), Rat::zero(), Rat::zero(), 2)
            .unwrap();
        let sq = a.mul_ref(&a);
        assert_eq!(sq.as_rat(), Some(&rat_i64(2)));
        assert_eq!(sq.discriminant(), None);
    }

    #[test]
    #[should_panic(expected = "mixed quadratic extensions")]
    fn mixing_two_surds_is_rejected() {
        let a = sqrt_rational(&rat_i64(2)).unwrap();
        let b = sqrt_rational(&rat_i64(3)).unwrap();
        let _ = a.add_ref(&b);
    }

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(
            sqrt_rational(&Rat::new(4.into(), 9.into())).unwrap(),
            ExactScalar::from_ratio(2, 3)
        );
        let r = sqrt_rational(&rat_i64(12)).unwrap();
        assert_eq!(r.discriminant(), Some(3));
        assert_eq!(r.mul_ref(&r).as_rat(), Some(&rat_i64(12)));
        let neg = sqrt_rational(&rat_i64(-4)).unwrap();
        assert_eq!(neg, ExactScalar::complex(Rat::zero(), rat_i64(2)));
    }

    #[test]
    fn exact_sign_of_mixed_sign_surd() {
        // 3 - 2 sqrt(2) > 0, 2 - 2 sqrt(2) < 0
        let s = |a: i64, b: i64| {
            ExactScalar::with_surd(rat_i64(a), rat_i64(b), Rat::zero(), Rat::zero(), 2).unwrap()
        };
        assert_eq!(s(3, -2).sign_real(), 1);
        assert_eq!(s(2, -2).sign_real(), -1);
        assert_eq!(s(0, 0).sign_real(), 0);
    }

    #[test]
    fn sqrt_in_extension() {
        // (1 + sqrt 2)^2 = 3 + 2 sqrt 2
        let v = ExactScalar::with_surd(rat_i64(3), rat_i64(2), Rat::zero(), Rat::zero(), 2)
            .unwrap();
        let r = v.sqrt().unwrap();
        assert_eq!(r.mul_ref(&r), v);
    }

    #[test]
    fn display_round_trip_shape() {
        let v = ExactScalar::with_surd(
            Rat::new(1.into(), 2.into()),
            Rat::new((-3).into(), 4.into()),
            rat_i64(2),
            Rat::zero(),
            7,
        )
        .unwrap();
        assert_eq!(format!("{v}"), "1/2-3/4*sqrt(7)+2*i");
        let w = ExactScalar::from_int(0);
        assert_eq!(format!("{w}"), "0");
        let _ = ExactScalar::from_int(1).inv().unwrap();
    }
}
