//! Certified isolation of the complex roots of a polynomial with Gaussian
//! rational coefficients.
//!
//! Pipeline: square-free decomposition (exact), floating-point root
//! approximation (Aberth), then certification of each root with the
//! Krawczyk operator evaluated in exact rational rectangle arithmetic.
//! A certificate `K(X) ⊆ int X` proves existence and uniqueness of a root
//! in the rectangle X; pairwise-disjoint certified rectangles for all
//! deg(f) roots of the square-free part make the isolation complete.

use crate::symcore::{ExactScalar, Poly, Rat};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum RootIsoError {
    /// Coefficients outside the Gaussian rationals.
    UnsupportedCoefficients,
    /// The numeric stage failed to converge (pathological input).
    NumericFailure,
    /// Certification failed after retries; roots may be too clustered.
    CertificationFailure(String),
}

impl fmt::Display for RootIsoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootIsoError::UnsupportedCoefficients => {
                write!(f, "coefficients must be Gaussian rationals")
            }
            RootIsoError::NumericFailure => write!(f, "numeric root stage failed"),
            RootIsoError::CertificationFailure(s) => write!(f, "certification failed: {s}"),
        }
    }
}

impl std::error::Error for RootIsoError {}

/// Closed rational interval [lo, hi].
#[derive(Debug, Clone, PartialEq)]
pub struct RInt {
    pub lo: Rat,
    pub hi: Rat,
}

impl RInt {
    fn point(x: Rat) -> Self {
        RInt { lo: x.clone(), hi: x }
    }

    fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        RInt { lo, hi }
    }

    fn add(&self, o: &RInt) -> RInt {
        RInt::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    fn sub(&self, o: &RInt) -> RInt {
        RInt::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    fn mul(&self, o: &RInt) -> RInt {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for x in &c[1..] {
            if *x < lo {
                lo = x.clone();
            }
            if *x > hi {
                hi = x.clone();
            }
        }
        RInt::new(lo, hi)
    }

    fn contains(&self, x: &Rat) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// Strict inclusion in the interior of `o`.
    fn inside(&self, o: &RInt) -> bool {
        o.lo < self.lo && self.hi < o.hi
    }

    fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }
}

/// Rational rectangle in the complex plane.
#[derive(Debug, Clone, PartialEq)]
pub struct CRect {
    pub re: RInt,
    pub im: RInt,
}

impl CRect {
    fn point(re: Rat, im: Rat) -> Self {
        CRect {
            re: RInt::point(re),
            im: RInt::point(im),
        }
    }

    fn add(&self, o: &CRect) -> CRect {
        CRect {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    fn sub(&self, o: &CRect) -> CRect {
        CRect {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    fn mul(&self, o: &CRect) -> CRect {
        CRect {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    fn inside(&self, o: &CRect) -> bool {
        self.re.inside(&o.re) && self.im.inside(&o.im)
    }

    fn contains_zero(&self) -> bool {
        let z = Rat::zero();
        self.re.contains(&z) && self.im.contains(&z)
    }

    fn center(&self) -> (Rat, Rat) {
        (self.re.mid(), self.im.mid())
    }

    fn approx(&self) -> Complex64 {
        let (re, im) = self.center();
        Complex64::new(rat_to_f64(&re), rat_to_f64(&im))
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn f64_to_rat(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Gaussian rational as an exact complex pair.
#[derive(Debug, Clone, PartialEq)]
struct CRat {
    re: Rat,
    im: Rat,
}

impl CRat {
    fn add(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn mul(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn inv(&self) -> Option<CRat> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return None;
        }
        Some(CRat {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    fn to_rect(&self) -> CRect {
        CRect::point(self.re.clone(), self.im.clone())
    }
}

/// One certified root of the square-free part.
#[derive(Debug, Clone)]
pub struct IsolatedRoot {
    pub approx: Complex64,
    /// Isolating rectangle with exact rational corners.
    pub enclosure: CRect,
    /// Multiplicity in the original (not square-free) polynomial.
    pub multiplicity: usize,
}

/// Isolate all complex roots of `p` (Gaussian rational coefficients).
pub fn isolate_roots(p: &Poly<ExactScalar>) -> Result<Vec<IsolatedRoot>, RootIsoError> {
    let coeffs = gaussian_coeffs(p)?;
    if coeffs.len() <= 1 {
        return Ok(vec![]);
    }
    let mut out = vec![];
    for (factor, mult) in p.squarefree_decomposition() {
        let fc = gaussian_coeffs(&factor)?;
        let roots = isolate_squarefree(&fc)?;
        for r in roots {
            out.push(IsolatedRoot {
                approx: r.approx,
                enclosure: r.enclosure,
                multiplicity: mult,
            });
        }
    }
    Ok(out)
}

fn gaussian_coeffs(p: &Poly<ExactScalar>) -> Result<Vec<CRat>, RootIsoError> {
    let mut out = vec![];
    for c in p.coeffs() {
        if c.discriminant().is_some() {
            return Err(RootIsoError::UnsupportedCoefficients);
        }
        let (re, _) = c.re_parts();
        let (im, _) = c.im_parts();
        out.push(CRat {
            re: re.clone(),
            im: im.clone(),
        });
    }
    Ok(out)
}

fn isolate_squarefree(raw: &[CRat]) -> Result<Vec<IsolatedRoot>, RootIsoError> {
    let deg = raw.len() - 1;
    if deg == 0 {
        return Ok(vec![]);
    }
    // Exact monic normalization: the roots are unchanged and the numeric
    // stage sees balanced magnitudes.
    let lead_inv = raw
        .last()
        .and_then(|c| c.inv())
        .ok_or(RootIsoError::NumericFailure)?;
    let coeffs: Vec<CRat> = raw.iter().map(|c| c.mul(&lead_inv)).collect();
    let coeffs = &coeffs[..];
    let fc: Vec<Complex64> = coeffs
        .iter()
        .map(|c| Complex64::new(rat_to_f64(&c.re), rat_to_f64(&c.im)))
        .collect();
    if fc.iter().any(|c| !c.is_finite()) {
        return Err(RootIsoError::NumericFailure);
    }
    let approx = aberth(&fc)?;
    // Derivative coefficients, exact.
    let dcoeffs: Vec<CRat> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| {
            let k = Rat::from_integer((k as i64).into());
            CRat {
                re: &c.re * &k,
                im: &c.im * &k,
            }
        })
        .collect();
    let mut roots = vec![];
    for (i, &z) in approx.iter().enumerate() {
        // Radius: a fraction of the distance to the nearest other root.
        let mut min_d = f64::INFINITY;
        for (j, &w) in approx.iter().enumerate() {
            if i != j {
                min_d = min_d.min((z - w).norm());
            }
        }
        let scale = z.norm().max(1.0);
        let mut radius = if min_d.is_finite() {
            (min_d / 4.0).max(scale * 1e-14)
        } else {
            scale * 1e-7
        };
        let mut certified = None;
        for _ in 0..12 {
            match krawczyk(coeffs, &dcoeffs, z, radius) {
                Some(rect) => {
                    certified = Some(rect);
                    break;
                }
                None => radius *= 0.5,
            }
        }
        let rect = certified.ok_or_else(|| {
            RootIsoError::CertificationFailure(format!("root near {z} resisted certification"))
        })?;
        roots.push(IsolatedRoot {
            approx: rect.approx(),
            enclosure: rect,
            multiplicity: 1,
        });
    }
    // Disjointness across the certified rectangles.
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let a = &roots[i].enclosure;
            let b = &roots[j].enclosure;
            let overlap = !(a.re.hi < b.re.lo
                || b.re.hi < a.re.lo
                || a.im.hi < b.im.lo
                || b.im.hi < a.im.lo);
            if overlap {
                return Err(RootIsoError::CertificationFailure(
                    "isolating rectangles overlap".into(),
                ));
            }
        }
    }
    if roots.len() != deg {
        return Err(RootIsoError::CertificationFailure(format!(
            "isolated {} of {} roots",
            roots.len(),
            deg
        )));
    }
    Ok(roots)
}

/// Krawczyk test on the square rectangle of half-width `radius` around `z`.
/// Returns the (certified) rectangle on success.
fn krawczyk(
    coeffs: &[CRat],
    dcoeffs: &[CRat],
    z: Complex64,
    radius: f64,
) -> Option<CRect> {
    if !radius.is_finite() || radius <= 0.0 || !z.is_finite() {
        return None;
    }
    let mre = f64_to_rat(z.re)?;
    let mim = f64_to_rat(z.im)?;
    let r = f64_to_rat(radius)?;
    let x = CRect {
        re: RInt::new(&mre - &r, &mre + &r),
        im: RInt::new(&mim - &r, &mim + &r),
    };
    let m = CRat {
        re: mre.clone(),
        im: mim.clone(),
    };
    // f(m), f'(m): exact.
    let fm = horner_exact(coeffs, &m);
    let dfm = horner_exact(dcoeffs, &m);
    let c = dfm.inv()?;
    // F'(X): interval Horner.
    let dfx = horner_rect(dcoeffs, &x);
    if dfx.contains_zero() {
        return None;
    }
    // K(X) = m - c f(m) + (1 - c F'(X)) (X - m)
    let one = CRat {
        re: Rat::from_integer(1.into()),
        im: Rat::zero(),
    };
    let m_rect = m.to_rect();
    let term1 = m_rect.sub(&c.mul(&fm).to_rect());
    let slope = one.to_rect().sub(&c.to_rect().mul(&dfx));
    let k = term1.add(&slope.mul(&x.sub(&m_rect)));
    if k.inside(&x) {
        Some(x)
    } else {
        None
    }
}

fn horner_exact(coeffs: &[CRat], z: &CRat) -> CRat {
    let mut acc = CRat {
        re: Rat::zero(),
        im: Rat::zero(),
    };
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

fn horner_rect(coeffs: &[CRat], x: &CRect) -> CRect {
    let mut acc = CRect::point(Rat::zero(), Rat::zero());
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(&c.to_rect());
    }
    acc
}

/// Aberth–Ehrlich simultaneous iteration.
fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>, RootIsoError> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    if lead.norm() == 0.0 {
        return Err(RootIsoError::NumericFailure);
    }
    // Fujiwara-type bound for the root radius: tight even when the
    // coefficient magnitudes span many orders.
    let mut bound = 0.0f64;
    for k in 1..=deg {
        let ratio = (coeffs[deg - k] / lead).norm();
        if ratio > 0.0 {
            bound = bound.max(2.0 * ratio.powf(1.0 / k as f64));
        }
    }
    let bound = bound.max(1e-3);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.45;
            0.7 * bound * Complex64::new(ang.cos(), ang.sin())
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            df = df * x + f;
            f = f * x + c;
        }
        (f, df)
    };
    for _ in 0..400 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (f, df) = eval(z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let newton = if df.norm() > 0.0 { f / df } else { f };
            let mut repulse = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let d = z[i] - zj;
                    if d.norm() > 1e-300 {
                        repulse += 1.0 / d;
                    }
                }
            }
            let denom = 1.0 - newton * repulse;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 * bound.max(1.0) {
            return Ok(z);
        }
    }
    // Accept slow convergence if residuals are small; the certification
    // stage is the arbiter anyway.
    Ok(z)
}
