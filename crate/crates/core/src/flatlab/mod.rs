//! Minimal-surface side: Weierstrass representation integrals, the period
//! computations for the two deformation families (the genus-1 one-ended
//! surface and the two-ended planar type), Newton solving with Jacobian
//! nondegeneracy reporting, and the elliptic evaluators.

pub mod elliptic;

pub use elliptic::{EllipticError, EllipticLattice};

use crate::symcore::{residue_at, ExactScalar, Poly, Rat, RationalFunction, SpherePoint};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::fmt;

type C = Complex64;
type RF = RationalFunction<ExactScalar>;

#[derive(Debug, Clone, PartialEq)]
pub enum FlatError {
    /// Metric degenerates (or a singularity sits) on the requested path.
    SingularOnPath(String),
    /// Newton iteration failed to converge.
    NewtonDiverged { iterations: usize, residual: f64 },
    /// Parameter excluded by a nondegeneracy requirement.
    ExcludedParameter(String),
    Elliptic(EllipticError),
}

impl fmt::Display for FlatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatError::SingularOnPath(s) => write!(f, "singularity on path: {s}"),
            FlatError::NewtonDiverged {
                iterations,
                residual,
            } => write!(
                f,
                "Newton diverged after {iterations} steps (|Per| = {residual})"
            ),
            FlatError::ExcludedParameter(s) => write!(f, "excluded parameter: {s}"),
            FlatError::Elliptic(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FlatError {}

impl From<EllipticError> for FlatError {
    fn from(e: EllipticError) -> Self {
        FlatError::Elliptic(e)
    }
}

/// Weierstrass data (g, ω) for a minimal immersion ℜ∫(1-g², i(1+g²), 2g)ω.
#[derive(Debug, Clone)]
pub enum WeierstrassData {
    /// Rational g and ω̂ on (a domain in) the plane.
    Rational { g: RF, omega: RF },
    /// The genus-1 one-ended family on w² = z(z-1)(z+ν1) with g = ν2 w/z,
    /// ω = z dz/w, on the half-sheet with arg(w_j) ∈ [0, π), j = 1, 2, 3.
    SquareRootSheet { nu1: f64, nu2: f64 },
}

impl WeierstrassData {
    /// (g(z), ω̂(z)) at a point of the working domain.
    pub fn eval(&self, z: C) -> (C, C) {
        match self {
            WeierstrassData::Rational { g, omega } => (eval_rf(g, z), eval_rf(omega, z)),
            WeierstrassData::SquareRootSheet { nu1, nu2 } => {
                let w =
                    half_sheet_sqrt(z) * half_sheet_sqrt(z - 1.0) * half_sheet_sqrt(z + *nu1);
                (*nu2 * w / z, z / w)
            }
        }
    }
}

/// The square root with argument in [0, π).
fn half_sheet_sqrt(z: C) -> C {
    let s = z.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        s
    }
}

pub(crate) fn eval_rf(f: &RF, z: C) -> C {
    let ev = |p: &Poly<ExactScalar>| {
        let mut acc = C::new(0.0, 0.0);
        for c in p.coeffs().iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    };
    ev(f.num()) / ev(f.den())
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// ∫ f over [a, b] by adaptive panel-splitting Gauss–Legendre.
pub fn integrate_real<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, gl: &(Vec<f64>, Vec<f64>)) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        gl.0.iter()
            .zip(gl.1.iter())
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
    fn refine<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        coarse: f64,
        gl: &(Vec<f64>, Vec<f64>),
        depth: usize,
    ) -> f64 {
        let mid = 0.5 * (a + b);
        let left = panel(f, a, mid, gl);
        let right = panel(f, mid, b, gl);
        let fine = left + right;
        if depth > 28 || (fine - coarse).abs() <= tol {
            return fine;
        }
        refine(f, a, mid, tol / 2.0, left, gl, depth + 1)
            + refine(f, mid, b, tol / 2.0, right, gl, depth + 1)
    }
    let gl = gauss_legendre(24);
    let coarse = panel(f, a, b, &gl);
    refine(f, a, b, tol, coarse, &gl, 0)
}

/// Complex line integral of `f` along the straight segment [a, b].
fn integrate_segment<F: Fn(C) -> C>(f: &F, a: C, b: C, tol: f64) -> C {
    let re = integrate_real(&|t| (f(a + (b - a) * t) * (b - a)).re, 0.0, 1.0, tol);
    let im = integrate_real(&|t| (f(a + (b - a) * t) * (b - a)).im, 0.0, 1.0, tol);
    C::new(re, im)
}

/// ℜ ∫ (1 - g², i(1 + g²), 2g) ω along a polyline path.
pub fn weier_integrate(
    data: &WeierstrassData,
    path: &[C],
    tol: f64,
) -> Result<[f64; 3], FlatError> {
    if path.len() < 2 {
        return Ok([0.0, 0.0, 0.0]);
    }
    let mut out = [0.0f64; 3];
    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        for sample in 0..=8 {
            let z = a + (b - a) * (sample as f64 / 8.0);
            let (_, w) = data.eval(z);
            if !w.is_finite() {
                return Err(FlatError::SingularOnPath(format!("ω blows up near {z}")));
            }
        }
        let comp1 = integrate_segment(
            &|z| {
                let (g, w) = data.eval(z);
                (1.0 - g * g) * w
            },
            a,
            b,
            tol,
        );
        let comp2 = integrate_segment(
            &|z| {
                let (g, w) = data.eval(z);
                C::new(0.0, 1.0) * (1.0 + g * g) * w
            },
            a,
            b,
            tol,
        );
        let comp3 = integrate_segment(
            &|z| {
                let (g, w) = data.eval(z);
                2.0 * g * w
            },
            a,
            b,
            tol,
        );
        out[0] += comp1.re;
        out[1] += comp2.re;
        out[2] += comp3.re;
    }
    Ok(out)
}

/// The balancing constant B: ratio of ∫₀¹ x dx/√(x(1-x²)) to
/// ∫₀¹ (1-x²) dx/√(x(1-x²)), with the endpoint singularities removed by
/// x = sin²t. Returns (B, numerator integral, denominator integral).
pub fn b_constant() -> (f64, f64, f64) {
    let i_num = integrate_real(
        &|t| {
            let s = t.sin();
            2.0 * s * s / (1.0 + s * s).sqrt()
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-12,
    );
    let i_den = integrate_real(
        &|t| {
            let c = t.cos();
            let s = t.sin();
            2.0 * c * c * (1.0 + s * s).sqrt()
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-12,
    );
    (i_num / i_den, i_num, i_den)
}

/// The two period functions of the genus-1 deformation family, after the
/// substitution x = sin²t (removing the x^{-1/2} endpoint singularities).
pub fn cg_periods(nu1: f64, nu2: f64) -> (f64, f64) {
    assert!(nu1 > 0.0, "ν1 must be positive");
    let per1 = integrate_real(
        &|t| {
            let s2 = t.sin().powi(2);
            let c2 = t.cos().powi(2);
            2.0 * (s2 - nu2 * nu2 * c2 * (s2 + nu1)) / (s2 + nu1).sqrt()
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-11,
    );
    let inv = 1.0 / nu1;
    let per2 = nu1.sqrt()
        * integrate_real(
            &|t| {
                let s2 = t.sin().powi(2);
                let c2 = t.cos().powi(2);
                2.0 * (s2 - nu1 * nu2 * nu2 * c2 * (s2 + inv)) / (s2 + inv).sqrt()
            },
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-11,
        );
    (per1, per2)
}

/// Newton report for the period problem.
#[derive(Debug, Clone)]
pub struct PeriodReport {
    pub solved_at: (f64, f64),
    pub residual: f64,
    pub jacobian: [[f64; 2]; 2],
    pub jacobian_det: f64,
    pub iterations: usize,
}

impl PeriodReport {
    pub fn to_json(&self) -> Value {
        json!({
            "solved_at": [fmt_f64(self.solved_at.0), fmt_f64(self.solved_at.1)],
            "residual": fmt_f64(self.residual),
            "jacobian": self.jacobian.iter().map(|row| {
                row.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
            "jacobian_det": fmt_f64(self.jacobian_det),
            "iterations": self.iterations,
        })
    }
}

/// Fixed 17-significant-digit float formatting for deterministic reports.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fd_jacobian(nu1: f64, nu2: f64) -> [[f64; 2]; 2] {
    let h1 = 1e-6 * nu1.abs().max(1.0);
    let h2 = 1e-6 * nu2.abs().max(1.0);
    let (p1a, p2a) = cg_periods(nu1 + h1, nu2);
    let (p1b, p2b) = cg_periods(nu1 - h1, nu2);
    let (p1c, p2c) = cg_periods(nu1, nu2 + h2);
    let (p1d, p2d) = cg_periods(nu1, nu2 - h2);
    [
        [(p1a - p1b) / (2.0 * h1), (p1c - p1d) / (2.0 * h2)],
        [(p2a - p2b) / (2.0 * h1), (p2c - p2d) / (2.0 * h2)],
    ]
}

/// Damped Newton on (Per₁, Per₂)(ν1, ν2) with finite-difference Jacobian.
pub fn cg_solve(start: (f64, f64)) -> Result<PeriodReport, FlatError> {
    let (mut nu1, mut nu2) = start;
    if nu1 <= 0.0 || nu2 <= 0.0 {
        return Err(FlatError::ExcludedParameter(
            "start must lie in the positive quadrant".into(),
        ));
    }
    let mut res = residual(nu1, nu2);
    let mut iterations = 0;
    for _ in 0..40 {
        if res < 1e-10 {
            break;
        }
        iterations += 1;
        let j = fd_jacobian(nu1, nu2);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            return Err(FlatError::NewtonDiverged {
                iterations,
                residual: res,
            });
        }
        let (p1, p2) = cg_periods(nu1, nu2);
        let dx = (j[1][1] * p1 - j[0][1] * p2) / det;
        let dy = (-j[1][0] * p1 + j[0][0] * p2) / det;
        // Step halving on residual increase.
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..8 {
            let c1 = nu1 - step * dx;
            let c2 = nu2 - step * dy;
            if c1 > 0.0 && c2 > 0.0 {
                let r = residual(c1, c2);
                if r < res {
                    nu1 = c1;
                    nu2 = c2;
                    res = r;
                    accepted = true;
                    break;
                }
            }
            step /= 2.0;
        }
        if !accepted {
            return Err(FlatError::NewtonDiverged {
                iterations,
                residual: res,
            });
        }
    }
    if res >= 1e-6 {
        return Err(FlatError::NewtonDiverged {
            iterations,
            residual: res,
        });
    }
    let jacobian = fd_jacobian(nu1, nu2);
    let jacobian_det = jacobian[0][0] * jacobian[1][1] - jacobian[0][1] * jacobian[1][0];
    Ok(PeriodReport {
        solved_at: (nu1, nu2),
        residual: res,
        jacobian,
        jacobian_det,
        iterations,
    })
}

fn residual(nu1: f64, nu2: f64) -> f64 {
    let (p1, p2) = cg_periods(nu1, nu2);
    p1.abs().max(p2.abs())
}

/// Period of the two-ended planar family: the residue route (exact rational
/// arithmetic through the residue, floating only in the final 2π multiple)
/// and the closed form -2πν(2 + 2a + ν).
pub fn o33_period(a: &Rat, nu: &Rat) -> Result<(f64, f64), FlatError> {
    // Metric nondegeneracy at z = -1 requires (a+1)² ≠ 2; a = -1 makes the
    // period derivative at ν = 0 vanish, so refuse it as well.
    let one = Rat::from_integer(1.into());
    let two = Rat::from_integer(2.into());
    let ap1 = a + &one;
    if &ap1 * &ap1 == two {
        return Err(FlatError::ExcludedParameter(
            "a = -1 ± √2 degenerates the metric".into(),
        ));
    }
    if *a == -one {
        return Err(FlatError::ExcludedParameter(
            "a = -1 kills dPer/dν at ν = 0".into(),
        ));
    }
    // g = (2z² + 2az - a² - 1)/(2(z+1)) + ν, ω = (z+1)²/z³ dz.
    let a_s = ExactScalar::from_rat(a.clone());
    let nu_s = ExactScalar::from_rat(nu.clone());
    let two_s = ExactScalar::from_int(2);
    let num = Poly::new(vec![
        a_s.mul_ref(&a_s).add_ref(&ExactScalar::one()).neg_ref(),
        two_s.mul_ref(&a_s),
        two_s.clone(),
    ]);
    let den = Poly::new(vec![two_s.clone(), two_s.clone()]);
    let g = RF::new(num, den)
        .expect("nonzero denominator")
        .add(&RF::constant(nu_s));
    let omega = RF::new(
        Poly::from_ints(&[1, 2, 1]),
        Poly::monomial(ExactScalar::one(), 3),
    )
    .expect("nonzero denominator");
    // Per(ν) = ℜ(2πi Res_0 i(1+g²)ω) = -2π Res_0 (1+g²)ω.
    let integrand = RF::one().add(&g.mul(&g)).mul(&omega);
    let res = residue_at(&integrand, &SpherePoint::zero())
        .map_err(|e| FlatError::ExcludedParameter(format!("residue computation failed: {e}")))?;
    let res_rat = res
        .as_rat()
        .expect("rational data yields a rational residue")
        .clone();
    let numeric = -2.0 * std::f64::consts::PI * res_rat.to_f64().unwrap();
    let a_f = a.to_f64().unwrap();
    let nu_f = nu.to_f64().unwrap();
    let closed = -2.0 * std::f64::consts::PI * nu_f * (2.0 + 2.0 * a_f + nu_f);
    Ok((numeric, closed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn enneper_segment_matches_antiderivative() {
        // g = z, ω = dz from 0 to 1: ℜ(z - z³/3, i(z + z³/3), z²) = (2/3, 0, 1)
        let data = WeierstrassData::Rational {
            g: RF::var(),
            omega: RF::one(),
        };
        let out =
            weier_integrate(&data, &[C::new(0.0, 0.0), C::new(1.0, 0.0)], 1e-12).unwrap();
        assert!((out[0] - 2.0 / 3.0).abs() < 1e-10);
        assert!(out[1].abs() < 1e-10);
        assert!((out[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn closed_loop_displacement_vanishes() {
        let data = WeierstrassData::Rational {
            g: RF::var(),
            omega: RF::one(),
        };
        let sq = [
            C::new(0.2, 0.2),
            C::new(1.0, 0.3),
            C::new(0.9, 1.1),
            C::new(0.1, 0.9),
            C::new(0.2, 0.2),
        ];
        let out = weier_integrate(&data, &sq, 1e-12).unwrap();
        for v in out {
            assert!(v.abs() < 1e-9);
        }
    }

    #[test]
    fn path_independence_on_simply_connected_region() {
        let data = WeierstrassData::SquareRootSheet { nu1: 1.0, nu2: 0.8 };
        let a = [C::new(0.0, 2.0), C::new(1.0, 2.0)];
        let b = [C::new(0.0, 2.0), C::new(0.4, 3.0), C::new(1.0, 2.0)];
        let pa = weier_integrate(&data, &a, 1e-11).unwrap();
        let pb = weier_integrate(&data, &b, 1e-11).unwrap();
        for k in 0..3 {
            assert!((pa[k] - pb[k]).abs() < 1e-8, "component {k}");
        }
    }

    #[test]
    fn b_constant_is_positive_and_stable() {
        let (b, i1, i2) = b_constant();
        assert!(b > 0.0 && i1 > 0.0 && i2 > 0.0);
        let again = b_constant();
        assert!((b - again.0).abs() < 1e-12);
        // Per1(1, √B) = Per2(1, √B) = 0 by the definition of B.
        let (p1, p2) = cg_periods(1.0, b.sqrt());
        assert!(p1.abs() < 1e-9, "Per1(1, √B) = {p1}");
        assert!(p2.abs() < 1e-9, "Per2(1, √B) = {p2}");
    }

    #[test]
    fn periods_move_monotonically_in_nu2() {
        let (b, _, _) = b_constant();
        let (p1, _) = cg_periods(1.0, 2.0 * b.sqrt());
        assert!(p1 < 0.0);
        let (p1s, _) = cg_periods(1.0, 0.5 * b.sqrt());
        assert!(p1s > 0.0);
    }

    #[test]
    fn newton_finds_the_balanced_point() {
        let (b, _, _) = b_constant();
        let report = cg_solve((1.1, 1.1 * b.sqrt())).unwrap();
        assert!((report.solved_at.0 - 1.0).abs() < 1e-6);
        assert!((report.solved_at.1 - b.sqrt()).abs() < 1e-6);
        assert!(report.residual < 1e-6);
        assert!(report.jacobian_det.abs() > 1e-3);
        // |∂Per₁/∂ν2| = |∂Per₂/∂ν2| at the solution; the ∂/∂ν1 entries differ.
        let j = report.jacobian;
        assert!((j[0][1].abs() - j[1][1].abs()).abs() < 1e-5);
        assert!((j[0][0].abs() - j[1][0].abs()).abs() > 1e-3);
    }

    #[test]
    fn o33_residue_matches_closed_form() {
        for (an, ad) in [(0i64, 1i64), (1, 2), (-3, 4), (2, 1), (-5, 3)] {
            for (nn, nd) in [(1i64, 10i64), (-1, 5), (3, 7), (1, 2), (-2, 3)] {
                let (num, closed) = o33_period(&rat(an, ad), &rat(nn, nd)).unwrap();
                assert!(
                    (num - closed).abs() < 1e-8 * (1.0 + closed.abs()),
                    "a={an}/{ad} nu={nn}/{nd}: {num} vs {closed}"
                );
            }
        }
        assert!(o33_period(&rat(-1, 1), &rat(1, 10)).is_err());
    }

    #[test]
    fn o33_example_value() {
        // a = 0, ν = 1/10: -2π·(1/10)·(2.1)
        let (num, closed) = o33_period(&rat(0, 1), &rat(1, 10)).unwrap();
        let expect = -2.0 * std::f64::consts::PI * 0.1 * 2.1;
        assert!((closed - expect).abs() < 1e-12);
        assert!((num - expect).abs() < 1e-10);
    }
}
