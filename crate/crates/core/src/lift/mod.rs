//! Numerical geometry of the lift: integrates dF = M(z) F dz along complex
//! paths using only (G, Q), extracts monodromy matrices around ends,
//! samples the immersion f = F F* into the Poincaré ball, and verifies the
//! dual total curvature by quadrature.
//!
//! The coefficient matrix M = ((G, -G²), (1, -G))·(Q̂/G') is trace-free, so
//! det F is a first integral; its drift is the integration quality gauge.
//! Each matrix entry is reduced exactly in rational arithmetic before any
//! floating-point evaluation, so umbilic cancellations and poles of G cost
//! nothing numerically: the entries are holomorphic away from the ends.

use crate::moduli::{SurfaceData, SurfaceSpec};
use crate::symcore::{ExactScalar, Poly, RationalFunction, SpherePoint};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::fmt;

type C = Complex64;
type RF = RationalFunction<ExactScalar>;

#[derive(Debug, Clone, PartialEq)]
pub enum LiftError {
    /// Path comes closer to a singular point than the clearance.
    ClearanceViolated { point: C, distance: f64, clearance: f64 },
    /// Adaptive step shrank below the useful range.
    StepUnderflow { at: C },
    /// det F drifted beyond the allowed budget.
    DetDrift { drift: f64, budget: f64 },
    /// Input data unusable for the lift system.
    BadData(String),
}

impl fmt::Display for LiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftError::ClearanceViolated {
                point,
                distance,
                clearance,
            } => write!(
                f,
                "path at distance {distance:.3e} from singular point {point} (clearance {clearance:.3e})"
            ),
            LiftError::StepUnderflow { at } => write!(f, "step underflow near {at}"),
            LiftError::DetDrift { drift, budget } => {
                write!(f, "det drift {drift:.3e} exceeds {budget:.3e}")
            }
            LiftError::BadData(s) => write!(f, "bad data: {s}"),
        }
    }
}

impl std::error::Error for LiftError {}

/// 2×2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C2x2 {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl C2x2 {
    pub fn identity() -> Self {
        C2x2 {
            a: C::new(1.0, 0.0),
            b: C::new(0.0, 0.0),
            c: C::new(0.0, 0.0),
            d: C::new(1.0, 0.0),
        }
    }

    pub fn mul(&self, o: &C2x2) -> C2x2 {
        C2x2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn det(&self) -> C {
        self.a * self.d - self.b * self.c
    }

    pub fn inv(&self) -> C2x2 {
        let det = self.det();
        C2x2 {
            a: self.d / det,
            b: -self.b / det,
            c: -self.c / det,
            d: self.a / det,
        }
    }

    pub fn sub(&self, o: &C2x2) -> C2x2 {
        C2x2 {
            a: self.a - o.a,
            b: self.b - o.b,
            c: self.c - o.c,
            d: self.d - o.d,
        }
    }

    pub fn add(&self, o: &C2x2) -> C2x2 {
        C2x2 {
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c,
            d: self.d + o.d,
        }
    }

    pub fn scale(&self, s: C) -> C2x2 {
        C2x2 {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    pub fn eigenvalues(&self) -> (C, C) {
        let tr = self.a + self.d;
        let disc = (tr * tr - 4.0 * self.det()).sqrt();
        ((tr + disc) / 2.0, (tr - disc) / 2.0)
    }
}

/// Numerically evaluable rational function (Horner on both parts).
#[derive(Debug, Clone)]
struct NumRf {
    num: Vec<C>,
    den: Vec<C>,
}

impl NumRf {
    fn from_exact(f: &RF) -> Self {
        let conv = |p: &Poly<ExactScalar>| p.coeffs().iter().map(|c| c.to_c64()).collect();
        NumRf {
            num: conv(f.num()),
            den: conv(f.den()),
        }
    }

    fn eval(&self, z: C) -> C {
        horner(&self.num, z) / horner(&self.den, z)
    }
}

fn horner(coeffs: &[C], z: C) -> C {
    let mut acc = C::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Prepared lift system for one set of surface data.
#[derive(Debug, Clone)]
pub struct LiftSystem {
    m11: NumRf,
    m12: NumRf,
    m21: NumRf,
    g: NumRf,
    /// Finite singular points (the finite ends).
    pub singular: Vec<C>,
    /// Default clearance: 0.05 × the minimal pairwise singular distance.
    pub clearance: f64,
}

impl LiftSystem {
    /// Build from exact (G, Q): entries are reduced exactly first, so all
    /// umbilic and pole-of-G cancellations happen in rational arithmetic.
    pub fn new(g: &RF, q_density: &RF, ends: &[SpherePoint]) -> Result<Self, LiftError> {
        if g.is_constant() {
            return Err(LiftError::BadData("constant G".into()));
        }
        let gp = g.derivative();
        let eta = q_density
            .div(&gp)
            .map_err(|e| LiftError::BadData(format!("{e}")))?;
        let m11 = g.mul(&eta);
        let m12 = g.mul(&g).mul(&eta).neg();
        let m21 = eta;
        let singular: Vec<C> = ends
            .iter()
            .filter_map(|e| match e {
                SpherePoint::Finite(x) => Some(x.to_c64()),
                SpherePoint::Infinity => None,
            })
            .collect();
        let mut min_dist = f64::INFINITY;
        for i in 0..singular.len() {
            for j in (i + 1)..singular.len() {
                min_dist = min_dist.min((singular[i] - singular[j]).norm());
            }
        }
        if !min_dist.is_finite() {
            min_dist = 1.0;
        }
        Ok(LiftSystem {
            m11: NumRf::from_exact(&m11),
            m12: NumRf::from_exact(&m12),
            m21: NumRf::from_exact(&m21),
            g: NumRf::from_exact(g),
            singular,
            clearance: 0.05 * min_dist,
        })
    }

    pub fn from_spec(spec: &SurfaceSpec) -> Result<Self, LiftError> {
        match &spec.data {
            SurfaceData::Rational { g, q_density } => Self::new(g, q_density, &spec.ends),
            _ => Err(LiftError::BadData("lift needs rational (G, Q) data".into())),
        }
    }

    /// Trace-free coefficient matrix M(z).
    pub fn coefficient_matrix(&self, z: C) -> C2x2 {
        let m11 = self.m11.eval(z);
        C2x2 {
            a: m11,
            b: self.m12.eval(z),
            c: self.m21.eval(z),
            d: -m11,
        }
    }

    pub fn eval_g(&self, z: C) -> C {
        self.g.eval(z)
    }
}

/// One leg of an integration path.
#[derive(Debug, Clone, Copy)]
pub enum PathSeg {
    Line(C, C),
    /// Circular arc center + radius, from angle a0 to a1 (radians; a1 > a0
    /// runs counterclockwise).
    Arc { center: C, radius: f64, a0: f64, a1: f64 },
}

impl PathSeg {
    fn at(&self, t: f64) -> (C, C) {
        match *self {
            PathSeg::Line(a, b) => (a + (b - a) * t, b - a),
            PathSeg::Arc {
                center,
                radius,
                a0,
                a1,
            } => {
                let ang = a0 + (a1 - a0) * t;
                let e = C::new(0.0, 1.0) * C::new(ang.cos(), ang.sin());
                (
                    center + radius * C::new(ang.cos(), ang.sin()),
                    radius * (a1 - a0) * e,
                )
            }
        }
    }

    fn length(&self) -> f64 {
        match *self {
            PathSeg::Line(a, b) => (b - a).norm(),
            PathSeg::Arc { radius, a0, a1, .. } => radius * (a1 - a0).abs(),
        }
    }

    fn min_distance_to(&self, p: C) -> f64 {
        // Sampled lower bound; adequate for clearance checking.
        let mut d = f64::INFINITY;
        for k in 0..=64 {
            let (z, _) = self.at(k as f64 / 64.0);
            d = d.min((z - p).norm());
        }
        d
    }

    pub fn start(&self) -> C {
        self.at(0.0).0
    }

    pub fn end(&self) -> C {
        self.at(1.0).0
    }
}

/// State after integrating the lift along a path.
#[derive(Debug, Clone)]
pub struct LiftState {
    pub f: C2x2,
    pub z: C,
    pub path_arclength: f64,
    /// max |det F - 1| observed along the way.
    pub max_det_drift: f64,
}

/// Dormand–Prince 5(4) adaptive integration of F' = M(z(t)) F z'(t) along
/// the path. The det-drift invariant |det F - 1| ≤ 1e-9 (1 + L) is enforced.
pub fn integrate_lift(
    system: &LiftSystem,
    path: &[PathSeg],
    f0: C2x2,
    tol: f64,
    clearance: Option<f64>,
) -> Result<LiftState, LiftError> {
    let clearance = clearance.unwrap_or(system.clearance);
    for seg in path {
        for &s in &system.singular {
            let d = seg.min_distance_to(s);
            if d < clearance {
                return Err(LiftError::ClearanceViolated {
                    point: s,
                    distance: d,
                    clearance,
                });
            }
        }
    }
    let mut f = f0;
    let mut arclength = 0.0;
    let mut max_drift = (f.det() - C::new(1.0, 0.0)).norm();
    let mut max_f_norm = f.norm();
    let mut z_now = path.first().map(|s| s.start()).unwrap_or(C::new(0.0, 0.0));
    for seg in path {
        let mut t = 0.0f64;
        let mut h = 0.05f64;
        let rhs = |t: f64, f: &C2x2| -> C2x2 {
            let (z, dz) = seg.at(t);
            system.coefficient_matrix(z).mul(f).scale(dz)
        };
        while t < 1.0 {
            if h < 1e-13 {
                return Err(LiftError::StepUnderflow { at: seg.at(t).0 });
            }
            let h_eff = h.min(1.0 - t);
            let (f_next, err) = dp54_step(&rhs, t, &f, h_eff);
            let scale = tol * (1.0 + f.norm());
            if err <= scale || h_eff < 1e-12 {
                t += h_eff;
                f = f_next;
                max_f_norm = max_f_norm.max(f.norm());
                let drift = (f.det() - C::new(1.0, 0.0)).norm();
                max_drift = max_drift.max(drift);
            }
            if 1.0 - t < 1e-12 {
                t = 1.0;
            }
            // PI-free step control with the usual safety factor.
            let ratio = if err > 0.0 { scale / err } else { 10.0 };
            h = (h_eff * 0.9 * ratio.powf(0.2)).clamp(h_eff * 0.1, h_eff * 5.0).max(1e-14);
        }
        arclength += seg.length();
        z_now = seg.end();
    }
    // The drift target is 1e-9·(1+L) at production tolerances; coarser
    // requested tolerances get a proportional budget, and a rounding floor
    // of order ε‖F‖² covers lifts that grow large along the path (det of a
    // size-A matrix cannot beat machine epsilon times A²).
    let budget = (1.0 + arclength) * (1e-9f64).max(10.0 * tol)
        + 2e-15 * max_f_norm * max_f_norm;
    if max_drift > budget {
        return Err(LiftError::DetDrift {
            drift: max_drift,
            budget,
        });
    }
    Ok(LiftState {
        f,
        z: z_now,
        path_arclength: arclength,
        max_det_drift: max_drift,
    })
}

/// Classical Dormand–Prince 5(4) embedded step; returns (y5, error norm).
fn dp54_step<F: Fn(f64, &C2x2) -> C2x2>(rhs: &F, t: f64, y: &C2x2, h: f64) -> (C2x2, f64) {
    let hc = |x: f64| C::new(x * h, 0.0);
    let k1 = rhs(t, y);
    let y2 = y.add(&k1.scale(hc(1.0 / 5.0)));
    let k2 = rhs(t + h / 5.0, &y2);
    let y3 = y.add(&k1.scale(hc(3.0 / 40.0))).add(&k2.scale(hc(9.0 / 40.0)));
    let k3 = rhs(t + 3.0 * h / 10.0, &y3);
    let y4 = y
        .add(&k1.scale(hc(44.0 / 45.0)))
        .add(&k2.scale(hc(-56.0 / 15.0)))
        .add(&k3.scale(hc(32.0 / 9.0)));
    let k4 = rhs(t + 4.0 * h / 5.0, &y4);
    let y5 = y
        .add(&k1.scale(hc(19372.0 / 6561.0)))
        .add(&k2.scale(hc(-25360.0 / 2187.0)))
        .add(&k3.scale(hc(64448.0 / 6561.0)))
        .add(&k4.scale(hc(-212.0 / 729.0)));
    let k5 = rhs(t + 8.0 * h / 9.0, &y5);
    let y6 = y
        .add(&k1.scale(hc(9017.0 / 3168.0)))
        .add(&k2.scale(hc(-355.0 / 33.0)))
        .add(&k3.scale(hc(46732.0 / 5247.0)))
        .add(&k4.scale(hc(49.0 / 176.0)))
        .add(&k5.scale(hc(-5103.0 / 18656.0)));
    let k6 = rhs(t + h, &y6);
    let y_out = y
        .add(&k1.scale(hc(35.0 / 384.0)))
        .add(&k3.scale(hc(500.0 / 1113.0)))
        .add(&k4.scale(hc(125.0 / 192.0)))
        .add(&k5.scale(hc(-2187.0 / 6784.0)))
        .add(&k6.scale(hc(11.0 / 84.0)));
    let k7 = rhs(t + h, &y_out);
    // 4th-order weights for the error estimate.
    let y_hat = y
        .add(&k1.scale(hc(5179.0 / 57600.0)))
        .add(&k3.scale(hc(7571.0 / 16695.0)))
        .add(&k4.scale(hc(393.0 / 640.0)))
        .add(&k5.scale(hc(-92097.0 / 339200.0)))
        .add(&k6.scale(hc(187.0 / 2100.0)))
        .add(&k7.scale(hc(1.0 / 40.0)));
    let err = y_out.sub(&y_hat).norm();
    (y_out, err)
}

/// Sample the lift at equally spaced parameter points along a path,
/// integrating adaptively between samples.
pub fn integrate_with_samples(
    system: &LiftSystem,
    path: &[PathSeg],
    f0: C2x2,
    tol: f64,
    samples_per_seg: usize,
) -> Result<Vec<(C, C2x2)>, LiftError> {
    let mut out = vec![];
    let mut f = f0;
    for seg in path {
        for k in 0..samples_per_seg {
            let t0 = k as f64 / samples_per_seg as f64;
            let t1 = (k + 1) as f64 / samples_per_seg as f64;
            let sub = match *seg {
                PathSeg::Line(a, b) => {
                    PathSeg::Line(a + (b - a) * t0, a + (b - a) * t1)
                }
                PathSeg::Arc {
                    center,
                    radius,
                    a0,
                    a1,
                } => PathSeg::Arc {
                    center,
                    radius,
                    a0: a0 + (a1 - a0) * t0,
                    a1: a0 + (a1 - a0) * t1,
                },
            };
            let (z, _) = sub.at(0.0);
            out.push((z, f));
            let state = integrate_lift(system, &[sub], f, tol, None)?;
            f = state.f;
        }
    }
    if let Some(seg) = path.last() {
        out.push((seg.end(), f));
    }
    Ok(out)
}

/// Finite-difference secondary Gauss map g = -dF12/dF11 along a sampled
/// path. `None` marks samples where dF11 degenerates.
pub fn secondary_gauss_numeric(samples: &[(C, C2x2)]) -> Vec<Option<C>> {
    let n = samples.len();
    let mut out = vec![None; n];
    for k in 1..n.saturating_sub(1) {
        let df11 = samples[k + 1].1.a - samples[k - 1].1.a;
        let df12 = samples[k + 1].1.b - samples[k - 1].1.b;
        if df11.norm() > 1e-12 {
            out[k] = Some(-df12 / df11);
        }
    }
    out
}

/// Monodromy classification of the loop family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonodromyClass {
    IdentityLike,
    CommutingUnitary,
    NonUnitarizable,
    Indeterminate,
}

impl fmt::Display for MonodromyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonodromyClass::IdentityLike => write!(f, "identity-like"),
            MonodromyClass::CommutingUnitary => write!(f, "commuting-unitary"),
            MonodromyClass::NonUnitarizable => write!(f, "non-unitarizable"),
            MonodromyClass::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoopReport {
    pub end: SpherePoint,
    pub base: C,
    pub radius: f64,
    pub rho: C2x2,
    /// min(‖ρ - I‖, ‖ρ + I‖): distance from the (sign-lifted) identity.
    pub identity_deviation: f64,
    pub eigenvalues: (C, C),
}

#[derive(Debug, Clone)]
pub struct MonodromyReport {
    pub loops: Vec<LoopReport>,
    pub class: MonodromyClass,
    /// ‖Π ρ_j ∓ I‖ minimized over the sign.
    pub product_deviation: f64,
    pub tolerance: f64,
}

impl MonodromyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "class": self.class.to_string(),
            "tolerance": fmt_f64(self.tolerance),
            "product_deviation": fmt_f64(self.product_deviation),
            "loops": self.loops.iter().map(|l| json!({
                "end": l.end.to_string(),
                "base": [fmt_f64(l.base.re), fmt_f64(l.base.im)],
                "radius": fmt_f64(l.radius),
                "rho": [
                    [fmt_f64(l.rho.a.re), fmt_f64(l.rho.a.im)],
                    [fmt_f64(l.rho.b.re), fmt_f64(l.rho.b.im)],
                    [fmt_f64(l.rho.c.re), fmt_f64(l.rho.c.im)],
                    [fmt_f64(l.rho.d.re), fmt_f64(l.rho.d.im)],
                ],
                "deviation": fmt_f64(l.identity_deviation),
            })).collect::<Vec<_>>(),
        })
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Monodromy around each end, measured on lassos from a common base point
/// so loop matrices compose. For the end at ∞ the loop is a large circle
/// and ρ_∞ is reported as the inverse of its continuation, so that the
/// product over all ends is ±identity.
pub fn monodromy(
    system: &LiftSystem,
    base: C,
    ends: &[SpherePoint],
    tol_int: f64,
    tol_mono: f64,
) -> Result<MonodromyReport, LiftError> {
    let mut loops = vec![];
    for end in ends {
        let (rho, radius) = match end {
            SpherePoint::Finite(x) => {
                let p = x.to_c64();
                let mut r = 0.45 * (base - p).norm();
                for &s in &system.singular {
                    if (s - p).norm() > 1e-12 {
                        r = r.min(0.45 * (s - p).norm());
                    }
                }
                let dir = (base - p) / (base - p).norm();
                let start = p + r * dir;
                let ang0 = (start - p).im.atan2((start - p).re);
                let path = [
                    PathSeg::Line(base, start),
                    PathSeg::Arc {
                        center: p,
                        radius: r,
                        a0: ang0,
                        a1: ang0 + 2.0 * std::f64::consts::PI,
                    },
                    PathSeg::Line(start, base),
                ];
                let clearance = (0.5 * r).min(system.clearance);
                let state =
                    integrate_lift(system, &path, C2x2::identity(), tol_int, Some(clearance))?;
                // ρ = (F_start⁻¹ F_loop)⁻¹ with F_start = I.
                (state.f.inv(), r)
            }
            SpherePoint::Infinity => {
                let mut r_big = 2.0 * (1.0 + base.norm());
                for &s in &system.singular {
                    r_big = r_big.max(2.5 * (s.norm() + 1.0));
                }
                let dir = if base.norm() > 1e-9 {
                    base / base.norm()
                } else {
                    C::new(1.0, 0.0)
                };
                let start = r_big * dir;
                let ang0 = start.im.atan2(start.re);
                let path = [
                    PathSeg::Line(base, start),
                    PathSeg::Arc {
                        center: C::new(0.0, 0.0),
                        radius: r_big,
                        a0: ang0,
                        a1: ang0 + 2.0 * std::f64::consts::PI,
                    },
                    PathSeg::Line(start, base),
                ];
                // The lift grows along the long outer loop; a tighter local
                // tolerance keeps the det drift within the global budget.
                let state =
                    integrate_lift(system, &path, C2x2::identity(), tol_int / 20.0, None)?;
                // The big counterclockwise circle encloses all finite ends;
                // seen from ∞ the loop runs backwards, so invert once more.
                (state.f, r_big)
            }
        };
        let dev_plus = rho.sub(&C2x2::identity()).norm();
        let dev_minus = rho.add(&C2x2::identity()).norm();
        loops.push(LoopReport {
            end: end.clone(),
            base,
            radius,
            rho,
            identity_deviation: dev_plus.min(dev_minus),
            eigenvalues: rho.eigenvalues(),
        });
    }
    // Product relation: Π ρ_j ≈ ±I.
    let mut prod = C2x2::identity();
    for l in &loops {
        prod = prod.mul(&l.rho);
    }
    let product_deviation = prod
        .sub(&C2x2::identity())
        .norm()
        .min(prod.add(&C2x2::identity()).norm());
    // Classification.
    let identity_like = loops.iter().all(|l| l.identity_deviation < tol_mono);
    let class = if identity_like {
        MonodromyClass::IdentityLike
    } else {
        let unimodular = loops.iter().all(|l| {
            let (e1, e2) = l.eigenvalues;
            (e1.norm() - 1.0).abs() < tol_mono && (e2.norm() - 1.0).abs() < tol_mono
        });
        let mut commuting = true;
        for i in 0..loops.len() {
            for j in (i + 1)..loops.len() {
                let ab = loops[i].rho.mul(&loops[j].rho);
                let ba = loops[j].rho.mul(&loops[i].rho);
                if ab.sub(&ba).norm() > tol_mono.max(1e-12) * 10.0 {
                    commuting = false;
                }
            }
        }
        if unimodular && commuting {
            MonodromyClass::CommutingUnitary
        } else if loops
            .iter()
            .all(|l| (l.rho.det() - C::new(1.0, 0.0)).norm() < 1e-8)
        {
            MonodromyClass::NonUnitarizable
        } else {
            MonodromyClass::Indeterminate
        }
    };
    Ok(MonodromyReport {
        loops,
        class,
        product_deviation,
        tolerance: tol_mono,
    })
}

/// F F* written in the Hermitian basis; returns the open-ball point
/// (x1, x2, x3)/(1 + x0).
pub fn immerse(f: &C2x2) -> [f64; 3] {
    let x11 = f.a.norm_sqr() + f.b.norm_sqr();
    let x22 = f.c.norm_sqr() + f.d.norm_sqr();
    let x12 = f.a * f.c.conj() + f.b * f.d.conj();
    let x0 = 0.5 * (x11 + x22);
    let x3 = 0.5 * (x11 - x22);
    let x1 = x12.re;
    let x2 = -x12.im;
    let s = 1.0 / (1.0 + x0);
    [x1 * s, x2 * s, x3 * s]
}

/// Dual immersion point from the same lift: F ↦ F⁻¹ (F⁻¹)*.
pub fn immerse_dual(f: &C2x2) -> [f64; 3] {
    immerse(&f.inv())
}

/// Spherical area of the image of G (with multiplicity): adaptive polar
/// quadrature of 4|G'|²/(1+|G|²)² over both charts of the sphere. The
/// integrand is evaluated through 1/G wherever |G| > 1, so poles cost
/// nothing.
pub fn numeric_ta(g: &RF, rel_tol: f64) -> f64 {
    let gp = g.derivative();
    let gn = NumRf::from_exact(g);
    let gpn = NumRf::from_exact(&gp);
    let g_inv = g.subst_inv();
    let g_inv_p = g_inv.derivative();
    let hn = NumRf::from_exact(&g_inv);
    let hpn = NumRf::from_exact(&g_inv_p);
    let density = |f: &NumRf, fp: &NumRf, z: C| -> f64 {
        let v = f.eval(z);
        let d = fp.eval(z);
        if v.is_finite() && v.norm_sqr() <= 1.0 {
            4.0 * d.norm_sqr() / (1.0 + v.norm_sqr()).powi(2)
        } else {
            // Work through w = 1/f: |w'|/(1+|w|²) = |f'|/(1+|f|²).
            let w = 1.0 / v;
            let wp = -d * w * w;
            if w.is_finite() && wp.is_finite() {
                4.0 * wp.norm_sqr() / (1.0 + w.norm_sqr()).powi(2)
            } else {
                0.0
            }
        }
    };
    let disk = |f: &NumRf, fp: &NumRf, nr: usize, nphi: usize| -> f64 {
        let (nodes, weights) = crate::flatlab::gauss_legendre(nr);
        let mut total = 0.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let r = 0.5 * (x + 1.0);
            let mut ring = 0.0;
            for k in 0..nphi {
                let phi = 2.0 * std::f64::consts::PI * (k as f64) / (nphi as f64);
                let z = C::new(r * phi.cos(), r * phi.sin());
                ring += density(f, fp, z);
            }
            total += w * 0.5 * r * ring * 2.0 * std::f64::consts::PI / (nphi as f64);
        }
        total
    };
    let mut nr = 24;
    let mut nphi = 48;
    let mut prev = disk(&gn, &gpn, nr, nphi) + disk(&hn, &hpn, nr, nphi);
    loop {
        nr *= 2;
        nphi *= 2;
        let cur = disk(&gn, &gpn, nr, nphi) + disk(&hn, &hpn, nr, nphi);
        if (cur - prev).abs() <= rel_tol * cur.abs() || nr > 400 {
            return cur;
        }
        prev = cur;
    }
}

/// Triangulated immersion sample.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[u32; 3]>,
    /// Per-vertex (domain coordinate, |G|).
    pub attrs: Vec<(C, f64)>,
    pub max_det_drift: f64,
    /// For annulus domains: worst immersed mismatch across the angular seam.
    pub seam_mismatch: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub enum MeshDomain {
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
    /// Annulus around `center`, radii r0 < r1, with the seam cut along the
    /// ray at angle `cut` (radians). Cut placement is the caller's choice;
    /// there is no canonical one.
    Annulus { center: C, r0: f64, r1: f64, cut: f64 },
}

/// Integrate the lift over a spanning tree of the domain grid and immerse
/// every vertex. `dual` immerses F⁻¹ instead.
pub fn mesh(
    system: &LiftSystem,
    domain: MeshDomain,
    res: (usize, usize),
    f0: C2x2,
    tol: f64,
    dual: bool,
) -> Result<Mesh, LiftError> {
    let (nu, nv) = res;
    assert!(nu >= 1 && nv >= 1);
    let grid_point = |i: usize, j: usize| -> C {
        match domain {
            MeshDomain::Rect { x0, x1, y0, y1 } => C::new(
                x0 + (x1 - x0) * (i as f64) / (nu as f64),
                y0 + (y1 - y0) * (j as f64) / (nv as f64),
            ),
            MeshDomain::Annulus { center, r0, r1, cut } => {
                let r = r0 + (r1 - r0) * (j as f64) / (nv as f64);
                let phi = cut + 2.0 * std::f64::consts::PI * (i as f64) / (nu as f64);
                center + C::new(r * phi.cos(), r * phi.sin())
            }
        }
    };
    let cols = nu + 1;
    let rows = nv + 1;
    let mut fs: Vec<Option<C2x2>> = vec![None; cols * rows];
    let idx = |i: usize, j: usize| j * cols + i;
    let mut max_drift = 0.0f64;
    // First sweep along the j = 0 edge, then each column upward. Segments
    // in the annulus case follow arcs so the seam accumulates the full
    // angular monodromy.
    fs[idx(0, 0)] = Some(f0);
    for i in 1..cols {
        let prev = fs[idx(i - 1, 0)].unwrap();
        let seg = match domain {
            MeshDomain::Rect { .. } => PathSeg::Line(grid_point(i - 1, 0), grid_point(i, 0)),
            MeshDomain::Annulus {
                center, r0, cut, ..
            } => {
                let two_pi = 2.0 * std::f64::consts::PI;
                PathSeg::Arc {
                    center,
                    radius: r0,
                    a0: cut + two_pi * ((i - 1) as f64) / (nu as f64),
                    a1: cut + two_pi * (i as f64) / (nu as f64),
                }
            }
        };
        let state = integrate_lift(system, &[seg], prev, tol, None)?;
        max_drift = max_drift.max(state.max_det_drift);
        fs[idx(i, 0)] = Some(state.f);
    }
    for i in 0..cols {
        for j in 1..rows {
            let prev = fs[idx(i, j - 1)].unwrap();
            let seg = PathSeg::Line(grid_point(i, j - 1), grid_point(i, j));
            let state = integrate_lift(system, &[seg], prev, tol, None)?;
            max_drift = max_drift.max(state.max_det_drift);
            fs[idx(i, j)] = Some(state.f);
        }
    }
    let mut vertices = Vec::with_capacity(cols * rows);
    let mut attrs = Vec::with_capacity(cols * rows);
    for j in 0..rows {
        for i in 0..cols {
            let f = fs[idx(i, j)].unwrap();
            let p = if dual { immerse_dual(&f) } else { immerse(&f) };
            debug_assert!(p.iter().map(|x| x * x).sum::<f64>() < 1.0);
            vertices.push(p);
            let z = grid_point(i, j);
            attrs.push((z, system.eval_g(z).norm()));
        }
    }
    let mut faces = vec![];
    for j in 0..nv {
        for i in 0..nu {
            let v00 = (j * cols + i) as u32;
            let v10 = (j * cols + i + 1) as u32;
            let v01 = ((j + 1) * cols + i) as u32;
            let v11 = ((j + 1) * cols + i + 1) as u32;
            faces.push([v00, v10, v11]);
            faces.push([v00, v11, v01]);
        }
    }
    let seam_mismatch = match domain {
        MeshDomain::Annulus { .. } => {
            // Column 0 and column nu sit at the same domain points; their
            // immersed images differ by the (sign-lifted) monodromy action.
            let mut worst = 0.0f64;
            for j in 0..rows {
                let a = vertices[idx(0, j)];
                let b = vertices[idx(nu, j)];
                let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2))
                    .sqrt();
                worst = worst.max(d);
            }
            Some(worst)
        }
        _ => None,
    };
    Ok(Mesh {
        vertices,
        faces,
        attrs,
        max_det_drift: max_drift,
        seam_mismatch,
    })
}

/// Wavefront OBJ with counterclockwise winding.
pub fn mesh_to_obj(mesh: &Mesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        out.push_str(&format!("v {:.17} {:.17} {:.17}\n", v[0], v[1], v[2]));
    }
    for f in &mesh.faces {
        out.push_str(&format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1));
    }
    out
}

#[cfg(test)]
mod tests;
