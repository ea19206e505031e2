//! Numeric Weierstrass functions on a lattice Γ = Zv1 + Zv2.
//!
//! The evaluators are built from the Eisenstein invariants g2, g3 (computed
//! once per lattice from rapidly convergent q-series after Gauss basis
//! reduction) rather than from raw truncated lattice sums, whose O(1/R)
//! tails cannot reach the advertised tolerances. ℘ and ζ use their Laurent
//! series after reduction to the fundamental cell, with duplication to pull
//! arguments inside the convergence disk; σ uses exact quasi-periodicity
//! with the η constants and its log-series on the disk.

use num_complex::Complex64;
use std::f64::consts::PI;

type C = Complex64;

#[derive(Debug, Clone)]
pub struct EllipticLattice {
    /// Reduced, positively oriented basis.
    pub v1: C,
    pub v2: C,
    /// Original (caller-supplied) generators.
    pub raw_v1: C,
    pub raw_v2: C,
    pub g2: C,
    pub g3: C,
    /// Quasi-period constants: σ(z + v_k) = -σ(z) e^{η_k (z + v_k/2)}.
    pub eta1: C,
    pub eta2: C,
    /// Laurent coefficients c_k of ℘(z) = z⁻² + Σ c_k z^{2k}.
    laurent: Vec<C>,
    min_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EllipticError {
    DegenerateLattice,
    LatticePoint,
}

impl std::fmt::Display for EllipticError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EllipticError::DegenerateLattice => write!(f, "generators are R-linearly dependent"),
            EllipticError::LatticePoint => write!(f, "evaluation at a lattice point"),
        }
    }
}

impl std::error::Error for EllipticError {}

const LAURENT_TERMS: usize = 64;
const SERIES_RADIUS: f64 = 0.45;

impl EllipticLattice {
    pub fn new(v1: C, v2: C) -> Result<Self, EllipticError> {
        let det = v1.re * v2.im - v1.im * v2.re;
        if det.abs() < 1e-12 * v1.norm() * v2.norm() {
            return Err(EllipticError::DegenerateLattice);
        }
        let (b1, b2) = reduce_basis(v1, v2);
        // Orient so Im(b2/b1) > 0.
        let tau = b2 / b1;
        let (b2, tau) = if tau.im < 0.0 { (-b2, -tau) } else { (b2, tau) };
        let q = (C::new(0.0, 2.0 * PI) * tau).exp();
        let (e4, e6) = eisenstein(q);
        // G4 = π⁴/45 E4 / v1⁴, G6 = 2π⁶/945 E6 / v1⁶ on the scaled lattice.
        let g4 = C::new(PI.powi(4) / 45.0, 0.0) * e4 / b1.powi(4);
        let g6 = C::new(2.0 * PI.powi(6) / 945.0, 0.0) * e6 / b1.powi(6);
        let g2 = 60.0 * g4;
        let g3 = 140.0 * g6;
        let laurent = laurent_coeffs(g2, g3);
        let min_norm = b1.norm();
        let mut lat = EllipticLattice {
            v1: b1,
            v2: b2,
            raw_v1: v1,
            raw_v2: v2,
            g2,
            g3,
            eta1: C::new(0.0, 0.0),
            eta2: C::new(0.0, 0.0),
            laurent,
            min_norm,
        };
        // η1 = 2ζ(v1/2) from the ζ series (|v1/2| is inside the disk after
        // one halving); η2 from the Legendre relation η1 v2 - η2 v1 = 2πi.
        lat.eta1 = 2.0 * lat.zeta_series_reduced(b1 / 2.0);
        lat.eta2 = (lat.eta1 * b2 - C::new(0.0, 2.0 * PI)) / b1;
        Ok(lat)
    }

    pub fn min_period_norm(&self) -> f64 {
        self.min_norm
    }

    /// Nearest-lattice-point reduction: z = z0 + m v1 + n v2 with z0 in
    /// (a neighborhood of) the Voronoi cell of 0.
    fn reduce(&self, z: C) -> (C, i64, i64) {
        let det = self.v1.re * self.v2.im - self.v1.im * self.v2.re;
        let a = (z.re * self.v2.im - z.im * self.v2.re) / det;
        let b = (self.v1.re * z.im - self.v1.im * z.re) / det;
        let (m0, n0) = (a.round() as i64, b.round() as i64);
        let mut best = (z, 0i64, 0i64);
        let mut best_norm = f64::INFINITY;
        for dm in -1..=1 {
            for dn in -1..=1 {
                let m = m0 + dm;
                let n = n0 + dn;
                let w = z - (m as f64) * self.v1 - (n as f64) * self.v2;
                if w.norm() < best_norm {
                    best_norm = w.norm();
                    best = (w, m, n);
                }
            }
        }
        best
    }

    fn p_series(&self, z: C) -> C {
        let z2 = z * z;
        let mut acc = C::new(0.0, 0.0);
        let mut pw = z2;
        for c in &self.laurent {
            acc += c * pw;
            pw *= z2;
        }
        1.0 / z2 + acc
    }

    fn p_prime_series(&self, z: C) -> C {
        let z2 = z * z;
        let mut acc = C::new(0.0, 0.0);
        let mut pw = z;
        for (k, c) in self.laurent.iter().enumerate() {
            let e = 2.0 * (k as f64 + 1.0);
            acc += c * e * pw;
            pw *= z2;
        }
        -2.0 / (z * z2) + acc
    }

    fn zeta_series(&self, z: C) -> C {
        let z2 = z * z;
        let mut acc = C::new(0.0, 0.0);
        let mut pw = z * z2;
        for (k, c) in self.laurent.iter().enumerate() {
            let e = 2.0 * (k as f64 + 1.0) + 1.0;
            acc += c * pw / e;
            pw *= z2;
        }
        1.0 / z - acc
    }

    /// log(σ(z)/z) on the series disk.
    fn log_sigma_over_z(&self, z: C) -> C {
        let z2 = z * z;
        let mut acc = C::new(0.0, 0.0);
        let mut pw = z2 * z2;
        for (k, c) in self.laurent.iter().enumerate() {
            let e1 = 2.0 * (k as f64 + 1.0) + 1.0;
            let e2 = e1 + 1.0;
            acc += c * pw / (e1 * e2);
            pw *= z2;
        }
        -acc
    }

    fn zeta_series_reduced(&self, z: C) -> C {
        // ζ(2u) = 2ζ(u) + ℘'(u)/(2℘(u) - e-sum)… avoid the addition law:
        // halve until inside the disk using ζ(2u) = 2ζ(u) + ½ ℘''(u)/℘'(u)? —
        // instead use the clean duplication ζ(2u) = 2ζ(u) + ½ ℘''(u)/℘'(u).
        let r = z.norm() / self.min_norm;
        if r <= SERIES_RADIUS {
            return self.zeta_series(z);
        }
        let u = z / 2.0;
        let zu = self.zeta_series_reduced(u);
        let (p, pp) = self.p_pair_reduced(u);
        let ppp = 6.0 * p * p - self.g2 / 2.0;
        2.0 * zu + 0.5 * ppp / pp
    }

    /// (℘(u), ℘'(u)) with halving/duplication, no lattice reduction.
    fn p_pair_reduced(&self, z: C) -> (C, C) {
        let r = z.norm() / self.min_norm;
        if r <= SERIES_RADIUS {
            return (self.p_series(z), self.p_prime_series(z));
        }
        let u = z / 2.0;
        let (p, pp) = self.p_pair_reduced(u);
        let ppp = 6.0 * p * p - self.g2 / 2.0;
        let p2 = 0.25 * (ppp / pp) * (ppp / pp) - 2.0 * p;
        // ℘'(2u) = ℘''(12℘℘'² - ℘''²)/(4℘'³) - ℘'
        let pp2 = ppp * (12.0 * p * pp * pp - ppp * ppp) / (4.0 * pp * pp * pp) - pp;
        (p2, pp2)
    }

    /// Weierstrass ℘.
    pub fn wp(&self, z: C) -> Result<C, EllipticError> {
        let (z0, _, _) = self.reduce(z);
        if z0.norm() < 1e-12 * self.min_norm {
            return Err(EllipticError::LatticePoint);
        }
        Ok(self.p_pair_reduced(z0).0)
    }

    /// ℘'.
    pub fn wp_prime(&self, z: C) -> Result<C, EllipticError> {
        let (z0, _, _) = self.reduce(z);
        if z0.norm() < 1e-12 * self.min_norm {
            return Err(EllipticError::LatticePoint);
        }
        Ok(self.p_pair_reduced(z0).1)
    }

    /// Weierstrass σ (entire, odd, σ(z) ~ z at 0).
    pub fn sigma(&self, z: C) -> C {
        let (z0, m, n) = self.reduce(z);
        // σ(z0 + m v1 + n v2) =
        //   (-1)^{m+n+mn} σ(z0) exp((m η1 + n η2)(z0 + (m v1 + n v2)/2))
        let omega = (m as f64) * self.v1 + (n as f64) * self.v2;
        let eta = (m as f64) * self.eta1 + (n as f64) * self.eta2;
        let sign = if (m + n + m * n) % 2 == 0 { 1.0 } else { -1.0 };
        let factor = sign * (eta * (z0 + omega / 2.0)).exp();
        factor * self.sigma_inner(z0)
    }

    fn sigma_inner(&self, z: C) -> C {
        if z.norm() < 1e-140 {
            return z;
        }
        let r = z.norm() / self.min_norm;
        if r <= 0.7 {
            return z * self.log_sigma_over_z(z).exp();
        }
        // σ(2u) = -℘'(u) σ(u)⁴
        let u = z / 2.0;
        let s = self.sigma_inner(u);
        let (_, pp) = self.p_pair_reduced(u);
        -pp * s * s * s * s
    }
}

/// Gauss reduction of the basis.
fn reduce_basis(mut a: C, mut b: C) -> (C, C) {
    if a.norm() > b.norm() {
        std::mem::swap(&mut a, &mut b);
    }
    for _ in 0..64 {
        // b -= round(<b,a>/|a|²) a
        let mu = (b.re * a.re + b.im * a.im) / (a.re * a.re + a.im * a.im);
        let k = mu.round();
        if k != 0.0 {
            b -= k * a;
        }
        if b.norm() < a.norm() {
            std::mem::swap(&mut a, &mut b);
        } else {
            break;
        }
    }
    (a, b)
}

/// E4(q), E6(q) by σ-divisor q-series; |q| ≤ e^{-π√3} after reduction, so a
/// few dozen terms give full double precision.
fn eisenstein(q: C) -> (C, C) {
    let mut e4 = C::new(1.0, 0.0);
    let mut e6 = C::new(1.0, 0.0);
    let mut qn = C::new(1.0, 0.0);
    for n in 1u64..=48 {
        qn *= q;
        let (s3, s5) = sigma_divisors(n);
        e4 += 240.0 * (s3 as f64) * qn;
        e6 -= 504.0 * (s5 as f64) * qn;
        if qn.norm() < 1e-20 {
            break;
        }
    }
    (e4, e6)
}

fn sigma_divisors(n: u64) -> (u64, u64) {
    let mut s3 = 0;
    let mut s5 = 0;
    for d in 1..=n {
        if n % d == 0 {
            s3 += d.pow(3);
            s5 += d.pow(5);
        }
    }
    (s3, s5)
}

/// c_1 = g2/20, c_2 = g3/28, c_k = 3 Σ_{m=1}^{k-2} c_m c_{k-1-m} /
/// ((2k+3)(k-2)) for k ≥ 3.
fn laurent_coeffs(g2: C, g3: C) -> Vec<C> {
    let mut c = vec![C::new(0.0, 0.0); LAURENT_TERMS];
    c[0] = g2 / 20.0;
    c[1] = g3 / 28.0;
    for k in 3..=LAURENT_TERMS {
        let mut acc = C::new(0.0, 0.0);
        for m in 1..=(k - 2) {
            acc += c[m - 1] * c[k - 1 - m - 1];
        }
        c[k - 1] = 3.0 * acc / ((2 * k + 3) as f64 * (k - 2) as f64);
    }
    c
}
