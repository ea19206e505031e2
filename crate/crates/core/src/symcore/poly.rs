//! Dense univariate polynomials over an exact coefficient field.

use super::{Coeff, Rat, SymError};
use std::fmt;

/// Polynomial with ascending coefficients and no trailing zeros.
/// The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq)]
pub struct Poly<K> {
    coeffs: Vec<K>,
}

impl<K: Coeff> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![K::one()],
        }
    }

    pub fn constant(c: K) -> Self {
        Self::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&n| K::from_int(n)).collect())
    }

    /// The monomial z.
    pub fn var() -> Self {
        Poly {
            coeffs: vec![K::zero(), K::one()],
        }
    }

    /// c z^k
    pub fn monomial(c: K, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![K::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// z - root
    pub fn linear_from_root(root: &K) -> Self {
        Poly {
            coeffs: vec![root.neg(), K::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> K {
        self.coeffs.get(k).cloned().unwrap_or_else(K::zero)
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&other.coeff(k)));
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&K::from_rat(r))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&K::from_int(k as i64)))
                .collect(),
        )
    }

    /// Quotient and remainder; errors only when dividing by zero.
    pub fn div_rem(&self, div: &Self) -> Result<(Self, Self), SymError> {
        if div.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        let dlead = div.leading().unwrap().inv()?;
        let ddeg = div.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < div.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let qlen = rem.len() - ddeg;
        let mut quot = vec![K::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = rem[k + ddeg].mul(&dlead);
            if c.is_zero() {
                continue;
            }
            quot[k] = c.clone();
            for (j, d) in div.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(d));
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact division; errors when the remainder is nonzero.
    pub fn div_exact(&self, div: &Self) -> Result<Self, SymError> {
        let (q, r) = self.div_rem(div)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(SymError::Precondition("inexact polynomial division".into()))
        }
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Taylor shift: p(z + c).
    pub fn shift(&self, c: &K) -> Self {
        // Repeated synthetic division by (z - c) collects the coefficients
        // of p in powers of (z - c), which are the coefficients of p(z + c).
        let n = self.coeffs.len();
        if n == 0 {
            return Self::zero();
        }
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            // Divide work(z) by (z) after substituting y = z - c:
            // Horner evaluation at c leaves the remainder, quotient in place.
            let mut rem = K::zero();
            for k in (0..work.len()).rev() {
                let t = rem.mul(c).add(&work[k]);
                rem = t.clone();
                work[k] = t;
            }
            // work[0] is p(c) for the current quotient chain
            out.push(work.remove(0));
            if work.is_empty() {
                break;
            }
        }
        Self::new(out)
    }

    /// Coefficient reversal: z^n p(1/z) for n = deg p.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Multiplicity of `root` as a zero of the polynomial.
    pub fn root_multiplicity(&self, root: &K) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Self::linear_from_root(root);
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(&lin).expect("nonzero divisor");
            if r.is_zero() {
                m += 1;
                cur = q;
                if cur.is_zero() {
                    break;
                }
            } else {
                break;
            }
        }
        m
    }

    /// Square-free decomposition (Yun): returns `(g_i, i)` with
    /// `self = lc * prod g_i^i`, each `g_i` square-free and monic.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = fp.div_exact(&a0).expect("gcd divides");
        let mut d = c.sub(&b.derivative());
        let mut out = vec![];
        let mut i = 1;
        loop {
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            c = d.div_exact(&a).expect("gcd divides");
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![K::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] = c.mul(
                &K::from_rat(&Rat::new(1.into(), ((k + 1) as i64).into())),
            );
        }
        Self::new(out)
    }
}

impl<K: Coeff> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl<K: Coeff> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
