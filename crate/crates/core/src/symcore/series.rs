//! Truncated Laurent expansions of rational functions at sphere points.

use super::ratfun::taylor_div;
use super::{Coeff, Poly, RationalFunction, SpherePoint, SymError};
use std::fmt;

/// Truncated Laurent series at a base point. For `base = ∞` the series
/// variable is the chart coordinate w = 1/z.
///
/// Invariant: the leading stored coefficient is nonzero unless the series is
/// identically zero through the truncation order (then `coeffs` is empty and
/// `min_order = truncation_order + 1`).
#[derive(Clone, PartialEq)]
pub struct LaurentSeries<K> {
    pub base: SpherePoint,
    pub min_order: i64,
    pub coeffs: Vec<K>,
    pub truncation_order: i64,
}

impl<K: Coeff> LaurentSeries<K> {
    pub fn coeff(&self, order: i64) -> K {
        if order < self.min_order || order > self.truncation_order {
            return K::zero();
        }
        self.coeffs
            .get((order - self.min_order) as usize)
            .cloned()
            .unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<K: Coeff> fmt::Display for LaurentSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.base.is_infinity() { "w" } else { "z" };
        if self.is_zero() {
            return write!(f, "O({var}^{})", self.truncation_order + 1);
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, "({c})*{var}^{} + ", self.min_order + i as i64)?;
            }
        }
        write!(f, "O({var}^{})", self.truncation_order + 1)
    }
}

impl<K: Coeff> fmt::Debug for LaurentSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rewrite a weight-`w` density (weight 0 = function, 1 = 1-form,
/// 2 = 2-differential) in the local coordinate centered at `p`.
/// At ∞ the chart is w = 1/z and the density picks up w^(-2·weight).
pub fn localize_density<K: Coeff>(
    f: &RationalFunction<K>,
    p: &SpherePoint,
    weight: u32,
) -> RationalFunction<K> {
    match p {
        SpherePoint::Finite(x) => f.shift(&K::from_exact(x)),
        SpherePoint::Infinity => {
            let sub = f.subst_inv();
            if weight == 0 {
                sub
            } else {
                // d z = -w^{-2} dw, and densities carry (dz)^weight; the sign
                // is irrelevant for even weight and tracked by callers for
                // odd weight (residues handle it explicitly).
                let denom = Poly::monomial(K::one(), (2 * weight) as usize);
                sub.div(&RationalFunction::from_poly(denom))
                    .expect("nonzero")
            }
        }
    }
}

/// Exact Laurent expansion of f at p with `n_terms` coefficients starting at
/// the order of f at p.
pub fn laurent_at<K: Coeff>(
    f: &RationalFunction<K>,
    p: &SpherePoint,
    n_terms: usize,
) -> Result<LaurentSeries<K>, SymError> {
    if f.is_zero() {
        return Err(SymError::ZeroFunction);
    }
    if n_terms == 0 {
        return Err(SymError::Precondition("n_terms must be >= 1".into()));
    }
    let local = localize_density(f, p, 0);
    let series = expand_at_zero(&local, n_terms)?;
    Ok(LaurentSeries {
        base: p.clone(),
        ..series
    })
}

/// Expansion at the origin of the local coordinate.
pub(crate) fn expand_at_zero<K: Coeff>(
    f: &RationalFunction<K>,
    n_terms: usize,
) -> Result<LaurentSeries<K>, SymError> {
    if f.is_zero() {
        return Err(SymError::ZeroFunction);
    }
    let num_mult = f.num().root_multiplicity(&K::zero());
    let den_mult = f.den().root_multiplicity(&K::zero());
    let min_order = num_mult as i64 - den_mult as i64;
    let num = f
        .num()
        .div_exact(&Poly::monomial(K::one(), num_mult))
        .expect("multiplicity");
    let den = f
        .den()
        .div_exact(&Poly::monomial(K::one(), den_mult))
        .expect("multiplicity");
    let coeffs = taylor_div(&num, &den, n_terms);
    Ok(LaurentSeries {
        base: SpherePoint::zero(),
        min_order,
        coeffs,
        truncation_order: min_order + n_terms as i64 - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::ExactScalar;

    type RF = RationalFunction<ExactScalar>;

    fn from_ints(num: &[i64], den: &[i64]) -> RF {
        RF::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    #[test]
    fn geometric_series() {
        // 1/(1-z) = 1 + z + z^2 + ...
        let f = from_ints(&[1], &[1, -1]);
        let s = laurent_at(&f, &SpherePoint::zero(), 3).unwrap();
        assert_eq!(s.min_order, 0);
        assert_eq!(
            s.coeffs,
            vec![
                ExactScalar::one(),
                ExactScalar::one(),
                ExactScalar::one()
            ]
        );
    }

    #[test]
    fn pole_at_zero() {
        // 1/(z^2 (1-z)): min order -2
        let f = from_ints(&[1], &[0, 0, 1, -1]);
        let s = laurent_at(&f, &SpherePoint::zero(), 4).unwrap();
        assert_eq!(s.min_order, -2);
        assert_eq!(s.coeff(-2), ExactScalar::one());
        assert_eq!(s.coeff(1), ExactScalar::one());
    }

    #[test]
    fn expansion_at_infinity() {
        // z^2 in the chart w = 1/z is w^{-2}
        let f = from_ints(&[0, 0, 1], &[1]);
        let s = laurent_at(&f, &SpherePoint::Infinity, 2).unwrap();
        assert_eq!(s.min_order, -2);
        assert_eq!(s.coeff(-2), ExactScalar::one());
        assert_eq!(s.coeff(-1), ExactScalar::zero());
    }

    #[test]
    fn re_expansion_agrees_on_overlap() {
        let f = from_ints(&[2, 3, 5], &[1, 1, 0, 7]);
        let a = laurent_at(&f, &SpherePoint::from_int(2), 4).unwrap();
        let b = laurent_at(&f, &SpherePoint::from_int(2), 9).unwrap();
        for k in a.min_order..=a.truncation_order {
            assert_eq!(a.coeff(k), b.coeff(k));
        }
    }
}
