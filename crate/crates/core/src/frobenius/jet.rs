//! Laurent jets in ε around an indicial root: value = cm1·ε⁻¹ + c0 + c1·ε.
//!
//! The ζ_j(λ) are rational in λ with at most a simple pole at λ2 (only the
//! single resonant division at j = m introduces it), so this three-window
//! jet is exactly what the λ-derivative construction of the second solution
//! needs. After the resonant division the ε¹ coefficient is no longer
//! determined; it is carried as `None` and never consumed afterwards.

use super::FrobError;
use crate::symcore::ExactScalar;

#[derive(Debug, Clone)]
pub(crate) struct Jet {
    pub cm1: ExactScalar,
    pub c0: ExactScalar,
    pub c1: Option<ExactScalar>,
}

impl Jet {
    pub fn zero() -> Self {
        Jet {
            cm1: ExactScalar::zero(),
            c0: ExactScalar::zero(),
            c1: Some(ExactScalar::zero()),
        }
    }

    pub fn one() -> Self {
        Jet {
            cm1: ExactScalar::zero(),
            c0: ExactScalar::one(),
            c1: Some(ExactScalar::zero()),
        }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        Jet {
            cm1: self.cm1.add_ref(&other.cm1),
            c0: self.c0.add_ref(&other.c0),
            c1: match (&self.c1, &other.c1) {
                (Some(a), Some(b)) => Some(a.add_ref(b)),
                _ => None,
            },
        }
    }

    pub fn neg(&self) -> Jet {
        Jet {
            cm1: self.cm1.neg_ref(),
            c0: self.c0.neg_ref(),
            c1: self.c1.as_ref().map(|c| c.neg_ref()),
        }
    }

    /// Multiply by the regular (pole-free) jet r0 + r1·ε.
    pub fn mul_regular(&self, r0: &ExactScalar, r1: &ExactScalar) -> Jet {
        Jet {
            cm1: r0.mul_ref(&self.cm1),
            c0: r0.mul_ref(&self.c0).add_ref(&r1.mul_ref(&self.cm1)),
            c1: self
                .c1
                .as_ref()
                .map(|c1| r0.mul_ref(c1).add_ref(&r1.mul_ref(&self.c0))),
        }
    }

    /// Divide by φ(t + ε) = φ0 + φ1·ε + ε². When φ0 = 0 (the resonant step)
    /// the quotient gains the ε⁻¹ term and loses its ε¹ window.
    pub fn div_phi(&self, phi0: &ExactScalar, phi1: &ExactScalar) -> Result<Jet, FrobError> {
        if !phi0.is_zero() {
            let inv = phi0.inv_ref().map_err(FrobError::Sym)?;
            let cm1 = self.cm1.mul_ref(&inv);
            let c0 = self.c0.sub_ref(&cm1.mul_ref(phi1)).mul_ref(&inv);
            let c1 = self
                .c1
                .as_ref()
                .map(|c1| c1.sub_ref(&cm1).sub_ref(&c0.mul_ref(phi1)).mul_ref(&inv));
            return Ok(Jet { cm1, c0, c1 });
        }
        // Resonant: y/(ε(φ1 + ε)). The dividend is regular here (the lower ζ's
        // have no pole), and its ε¹ window must still be intact.
        assert!(
            self.cm1.is_zero(),
            "double resonance is impossible for a quadratic indicial polynomial"
        );
        let y1 = self
            .c1
            .as_ref()
            .expect("resonant division consumes the ε¹ window exactly once")
            .clone();
        let inv = phi1.inv_ref().map_err(FrobError::Sym)?;
        let cm1 = self.c0.mul_ref(&inv);
        // φ2 = 1: c0 = (y1 - cm1·φ2)/φ1
        let c0 = y1.sub_ref(&cm1).mul_ref(&inv);
        Ok(Jet { cm1, c0, c1: None })
    }
}
