//! Exact-algebra and numerical machinery for the classification of CMC-1
//! surfaces in hyperbolic 3-space by dual total absolute curvature.
//!
//! The crate is organized around the data pair `(G, Q)` — hyperbolic Gauss
//! map and Hopf differential — of a CMC-1 immersion:
//!
//! * [`symcore`] — exact scalars (Gaussian rationals with one optional
//!   quadratic surd), polynomials, rational functions, Laurent expansions,
//!   Möbius actions and the Schwarzian derivative.
//! * [`frobenius`] — indicial equations, series solutions and log-term
//!   coefficients of second-order ODEs at regular singular points, both for
//!   fixed exact coefficients and polynomially in the parameter θ.
//! * [`moduli`] — the surface data model, integer curvature bookkeeping
//!   (Gauss-Bonnet, Riemann-Roch, Osserman slack) and the exhaustive
//!   enumeration of admissible end types for a curvature budget.
//! * [`census`] — one verifier per classification case, emitting
//!   machine-checkable verdicts.
//! * [`lift`] — numerical integration of the lift equation dF = M(z)F dz,
//!   monodromy extraction, Poincaré-ball immersion and mesh export.
//! * [`flatlab`] — minimal-surface period integrals, Newton solving, and
//!   Weierstrass ℘/σ evaluators.

pub mod census;
pub mod flatlab;
pub mod frobenius;
pub mod lift;
pub mod moduli;
pub mod symcore;
