//! Exact arithmetic in generalized power series fields `k((t^Q))`, where
//! `k` is the rationals or a finite field.
//!
//! Series carry a certification cap: every coefficient below the cap is
//! exact, nothing above it is claimed. All operations propagate caps so the
//! claim survives whatever the unknown tails are.

pub mod additive;
pub mod error;
pub mod eval;
pub mod expr;
pub mod field;
pub mod io;
pub mod morphisms;
pub mod powers;
pub mod rat;
pub mod sample;
pub mod series;
pub mod solvers;

pub use additive::{additive_eval, hypothesis_a_check, AdditivePoly, HypothesisA};
pub use error::{Error, Result};
pub use field::{make_field, Coeff, FieldCtx};
pub use morphisms::{
    apply_transform, classify_orbit, orbit_transform, psi_lambda, substitute, thm2_map, ExpHom,
    OrbitClass, Step, Substitution, Transform,
};
pub use powers::{nth_root, pow_rat, rat_binomial};
pub use rat::{Cap, Rat};
pub use series::{Series, Valuation};
pub use solvers::{
    artin_schreier_h, intersection_spotcheck, norm_leading, solve_additive, trace,
    valuation_sign_via_trace, Sign,
};
