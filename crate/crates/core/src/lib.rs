//! Numerical laboratory for Jacob's ladders and weighted mean values of
//! `|zeta(1/2 + it)|^2` over extremal cells of oscillating generators.
//!
//! The crate is organised in layers:
//!
//! * [`numerics`] — adaptive quadrature, bracketed root finding, damped
//!   fixed-point iteration, compensated summation,
//! * [`special`] — complete elliptic integrals, Jacobi `sn`/`cn`/`dn`,
//!   Bessel functions of the first kind and their zeros,
//! * [`zeta`] — Riemann–Siegel theta, the Hardy function `Z(t)`,
//!   `|zeta|^2` on the critical line, zero/extremum tables and the
//!   cumulative second moment `∫_0^T |zeta(1/2+it)|^2 dt`,
//! * [`ladder`] — the Jacob's ladder `phi1`, i.e. the solution of
//!   `V ln V + (c - ln 2π) V + c0 = ∫_0^T |zeta|^2 dt`, with persistence,
//! * [`generators`] — sign-fixed extremal cells `[γ', γ'']` of the
//!   generator families (`sn`, `cn`, Bessel ratio, Hardy `Z`, deformed),
//! * [`theorem`] — hat cells, the weighted mean value `ω`, the exponent
//!   fixed point `α = 2ω ln γ' − 1`, the weighted unit integral, the
//!   mean-value point `t_H`, deformation functionals and the Dirac
//!   concentration diagnostic,
//! * [`report`] — serialisable verification records (JSON/CSV).
//!
//! All floating point work is plain `f64` with compensated summation where
//! accuracy contracts demand it; there is no arbitrary-precision arithmetic.
//!
//! The `parallel` feature (enabled by default) routes data-parallel loops
//! through rayon; without it every loop runs sequentially with identical
//! results.

// Guards are written `!(x > 0.0)` rather than `x <= 0.0` on purpose: the
// negated form sends NaN down the rejection branch, the "simplified" one
// would silently accept it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cell;
pub mod consts;
pub mod error;
pub mod exec;
pub mod generators;
pub mod ladder;
pub mod numerics;
mod persist;
pub mod report;
pub mod special;
pub mod theorem;
pub mod zeta;

pub use cell::ExtremalCell;
pub use error::{Error, Result};
