//! Log-gamma in the right complex half-plane.
//!
//! Same Stirling-plus-shift scheme as the real-argument version in
//! [`crate::special::gamma`], promoted to complex arithmetic. Only the
//! principal branch is produced; every use in this crate keeps `Re z > 0`,
//! where the shifted argument never crosses the negative real axis and the
//! branch bookkeeping stays trivial.

use num_complex::Complex64;

use crate::special::gamma::{SHIFT_TO, STIRLING_COEFFS};

/// Half of ln(2π).
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

/// Principal-branch `ln Γ(z)` for `Re z > 0`.
///
/// # Algorithm
/// Shift upward with `ln Γ(z) = ln Γ(z + m) − Σ ln(z + j)` until
/// `|z + m| ≥ SHIFT_TO`, then apply Stirling's series
/// `(w − ½) ln w − w + ½ ln 2π + Σ B₂ₖ / (2k(2k−1) w^{2k−1})`.
///
/// # Panics
/// If `Re z ≤ 0` or `z` is not finite.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    assert!(
        z.re > 0.0 && z.re.is_finite() && z.im.is_finite(),
        "ln_gamma_complex requires finite z with Re z > 0, got {z}"
    );
    let shift = if z.norm() < SHIFT_TO {
        (SHIFT_TO - z.re).ceil().max(0.0) as usize
    } else {
        0
    };
    let w = z + shift as f64;

    let mut tail = Complex64::new(0.0, 0.0);
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut wp = inv;
    for c in STIRLING_COEFFS {
        tail += wp.scale(c);
        wp *= inv2;
    }
    let mut result = (w - 0.5) * w.ln() - w + HALF_LN_2PI + tail;

    for j in 0..shift {
        result -= (z + j as f64).ln();
    }
    result
}
