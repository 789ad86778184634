//! Log-gamma for positive real argument.
//!
//! Stirling's series after an upward recurrence shift: for `x ≥ SHIFT_TO`
//! the Bernoulli tail converges to full double precision; smaller
//! arguments are shifted up with `ln Γ(x) = ln Γ(x + m) − Σ ln(x + j)`.

use crate::error::{Error, Result};
use crate::numerics::KahanSum;

/// Stirling is applied only above this magnitude.
pub(crate) const SHIFT_TO: f64 = 30.0;

/// `B_{2k} / (2k (2k−1))` for k = 1..=10: the Stirling tail coefficients
/// of `1 / x^{2k−1}`.
pub(crate) const STIRLING_COEFFS: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// `ln Γ(x)` for `x > 0`, accurate to ~1e−14 relative.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    let shift = if x < SHIFT_TO { (SHIFT_TO - x).ceil() as usize } else { 0 };
    let w = x + shift as f64;

    // Stirling at w ≥ 30.
    let mut tail = KahanSum::new();
    let w2 = w * w;
    let mut wp = w;
    for c in STIRLING_COEFFS {
        tail.add(c / wp);
        wp *= w2;
    }
    let half_ln_2pi = 0.918_938_533_204_672_7; // ln(2π)/2
    let mut result = (w - 0.5) * w.ln() - w + half_ln_2pi + tail.value();

    // Undo the shift: ln Γ(x) = ln Γ(x+m) − Σ_{j=0}^{m−1} ln(x+j).
    let mut correction = KahanSum::new();
    for j in 0..shift {
        correction.add((x + j as f64).ln());
    }
    result -= correction.value();
    Ok(result)
}

/// `Γ(x)` for `x > 0` (via `exp(ln Γ)`, so it overflows for `x ≳ 171`).
pub fn gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma(x)?.exp())
}
