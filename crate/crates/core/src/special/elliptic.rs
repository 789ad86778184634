//! Complete elliptic integral `K` and the Jacobi elliptic functions
//! `sn`, `cn`, `dn`.
//!
//! Everything runs on the arithmetic–geometric mean. `K(k)` is
//! `π / (2 · AGM(1, k'))`; `sn/cn/dn` use the descending Landen chain
//! with a backward recurrence, after reducing the argument modulo the
//! full period `4K`. Parametrisation is by `k² ∈ (0, 1)` throughout
//! (`k²`, not `k`, mirrors how the cell lattices are configured).

use crate::cell::ExtremalCell;
use crate::error::{Error, Result};

/// AGM convergence threshold; the Landen truncation error is of the
/// order of the square of this.
const AGM_TOL: f64 = 1e-8;

/// Maximum Landen chain depth (quadratic convergence makes ~8 typical).
const MAX_DEPTH: usize = 16;

/// Complete elliptic integral of the first kind as a function of `k²`,
/// for `0 ≤ k² < 1`.
///
/// # Algorithm
/// `K = π / (2 · AGM(1, √(1−k²)))`; the AGM iteration is run to full
/// double precision, giving relative error ≲ 1e−15.
pub fn complete_elliptic_k(k_sq: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k_sq) {
        return Err(Error::Domain(format!("complete_elliptic_k requires k² ∈ [0,1), got {k_sq}")));
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - k_sq).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(std::f64::consts::PI / (2.0 * a))
}

/// A validated elliptic modulus with its cached quarter period.
#[derive(Debug, Clone, Copy)]
pub struct EllipticModulus {
    k_sq: f64,
    quarter_period: f64,
}

impl EllipticModulus {
    /// Requires `0 < k² < 1` (the degenerate trigonometric and
    /// hyperbolic limits are not valid cell generators).
    pub fn new(k_sq: f64) -> Result<Self> {
        if !(k_sq > 0.0 && k_sq < 1.0) {
            return Err(Error::Domain(format!("modulus requires 0 < k² < 1, got {k_sq}")));
        }
        Ok(Self { k_sq, quarter_period: complete_elliptic_k(k_sq)? })
    }

    pub fn k_sq(&self) -> f64 {
        self.k_sq
    }

    /// The quarter period `K(k)`.
    pub fn quarter_period(&self) -> f64 {
        self.quarter_period
    }
}

/// Values of the three Jacobi elliptic functions at one point.
#[derive(Debug, Clone, Copy)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Evaluate `sn(x; k)`, `cn(x; k)`, `dn(x; k)` for `0 ≤ k² < 1`.
///
/// # Algorithm
/// The argument is reduced modulo `4K`, then the descending Landen/AGM
/// chain is unwound with the standard backward recurrence. `sn² + cn²`
/// is exactly 1 by construction; `dn` carries the recurrence accuracy
/// (~1e−14).
pub fn jacobi_sncndn(x: f64, k_sq: f64) -> Result<JacobiTriple> {
    if !(0.0..1.0).contains(&k_sq) {
        return Err(Error::Domain(format!("jacobi_sncndn requires k² ∈ [0,1), got {k_sq}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {x}")));
    }
    if k_sq == 0.0 {
        return Ok(JacobiTriple { sn: x.sin(), cn: x.cos(), dn: 1.0 });
    }

    // Periodic reduction: all three functions have period 4K.
    let quarter = complete_elliptic_k(k_sq)?;
    let period = 4.0 * quarter;
    let mut u = x - period * (x / period).floor();
    if u > 0.5 * period {
        u -= period; // keep |u| small for the trigonometric seed
    }

    let mut emc = 1.0 - k_sq;
    let mut a = 1.0f64;
    let mut dn = 1.0f64;
    let mut em = [0.0f64; MAX_DEPTH];
    let mut en = [0.0f64; MAX_DEPTH];
    let mut depth = MAX_DEPTH - 1;
    let mut c = 0.0f64;
    for i in 0..MAX_DEPTH {
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= AGM_TOL * a {
            depth = i;
            break;
        }
        emc *= a;
        a = c;
    }

    u *= c;
    let mut sn = u.sin();
    let mut cn = u.cos();
    if sn != 0.0 {
        let mut aa = cn / sn;
        c *= aa;
        for i in (0..=depth).rev() {
            let b = em[i];
            aa *= c;
            c *= dn;
            dn = (en[i] + aa) / (b + aa);
            aa = c / b;
        }
        let amp = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { amp } else { -amp };
        cn = c * sn;
    }
    Ok(JacobiTriple { sn, cn, dn })
}

/// Extremal cells of `sn(x; k)` with index `l` in `l_range`:
/// `[2lK, (2l+2)K]` with the extremum at `(2l+1)K`, where
/// `sn((2l+1)K) = (−1)^l`.
pub fn jacobi_cells_sn(
    modulus: &EllipticModulus,
    l_range: std::ops::Range<u64>,
) -> Vec<ExtremalCell> {
    let quarter = modulus.quarter_period();
    l_range
        .map(|l| {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            ExtremalCell {
                gamma_lo: 2.0 * l as f64 * quarter,
                gamma_hi: (2.0 * l as f64 + 2.0) * quarter,
                t0: (2.0 * l as f64 + 1.0) * quarter,
                sign,
                g_at_t0: sign,
            }
        })
        .collect()
}

/// Extremal cells of `cn(x; k)` with index `l` in `l_range`:
/// `[(2l+1)K, (2l+3)K]` with the extremum at `(2l+2)K`, where
/// `cn((2l+2)K) = (−1)^{l+1}`.
pub fn jacobi_cells_cn(
    modulus: &EllipticModulus,
    l_range: std::ops::Range<u64>,
) -> Vec<ExtremalCell> {
    let quarter = modulus.quarter_period();
    l_range
        .map(|l| {
            let sign = if l % 2 == 0 { -1.0 } else { 1.0 };
            ExtremalCell {
                gamma_lo: (2.0 * l as f64 + 1.0) * quarter,
                gamma_hi: (2.0 * l as f64 + 3.0) * quarter,
                t0: (2.0 * l as f64 + 2.0) * quarter,
                sign,
                g_at_t0: sign,
            }
        })
        .collect()
}
