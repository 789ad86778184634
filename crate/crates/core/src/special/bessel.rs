//! Bessel functions of the first kind `J_ν` for real order `ν > −1`,
//! their zeros, and the ratio generator cells `J_ν(x)/x^ν`.
//!
//! Two regimes:
//! * `x < max(20, 2|ν|)`: the ascending power series with compensated
//!   summation (cancellation keeps absolute error ≲ 1e−10 up to the
//!   switch point),
//! * otherwise: Hankel's asymptotic expansion
//!   `J_ν = √(2/πx) [P cos χ − Q sin χ]`, `χ = x − (ν/2 + 1/4)π`,
//!   truncated at its smallest term.
//!
//! Accuracy is ≤ 1e−9 absolute for `ν ∈ (−1, 8]` on `x ∈ (0, 1e5]`;
//! larger orders degrade gracefully near the regime switch.
//!
//! Zeros come from McMahon's expansion seeding a bracketed refinement;
//! the expansion is good to a few percent even at the first zero of
//! moderate orders and the bracket is widened adaptively when it is not.

use crate::cell::ExtremalCell;
use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, KahanSum};
use crate::special::gamma::ln_gamma;

/// A validated Bessel order, `ν > −1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > -1.0) || !nu.is_finite() {
            return Err(Error::Domain(format!("Bessel order must satisfy ν > −1, got {nu}")));
        }
        Ok(Self(nu))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

/// Regime switch between the power series and the Hankel expansion.
fn series_limit(nu: f64) -> f64 {
    20.0f64.max(2.0 * nu.abs())
}

/// `J_ν(x)` for `ν > −1`, `x ≥ 0` (`x = 0` requires `ν ≥ 0`).
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    let order = BesselOrder::new(nu)?;
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("bessel_j requires x ≥ 0, got {x}")));
    }
    if x == 0.0 {
        if nu == 0.0 {
            return Ok(1.0);
        }
        if nu > 0.0 {
            return Ok(0.0);
        }
        return Err(Error::Domain(format!("J_ν(0) diverges for ν = {nu} < 0")));
    }
    if x < series_limit(order.get()) {
        bessel_j_series(nu, x)
    } else {
        Ok(bessel_j_hankel(nu, x))
    }
}

/// Ascending series `Σ_k (−1)^k (x/2)^{ν+2k} / (k! Γ(ν+k+1))`.
fn bessel_j_series(nu: f64, x: f64) -> Result<f64> {
    let half = 0.5 * x;
    // Leading term (x/2)^ν / Γ(ν+1) in log space to dodge overflow at
    // extreme orders.
    let mut term = (nu * half.ln() - ln_gamma(nu + 1.0)?).exp();
    let msq = half * half;
    let mut sum = KahanSum::new();
    sum.add(term);
    for k in 1..=250 {
        let kf = k as f64;
        term *= -msq / (kf * (nu + kf));
        sum.add(term);
        if term.abs() < 1e-18 * sum.value().abs().max(1e-300) && k as f64 > half {
            break;
        }
    }
    Ok(sum.value())
}

/// Hankel asymptotic expansion; valid for `x ≥ max(20, 2|ν|)`.
fn bessel_j_hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    // a_k / x^k with a_k = Π_{j=1..k} (μ − (2j−1)²) / (k! 8^k), summed
    // into P (even k, alternating) and Q (odd k, alternating) until the
    // terms stop shrinking.
    let mut p = 1.0f64;
    let mut q = 0.0f64;
    let mut term = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..=30u32 {
        let j = 2.0 * k as f64 - 1.0;
        term *= (mu - j * j) / (8.0 * k as f64 * x);
        if term.abs() >= prev {
            break; // asymptotic tail started growing: stop at smallest term
        }
        prev = term.abs();
        // cycle of signs over k mod 4: +Q, −P, −Q, +P
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `k`-th positive zero of `J_ν` (`k ≥ 1`) by McMahon's expansion plus
/// bracketed refinement to ~1e−12 relative.
pub fn bessel_j_zero(nu: f64, k: u32) -> Result<f64> {
    BesselOrder::new(nu)?;
    if k == 0 {
        return Err(Error::Domain("zero index k starts at 1".into()));
    }
    let mu = 4.0 * nu * nu;
    let beta = (k as f64 + 0.5 * nu - 0.25) * std::f64::consts::PI;
    let b8 = 8.0 * beta;
    // McMahon: j ≈ β − (μ−1)/(8β) − 4(μ−1)(7μ−31)/(3(8β)³) − ...
    let seed = beta
        - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8.powi(5));

    // Bracket around the seed, widening while no sign change (first zeros
    // of larger orders drift from McMahon). The widening cap keeps the
    // bracket well inside the ~π spacing to the neighbouring zeros.
    let f = |x: f64| bessel_j(nu, x).unwrap_or(f64::NAN);
    let mut half_width = 0.25f64;
    loop {
        let lo = (seed - half_width).max(1e-6);
        let hi = seed + half_width;
        if f(lo).signum() != f(hi).signum() {
            return find_root_bracketed(f, lo, hi, 1e-13);
        }
        half_width *= 1.6;
        if half_width > 1.45 {
            return Err(Error::ZeroIsolation {
                lo: seed - half_width,
                hi: seed + half_width,
                detail: format!("no sign change around McMahon seed for j_{{ {nu}, {k} }}"),
            });
        }
    }
}

/// All zeros of `J_ν` in `[lo, hi]`, ascending.
pub fn bessel_j_zeros_in(nu: f64, lo: f64, hi: f64) -> Result<Vec<f64>> {
    BesselOrder::new(nu)?;
    if !(lo <= hi) {
        return Err(Error::Domain(format!("bad range [{lo}, {hi}]")));
    }
    // Invert McMahon's leading term for a starting index, then walk.
    let mut k = (((lo / std::f64::consts::PI) - 0.5 * nu + 0.25).floor() as i64 - 2).max(1) as u32;
    let mut zeros = Vec::new();
    loop {
        let z = bessel_j_zero(nu, k)?;
        if z > hi {
            break;
        }
        if z >= lo {
            zeros.push(z);
        }
        k += 1;
        if k > 2_000_000 {
            return Err(Error::Domain("zero enumeration runaway".into()));
        }
    }
    Ok(zeros)
}

/// The ratio generator `G(x) = J_ν(x) / x^ν`.
pub fn bessel_ratio(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_j(nu, x)? / x.powf(nu))
}

/// Derivative of the ratio generator: `G'(x) = −J_{ν+1}(x) / x^ν`
/// (exact identity, no finite differences).
pub fn bessel_ratio_derivative(nu: f64, x: f64) -> Result<f64> {
    Ok(-bessel_j(nu + 1.0, x)? / x.powf(nu))
}

/// Extremal cells of `J_ν(x)/x^ν` whose endpoints (consecutive zeros of
/// `J_ν`) lie inside `[lo, hi]`. The interior extremum is the interlaced
/// zero of `J_{ν+1}`, where the derivative identity pins it exactly.
pub fn bessel_ratio_cells(nu: f64, lo: f64, hi: f64) -> Result<Vec<ExtremalCell>> {
    BesselOrder::new(nu)?;
    let zeros = bessel_j_zeros_in(nu, lo, hi)?;
    let mut cells = Vec::new();
    if zeros.len() < 2 {
        return Ok(cells);
    }
    // Index of the first collected zero in the global j_{ν,k} sequence:
    // recover it so the interlacing j_{ν,k} < j_{ν+1,k} < j_{ν,k+1}
    // picks the matching zero of J_{ν+1}.
    let first_index = {
        let mut k = 1u32;
        loop {
            let z = bessel_j_zero(nu, k)?;
            if (z - zeros[0]).abs() < 1e-6 {
                break k;
            }
            if z > zeros[0] + 1.0 {
                return Err(Error::ZeroIsolation {
                    lo,
                    hi,
                    detail: "failed to anchor zero index".into(),
                });
            }
            k += 1;
        }
    };
    for (i, pair) in zeros.windows(2).enumerate() {
        let k = first_index + i as u32;
        let t0 = bessel_j_zero(nu + 1.0, k)?;
        if !(pair[0] < t0 && t0 < pair[1]) {
            return Err(Error::ZeroIsolation {
                lo: pair[0],
                hi: pair[1],
                detail: format!("interlacing violated: j_{{{}, {k}}} = {t0}", nu + 1.0),
            });
        }
        let g_at_t0 = bessel_ratio(nu, t0)?;
        cells.push(ExtremalCell {
            gamma_lo: pair[0],
            gamma_hi: pair[1],
            t0,
            sign: g_at_t0.signum(),
            g_at_t0,
        });
    }
    Ok(cells)
}
