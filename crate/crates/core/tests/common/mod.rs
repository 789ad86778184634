//! Independent oracles for cross-validating the zeta machinery.
//!
//! Everything here is written from scratch against the defining
//! formulas, deliberately *not* sharing code, truncation choices, or even
//! a complex-number type with the crate under test:
//!
//! * `zeta_oracle` — Euler–Maclaurin with a different main-sum cutoff
//!   (`2⌈t⌉ + 50` vs the crate's `⌈1.3t⌉`), six Bernoulli tail terms
//!   instead of ten, factorials computed at runtime, and the main sum
//!   accumulated in reverse order without compensation,
//! * `theta_oracle` — Riemann–Siegel theta through a shifted Stirling
//!   series for `ln Γ`, not the crate's direct asymptotic expansion,
//! * `z_oracle` — the Hardy function assembled from the two oracles,
//! * `simpson` — recursive adaptive Simpson quadrature, a second scheme
//!   against the crate's adaptive panel integrator.

#![allow(dead_code)]

/// Minimal complex arithmetic so the oracles share nothing with
/// `num-complex`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl Cx {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(self.re + other.re, self.im + other.im)
    }

    pub fn sub(self, other: Self) -> Self {
        Self::new(self.re - other.re, self.im - other.im)
    }

    pub fn mul(self, other: Self) -> Self {
        Self::new(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )
    }

    pub fn div(self, other: Self) -> Self {
        let d = other.re * other.re + other.im * other.im;
        Self::new(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    pub fn ln(self) -> Self {
        Self::new(
            0.5 * (self.re * self.re + self.im * self.im).ln(),
            self.im.atan2(self.re),
        )
    }

    pub fn exp(self) -> Self {
        let r = self.re.exp();
        Self::new(r * self.im.cos(), r * self.im.sin())
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// `n^{-s}` for positive real `n`.
    pub fn n_pow_minus(n: f64, s: Cx) -> Cx {
        let ln_n = n.ln();
        Cx::new(-s.re * ln_n, -s.im * ln_n).exp()
    }
}

/// Bernoulli numbers `B_2, B_4, …, B_12`.
const BERNOULLI: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

fn factorial(n: usize) -> f64 {
    (1..=n as u128).product::<u128>() as f64
}

/// `ζ(1/2 + it)` by Euler–Maclaurin with oracle-specific truncation.
///
/// `ζ(s) = Σ_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
///         + Σ_k B_{2k}/(2k)! · s(s+1)⋯(s+2k-2) · N^{-s-2k+1}`.
pub fn zeta_oracle(t: f64) -> Cx {
    assert!(t >= 0.0 && t.is_finite());
    let s = Cx::new(0.5, t);
    let n_cut = 2 * (t.ceil() as usize) + 50;

    // Plain reverse-order accumulation: small terms first.
    let mut sum = Cx::new(0.0, 0.0);
    for n in (1..n_cut).rev() {
        sum = sum.add(Cx::n_pow_minus(n as f64, s));
    }

    let nf = n_cut as f64;
    let n_minus_s = Cx::n_pow_minus(nf, s);
    // N^{1-s}/(s-1).
    sum = sum.add(n_minus_s.scale(nf).div(s.sub(Cx::new(1.0, 0.0))));
    // N^{-s}/2.
    sum = sum.add(n_minus_s.scale(0.5));

    for (k_index, b) in BERNOULLI.iter().enumerate() {
        let k = k_index + 1;
        // Rising product s(s+1)⋯(s+2k-2), rebuilt from scratch each k.
        let mut poch = Cx::new(1.0, 0.0);
        for j in 0..(2 * k - 1) {
            poch = poch.mul(s.add(Cx::new(j as f64, 0.0)));
        }
        let weight = b / factorial(2 * k);
        let n_power = Cx::n_pow_minus(nf, s.add(Cx::new(2.0 * k as f64 - 1.0, 0.0)));
        sum = sum.add(poch.mul(n_power).scale(weight));
    }
    sum
}

/// `ln Γ(z)` by a Stirling series after shifting the argument up by 10.
fn ln_gamma_oracle(z: Cx) -> Cx {
    const SHIFT: usize = 10;
    const LN_2PI: f64 = 1.837_877_066_409_345_5;
    // ln Γ(z) = ln Γ(z + m) − Σ_{j<m} ln(z + j).
    let mut correction = Cx::new(0.0, 0.0);
    for j in 0..SHIFT {
        correction = correction.add(z.add(Cx::new(j as f64, 0.0)).ln());
    }
    let w = z.add(Cx::new(SHIFT as f64, 0.0));
    let ln_w = w.ln();
    // (w − 1/2) ln w − w + ln(2π)/2 + Σ_k B_{2k}/((2k)(2k−1) w^{2k−1}).
    let mut lg = w
        .sub(Cx::new(0.5, 0.0))
        .mul(ln_w)
        .sub(w)
        .add(Cx::new(0.5 * LN_2PI, 0.0));
    let w_sq = w.mul(w);
    let mut w_odd = w; // w^{2k−1}
    for (k_index, b) in BERNOULLI.iter().enumerate() {
        let k = (k_index + 1) as f64;
        lg = lg.add(Cx::new(b / (2.0 * k * (2.0 * k - 1.0)), 0.0).div(w_odd));
        w_odd = w_odd.mul(w_sq);
    }
    lg.sub(correction)
}

/// Riemann–Siegel theta through the log-Gamma definition:
/// `θ(t) = Im ln Γ(1/4 + it/2) − (t/2) ln π`.
pub fn theta_oracle(t: f64) -> f64 {
    const LN_PI: f64 = 1.144_729_885_849_400_2;
    ln_gamma_oracle(Cx::new(0.25, 0.5 * t)).im - 0.5 * t * LN_PI
}

/// Hardy `Z(t) = e^{iθ(t)} ζ(1/2 + it)` from the two oracles; returns
/// `(value, imaginary_leak)` — the leak measures the oracles' internal
/// consistency and should be ≪ 1.
pub fn z_oracle(t: f64) -> (f64, f64) {
    let z = zeta_oracle(t);
    let theta = theta_oracle(t);
    let rotated = Cx::new(theta.cos(), theta.sin()).mul(z);
    (rotated.re, rotated.im.abs())
}

/// Bisection for a sign change of `f` inside `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    assert!(
        f_lo * f_hi < 0.0,
        "oracle bisection needs a sign change: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
    );
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_lo * f_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    0.5 * (lo + hi)
}

/// Recursive adaptive Simpson quadrature: the second, independent scheme.
pub fn simpson(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_mid: f64,
        f_hi: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let mid = 0.5 * (lo + hi);
        let lm = 0.5 * (lo + mid);
        let mh = 0.5 * (mid + hi);
        let f_lm = f(lm);
        let f_mh = f(mh);
        let left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
        let right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_mh + f_hi);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, lo, mid, f_lo, f_lm, f_mid, left, 0.5 * tol, depth - 1)
            + recurse(f, mid, hi, f_mid, f_mh, f_hi, right, 0.5 * tol, depth - 1)
    }
    let mid = 0.5 * (lo + hi);
    let (f_lo, f_mid, f_hi) = (f(lo), f(mid), f(hi));
    let whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
    recurse(f, lo, hi, f_lo, f_mid, f_hi, whole, tol, 48)
}

/// Shared closeness assertion with an absolute tolerance.
pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: actual={actual:.16e}, expected={expected:.16e}, diff={:.3e}",
        (actual - expected).abs()
    );
}

/// Shared closeness assertion with a relative tolerance.
pub fn assert_rel_close(actual: f64, expected: f64, rel_tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= rel_tol * expected.abs(),
        "{what}: actual={actual:.16e}, expected={expected:.16e}, rel={:.3e}",
        (actual - expected).abs() / expected.abs()
    );
}
