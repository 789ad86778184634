//! Adaptive quadrature on a Gauss–Kronrod 7/15 pair.
//!
//! The embedded rule gives a per-panel error estimate; panels live in a
//! max-heap keyed by that estimate and the worst panel is bisected until
//! the global estimate meets the tolerance or the panel budget runs out.
//! Integrands with known awkward points (zeros of `Z`, cell endpoints,
//! interior extrema) pass them as `hints`; each hint becomes an initial
//! panel boundary. Sharply peaked integrands go through
//! [`integrate_peaked`], which additionally applies the change of
//! variables `u = (t − t0) / w` on the peak panel so the adaptive logic
//! sees an O(1)-scale bump.
//!
//! Tolerances are relative with an absolute floor of
//! [`ABSOLUTE_TOLERANCE_FLOOR`].

use crate::error::{Error, Result};
use crate::numerics::compensated::KahanSum;
use std::collections::BinaryHeap;

/// Hard cap on the number of panels one call may allocate.
pub const PANEL_BUDGET: usize = 10_000;

/// Absolute floor under every relative tolerance.
pub const ABSOLUTE_TOLERANCE_FLOOR: f64 = 1e-14;

/// Abscissae of the 15-point Kronrod rule on [−1, 1] (positive half;
/// odd indices are the embedded 7-point Gauss nodes).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Weights of the embedded 7-point Gauss rule (for `XGK[1]`, `XGK[3]`,
/// `XGK[5]`, `XGK[7]`).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    /// Integral estimate.
    pub value: f64,
    /// Global absolute error estimate (sum of panel estimates).
    pub error_estimate: f64,
    /// Panels in the final partition.
    pub panels: usize,
    /// Integrand evaluations performed.
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    /// Scale reference |∫|f|| for round-off floors.
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One application of the 7/15 pair on [lo, hi].
fn qk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let fc = f(center);
    let mut resg = WG[3] * fc;
    let mut resk = WGK[7] * fc;
    let mut resabs = WGK[7] * fc.abs();
    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        resk += WGK[j] * fsum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
    }

    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }

    let value = resk * half;
    let resabs_scaled = resabs * half.abs();
    let resasc_scaled = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    // The usual rescaling: trust |K−G| only up to the smooth variation
    // resasc, with the 1.5-power sharpening for already-small ratios.
    if resasc_scaled != 0.0 && error != 0.0 {
        error = resasc_scaled * (200.0 * error / resasc_scaled).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * resabs_scaled;
    if roundoff > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(roundoff);
    }

    Panel { lo, hi, value, error, resabs: resabs_scaled }
}

fn initial_boundaries(lo: f64, hi: f64, hints: &[f64]) -> Vec<f64> {
    let span = hi - lo;
    let min_sep = span * 1e-12;
    let mut cuts: Vec<f64> = hints
        .iter()
        .copied()
        .filter(|&h| h.is_finite() && h > lo + min_sep && h < hi - min_sep)
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(lo);
    for c in cuts {
        if c - bounds.last().unwrap() > min_sep {
            bounds.push(c);
        }
    }
    bounds.push(hi);
    bounds
}

/// Adaptively integrate `f` over `[lo, hi]` to relative tolerance
/// `rel_tol` (absolute floor [`ABSOLUTE_TOLERANCE_FLOOR`]), splitting
/// initially at the interior `hints`.
///
/// Fails with [`Error::QuadratureNonConvergence`] if the panel budget is
/// exhausted or the worst panel can no longer be subdivided in f64.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    hints: &[f64],
) -> Result<Quadrature> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("non-finite integration bounds [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(Quadrature { value: 0.0, error_estimate: 0.0, panels: 0, evaluations: 0 });
    }
    let (a, b, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };

    let bounds = initial_boundaries(a, b, hints);
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for w in bounds.windows(2) {
        heap.push(qk15(&f, w[0], w[1]));
        evaluations += 15;
    }

    loop {
        let mut value = KahanSum::new();
        let mut error = 0.0f64;
        let mut resabs = 0.0f64;
        for p in heap.iter() {
            value.add(p.value);
            error += p.error;
            resabs += p.resabs;
        }
        let tolerance = (rel_tol * value.value().abs())
            .max(rel_tol * resabs * 0.0) // resabs kept for future scaling experiments
            .max(ABSOLUTE_TOLERANCE_FLOOR);
        if error <= tolerance {
            return Ok(Quadrature {
                value: sign * value.value(),
                error_estimate: error,
                panels: heap.len(),
                evaluations,
            });
        }
        if heap.len() >= PANEL_BUDGET {
            return Err(Error::QuadratureNonConvergence {
                lo,
                hi,
                error_estimate: error,
                tolerance,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap cannot be empty here");
        let mid = 0.5 * (worst.lo + worst.hi);
        let too_narrow = !(worst.lo < mid && mid < worst.hi);
        if too_narrow {
            return Err(Error::QuadratureNonConvergence {
                lo,
                hi,
                error_estimate: error,
                tolerance,
                panels: heap.len() + 1,
            });
        }
        heap.push(qk15(&f, worst.lo, mid));
        heap.push(qk15(&f, mid, worst.hi));
        evaluations += 30;
    }
}

/// Integrate an integrand with a single sharp peak at `peak`.
///
/// The interval is cut at `peak ± half_width`; the central panel is
/// transformed by `t = peak + half_width·u` so the peak has unit scale in
/// `u`, and all three pieces are integrated adaptively. `half_width`
/// should be the natural width of the peak (for `|H|^α` weights:
/// cell half-width divided by `sqrt(α+1)`).
pub fn integrate_peaked<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    peak: f64,
    half_width: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    if !(half_width > 0.0) || peak <= lo || peak >= hi {
        // No usable peak structure: fall back with the peak as a hint.
        return adaptive_integrate(f, lo, hi, rel_tol, &[peak]);
    }
    let w = half_width.min(0.5 * (hi - lo));
    let cut_lo = (peak - w).max(lo);
    let cut_hi = (peak + w).min(hi);

    let mut value = KahanSum::new();
    let mut error = 0.0;
    let mut panels = 0;
    let mut evaluations = 0;

    // Peak panel in u-coordinates.
    let u_lo = (cut_lo - peak) / w;
    let u_hi = (cut_hi - peak) / w;
    let central = adaptive_integrate(|u| f(peak + w * u), u_lo, u_hi, rel_tol, &[0.0])?;
    value.add(w * central.value);
    error += w * central.error_estimate;
    panels += central.panels;
    evaluations += central.evaluations;

    if cut_lo > lo {
        let left = adaptive_integrate(&f, lo, cut_lo, rel_tol, &[])?;
        value.add(left.value);
        error += left.error_estimate;
        panels += left.panels;
        evaluations += left.evaluations;
    }
    if cut_hi < hi {
        let right = adaptive_integrate(&f, cut_hi, hi, rel_tol, &[])?;
        value.add(right.value);
        error += right.error_estimate;
        panels += right.panels;
        evaluations += right.evaluations;
    }

    Ok(Quadrature { value: value.value(), error_estimate: error, panels, evaluations })
}
