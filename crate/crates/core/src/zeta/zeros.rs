//! Zeros and critical points of Hardy's `Z` on an interval.
//!
//! A sign-change scan at a density-aware step finds the zeros; between each
//! consecutive pair the derivative is scanned for extrema. Exactly one
//! extremum is expected per pair — windows that disagree (close zero pairs,
//! almost-tangent dips) are reported as *suspect intervals* rather than
//! silently normalised, because downstream cell construction must not build
//! on a mislabelled critical point.
//!
//! Tables can also be ingested from a file of precomputed ordinates, in
//! which case every entry is cross-validated against the in-crate `Z`
//! before being trusted.

use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::find_root_bracketed;
use crate::zeta::hardy_z;

/// Zeros are refined to roughly this *absolute* accuracy.
pub const ZERO_REFINE_TOL: f64 = 1e-9;

/// Upper bound on the scan step; the density-aware step
/// `π / ln(t/2π)` (half the mean zero spacing) takes over only at heights
/// far beyond this crate's tables.
const SCAN_STEP_MAX: f64 = 0.2;

/// Sub-step used when scanning `Z′` between consecutive zeros.
const EXTREMUM_SCAN_STEP: f64 = 0.05;

/// Central-difference step for `Z′`.
const DERIVATIVE_STEP: f64 = 1e-3;

/// Ingested ordinates must satisfy `|Z| ≤` this.
pub const INGEST_RESIDUAL_TOL: f64 = 1e-4;

/// `Z′(t)` by a fourth-order Richardson central difference.
///
/// # Panics
/// Propagates the `hardy_z` domain panic for `t − 2h < 0`.
pub fn hardy_z_prime(t: f64) -> f64 {
    let h = DERIVATIVE_STEP;
    (8.0 * (hardy_z(t + h) - hardy_z(t - h)) - (hardy_z(t + 2.0 * h) - hardy_z(t - 2.0 * h)))
        / (12.0 * h)
}

/// Where a zero table came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    /// Scanned and refined by this crate.
    Computed,
    /// Read from an external ordinate file and cross-validated.
    Ingested,
}

/// Zeros of `Z`, the extrema between them, and any windows where the
/// one-extremum-per-pair expectation failed.
#[derive(Debug, Clone)]
pub struct ZZeroTable {
    pub zeros: Vec<f64>,
    pub extrema: Vec<f64>,
    pub suspect_intervals: Vec<(f64, f64)>,
    pub source: TableSource,
}

impl ZZeroTable {
    /// Scan `[lo, hi]` for zeros and classify the extrema between them.
    pub fn build(lo: f64, hi: f64) -> Result<Self> {
        let zeros = find_z_zeros(lo, hi)?;
        let (extrema, suspect_intervals) = find_z_extrema(&zeros);
        Ok(Self { zeros, extrema, suspect_intervals, source: TableSource::Computed })
    }

    /// Read ascending zero ordinates (one decimal per line, blank lines
    /// ignored) and cross-validate each against the in-crate `Z`.
    pub fn ingest(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut zeros = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let value: f64 = trimmed.parse().map_err(|_| {
                Error::ZeroIngestion(format!(
                    "line {}: not a decimal ordinate: {trimmed:?}",
                    idx + 1
                ))
            })?;
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::ZeroIngestion(format!(
                    "line {}: ordinate must be finite and positive, got {value}",
                    idx + 1
                )));
            }
            if let Some(&prev) = zeros.last() {
                if value <= prev {
                    return Err(Error::ZeroIngestion(format!(
                        "line {}: ordinates must be strictly ascending ({value} after {prev})",
                        idx + 1
                    )));
                }
            }
            let residual = hardy_z(value).abs();
            if residual > INGEST_RESIDUAL_TOL {
                return Err(Error::ZeroIngestion(format!(
                    "line {}: |Z({value})| = {residual:.3e} exceeds {INGEST_RESIDUAL_TOL:.1e}; \
                     not a zero ordinate",
                    idx + 1
                )));
            }
            zeros.push(value);
        }
        let (extrema, suspect_intervals) = find_z_extrema(&zeros);
        Ok(Self { zeros, extrema, suspect_intervals, source: TableSource::Ingested })
    }

    /// Zeros and extrema inside `[lo, hi]`, merged ascending — the natural
    /// quadrature hint set for integrands built on `|ζ|²`.
    pub fn hints_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut hints: Vec<f64> = self
            .zeros
            .iter()
            .chain(self.extrema.iter())
            .copied()
            .filter(|&t| t > lo && t < hi)
            .collect();
        hints.sort_unstable_by(f64::total_cmp);
        hints
    }

    /// The zeros inside `[lo, hi]` as a slice of the full table.
    pub fn zeros_in(&self, lo: f64, hi: f64) -> &[f64] {
        let start = self.zeros.partition_point(|&z| z < lo);
        let end = self.zeros.partition_point(|&z| z <= hi);
        &self.zeros[start..end]
    }
}

/// All zeros of `Z` in `[lo, hi]`, ascending, refined to
/// [`ZERO_REFINE_TOL`] absolute.
///
/// # Algorithm
/// March with step `min(0.2, π/ln(t/2π))` — half the local mean zero
/// spacing or better throughout — and Brent-refine every sign change.
/// Zeros closer together than the step can escape a sign scan; the
/// extremum classifier downstream flags such windows as suspect.
pub fn find_z_zeros(lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !(lo >= 10.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Domain(format!(
            "zero scan requires 10 <= lo < hi (finite), got [{lo}, {hi}]"
        )));
    }
    let mut zeros = Vec::new();
    let mut t = lo;
    let mut z_prev = hardy_z(t);
    while t < hi {
        let step = SCAN_STEP_MAX.min(std::f64::consts::PI / (t / (2.0 * std::f64::consts::PI)).ln());
        let t_next = (t + step).min(hi);
        let z_next = hardy_z(t_next);
        if z_prev == 0.0 {
            zeros.push(t);
        } else if z_prev.signum() != z_next.signum() && z_next != 0.0 {
            // Absolute refinement target: the bracketed solver treats its
            // tolerance as relative at this magnitude.
            let tol = ZERO_REFINE_TOL / t.max(1.0);
            zeros.push(find_root_bracketed(hardy_z, t, t_next, tol)?);
        }
        t = t_next;
        z_prev = z_next;
    }
    if z_prev == 0.0 {
        zeros.push(hi);
    }
    zeros.dedup_by(|a, b| (*a - *b).abs() < 10.0 * ZERO_REFINE_TOL);
    Ok(zeros)
}

/// Locate the extrema of `Z` between each consecutive zero pair.
///
/// Returns the extrema (ascending) and the suspect intervals: zero pairs
/// whose derivative scan found an even count or more than one sign change,
/// which is where close pairs or grazing dips hide. Pairs are classified
/// in parallel; each window is independent.
pub fn find_z_extrema(zeros: &[f64]) -> (Vec<f64>, Vec<(f64, f64)>) {
    let pair_count = zeros.len().saturating_sub(1);
    let per_pair = crate::exec::map_indexed(pair_count, |i| classify_pair(zeros[i], zeros[i + 1]));

    let mut extrema = Vec::new();
    let mut suspects = Vec::new();
    for (i, (found, pair_extrema)) in per_pair.into_iter().enumerate() {
        if found != 1 {
            suspects.push((zeros[i], zeros[i + 1]));
        }
        extrema.extend(pair_extrema);
    }
    (extrema, suspects)
}

/// Scan `Z′` across one zero pair; returns the sign-change count and the
/// refined extremum locations.
fn classify_pair(z_lo: f64, z_hi: f64) -> (usize, Vec<f64>) {
    let width = z_hi - z_lo;
    let samples = ((width / EXTREMUM_SCAN_STEP).ceil() as usize).max(8);
    let mut extrema = Vec::with_capacity(1);
    let mut found = 0usize;
    let mut t_prev = z_lo;
    let mut d_prev = hardy_z_prime(t_prev);
    for i in 1..=samples {
        let t_cur = z_lo + width * i as f64 / samples as f64;
        let d_cur = hardy_z_prime(t_cur);
        if d_prev.signum() != d_cur.signum() && d_cur != 0.0 && d_prev != 0.0 {
            let tol = ZERO_REFINE_TOL / t_cur.max(1.0);
            if let Ok(e) = find_root_bracketed(hardy_z_prime, t_prev, t_cur, tol) {
                extrema.push(e);
                found += 1;
            }
        }
        t_prev = t_cur;
        d_prev = d_cur;
    }
    (found, extrema)
}
