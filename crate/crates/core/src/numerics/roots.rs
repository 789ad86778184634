//! Safeguarded bracketed root finding.
//!
//! Brent's method: inverse-quadratic / secant steps accepted only while
//! they stay inside the bracket and shrink fast enough, bisection
//! otherwise. Never evaluates outside the initial bracket.

use crate::error::{Error, Result};

/// Iteration cap; generous, since bisection alone halves the bracket each
/// step and 200 halvings exhaust f64 resolution many times over.
pub const MAX_ITER: usize = 200;

/// Find the root of `f` inside `[lo, hi]` to absolute x-tolerance
/// `tol · max(1, |x|)` (plus the usual machine-epsilon floor).
///
/// Endpoints that are exact zeros are returned immediately. A bracket
/// whose endpoints have the same sign fails with
/// [`Error::BracketViolation`].
pub fn find_root_bracketed<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let f_hi = f(hi);
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketViolation { lo, hi, f_lo, f_hi });
    }

    // Classic Brent bookkeeping: b is the best iterate, a its counterpart
    // with opposite sign, c the previous b.
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f_lo, f_hi);
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol * b.abs().max(1.0);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Attempt inverse quadratic interpolation (secant when a == c).
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Err(Error::RootNonConvergence { lo, hi, max_iter: MAX_ITER })
}
