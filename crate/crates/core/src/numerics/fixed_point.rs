//! Damped fixed-point iteration.
//!
//! `x_{n+1} = (1 − λ) x_n + λ g(x_n)` with damping `λ ∈ (0, 1]`.
//! Convergence is declared when the update is small relative to the
//! iterate; non-convergence is an explicit error that carries the full
//! iterate history for diagnosis.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FixedPoint {
    /// Converged iterate.
    pub value: f64,
    /// Iterations performed (updates applied).
    pub iterations: usize,
    /// Final update magnitude `|x_{n+1} − x_n|`.
    pub residual: f64,
    /// Iterates from `x0` to the final value, inclusive.
    pub history: Vec<f64>,
}

/// Iterate `g` from `x0` with damping until `|Δx| ≤ tol · max(1, |x|)`.
pub fn fixed_point<G: FnMut(f64) -> f64>(
    mut g: G,
    x0: f64,
    damping: f64,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPoint> {
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::Domain(format!("damping {damping} outside (0, 1]")));
    }
    if !x0.is_finite() {
        return Err(Error::Domain(format!("non-finite start {x0}")));
    }
    let mut x = x0;
    let mut history = Vec::with_capacity(max_iter + 1);
    history.push(x);
    let mut residual = f64::INFINITY;
    for n in 1..=max_iter {
        let next = (1.0 - damping) * x + damping * g(x);
        residual = (next - x).abs();
        x = next;
        history.push(x);
        if !x.is_finite() {
            return Err(Error::FixedPointNonConvergence {
                last: x,
                iterations: n,
                residual,
                history,
            });
        }
        if residual <= tol * x.abs().max(1.0) {
            return Ok(FixedPoint { value: x, iterations: n, residual, history });
        }
    }
    Err(Error::FixedPointNonConvergence {
        last: x,
        iterations: max_iter,
        residual,
        history,
    })
}
