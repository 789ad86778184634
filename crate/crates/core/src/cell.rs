//! Extremal cells: the basic geometric object of the verification
//! pipeline.
//!
//! A cell `[γ', γ'']` is a span between consecutive zeros of a generator
//! `G` containing exactly one interior extremum `t0` of `G`, with `G`
//! sign-fixed inside. Width admissibility (`γ'' − γ' ≤ γ' / ln γ'`)
//! gates which cells the mean-value machinery accepts.

use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExtremalCell {
    /// Left endpoint `γ'` (a zero of the generator).
    pub gamma_lo: f64,
    /// Right endpoint `γ''` (the next zero).
    pub gamma_hi: f64,
    /// The unique interior extremum of the generator.
    pub t0: f64,
    /// Sign of the generator inside the cell: `+1.0` or `-1.0`.
    pub sign: f64,
    /// Generator value at the extremum, `G(t0)` (signed).
    pub g_at_t0: f64,
}

impl ExtremalCell {
    pub fn width(&self) -> f64 {
        self.gamma_hi - self.gamma_lo
    }

    /// Width admissibility bound `γ' / ln γ'`. Cells with `γ' ≤ 1` can
    /// never be admissible (the bound is undefined or non-positive).
    pub fn admissibility_bound(&self) -> f64 {
        if self.gamma_lo > 1.0 {
            self.gamma_lo / self.gamma_lo.ln()
        } else {
            f64::NAN
        }
    }

    /// Whether `γ'' − γ' ≤ γ' / ln γ'`.
    pub fn is_admissible(&self) -> bool {
        match self.admissibility_bound() {
            b if b.is_nan() => false,
            b => self.width() <= b,
        }
    }

    /// Basic geometric sanity: ordered endpoints with an interior `t0`
    /// and a consistent sign slot.
    pub fn is_well_formed(&self) -> bool {
        self.gamma_lo < self.t0
            && self.t0 < self.gamma_hi
            && (self.sign == 1.0 || self.sign == -1.0)
            && self.g_at_t0 != 0.0
            && self.g_at_t0.signum() == self.sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_threshold() {
        // Width exactly at the bound passes; a hair over fails.
        let bound = 100.0f64 / 100.0f64.ln();
        let cell = ExtremalCell {
            gamma_lo: 100.0,
            gamma_hi: 100.0 + bound * 0.999,
            t0: 105.0,
            sign: 1.0,
            g_at_t0: 1.0,
        };
        assert!(cell.is_admissible());
        let wide = ExtremalCell { gamma_hi: 100.0 + bound * 1.001, ..cell };
        assert!(!wide.is_admissible());
    }

    #[test]
    fn tiny_gamma_lo_is_never_admissible() {
        let cell = ExtremalCell {
            gamma_lo: 0.5,
            gamma_hi: 1.0,
            t0: 0.7,
            sign: 1.0,
            g_at_t0: 0.3,
        };
        assert!(!cell.is_admissible());
    }

    #[test]
    fn well_formedness_checks_sign_consistency() {
        let cell = ExtremalCell {
            gamma_lo: 1.0,
            gamma_hi: 2.0,
            t0: 1.5,
            sign: -1.0,
            g_at_t0: -0.4,
        };
        assert!(cell.is_well_formed());
        let bad = ExtremalCell { g_at_t0: 0.4, ..cell };
        assert!(!bad.is_well_formed());
    }
}
