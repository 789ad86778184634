//! Generator families: the `C¹` functions whose extremal cells feed the
//! mean-value machinery.
//!
//! A generator `G` supplies `value`, `derivative`, and the extremal cells
//! `[γ', γ'']` between consecutive zeros, each holding one interior
//! extremum `t0`. Four concrete families are implemented — Jacobi `sn`/`cn`
//! on their exact period lattice, the Bessel ratio `J_ν(x)/x^ν` with its
//! exact derivative identity, and Hardy's `Z` with scanned zeros — plus
//! two combinators: compactly supported `C¹` bump deformations and uniform
//! rescaling.
//!
//! Every constructor validates its parameters; every cell a family emits
//! is expected to pass [`validate_cell`], and the deformation constructor
//! re-validates structure after perturbing (rejecting deformations that
//! break sign-fixedness or create extra extrema rather than emitting a
//! broken generator).

use std::sync::Arc;

use crate::cell::ExtremalCell;
use crate::error::{Error, Result};
use crate::numerics::find_root_bracketed;
use crate::special::{
    bessel_ratio, bessel_ratio_cells, bessel_ratio_derivative, jacobi_cells_cn, jacobi_cells_sn,
    jacobi_sncndn, BesselOrder, EllipticModulus,
};
use crate::zeta;

/// Scan resolution for structural re-validation (sign-fixedness and
/// extremum counting) of a cell interior.
pub const STRUCTURE_SCAN_POINTS: usize = 512;

/// Scan resolution for the H-normalization check
/// (`|G(t)/G(t0)| ≤ 1` inside the cell).
pub const NORMALIZATION_SCAN_POINTS: usize = 1024;

/// Finite-difference step for the Hardy-Z generator derivative.
const HARDY_Z_DERIVATIVE_STEP: f64 = 1e-4;

/// Residual gates for cell validation, relative to `|G(t0)|`.
const ENDPOINT_RESIDUAL_TOL: f64 = 1e-8;
const EXTREMUM_DERIVATIVE_TOL: f64 = 1e-7;

/// A `C¹` generator on its supported range.
///
/// Implementations are immutable after construction and safe to share
/// across threads; evaluation is pure.
pub trait Generator: Send + Sync {
    /// `G(x)`.
    ///
    /// # Panics
    /// On arguments outside the family's supported range (e.g. `x ≤ 0`
    /// for the Bessel ratio, `x < 10` for Hardy Z).
    fn value(&self, x: f64) -> f64;

    /// `G'(x)` with the same domain contract as [`Generator::value`].
    fn derivative(&self, x: f64) -> f64;

    /// Extremal cells wholly contained in `[lo, hi]`, in ascending order.
    fn cells(&self, lo: f64, hi: f64) -> Result<Vec<ExtremalCell>>;

    /// Short human-readable family tag (stable; used in reports).
    fn label(&self) -> String;
}

/// Jacobi `sn(x; k)`: zeros at `2lK`, extrema `±1` at `(2l+1)K`.
pub struct SnGenerator {
    modulus: EllipticModulus,
}

/// Jacobi `cn(x; k)`: zeros at `(2l+1)K`, extrema `±1` at `(2l+2)K`.
pub struct CnGenerator {
    modulus: EllipticModulus,
}

/// The Bessel ratio `G(x) = J_ν(x)/x^ν` with the exact derivative
/// `G'(x) = −J_{ν+1}(x)/x^ν`.
pub struct BesselRatioGenerator {
    order: BesselOrder,
}

/// Hardy's `Z(t)`, with the derivative by Richardson-extrapolated central
/// differences and cells from the scanned zero/extremum tables.
pub struct HardyZGenerator;

pub fn make_sn_generator(k_sq: f64) -> Result<SnGenerator> {
    Ok(SnGenerator { modulus: EllipticModulus::new(k_sq)? })
}

pub fn make_cn_generator(k_sq: f64) -> Result<CnGenerator> {
    Ok(CnGenerator { modulus: EllipticModulus::new(k_sq)? })
}

pub fn make_bessel_generator(nu: f64) -> Result<BesselRatioGenerator> {
    Ok(BesselRatioGenerator { order: BesselOrder::new(nu)? })
}

pub fn make_hardy_z_generator() -> HardyZGenerator {
    HardyZGenerator
}

impl Generator for SnGenerator {
    fn value(&self, x: f64) -> f64 {
        jacobi_sncndn(x, self.modulus.k_sq()).expect("validated modulus").sn
    }

    fn derivative(&self, x: f64) -> f64 {
        // sn' = cn·dn.
        let j = jacobi_sncndn(x, self.modulus.k_sq()).expect("validated modulus");
        j.cn * j.dn
    }

    fn cells(&self, lo: f64, hi: f64) -> Result<Vec<ExtremalCell>> {
        let quarter = self.modulus.quarter_period();
        // Cells are [2lK, (2l+2)K]; keep those inside [lo, hi].
        let l_lo = (lo / (2.0 * quarter)).ceil().max(0.0) as u64;
        let l_hi_excl = ((hi / quarter - 2.0) / 2.0).floor() + 1.0;
        if l_hi_excl <= l_lo as f64 {
            return Ok(Vec::new());
        }
        Ok(jacobi_cells_sn(&self.modulus, l_lo..l_hi_excl as u64))
    }

    fn label(&self) -> String {
        format!("sn(k2={})", self.modulus.k_sq())
    }
}

impl Generator for CnGenerator {
    fn value(&self, x: f64) -> f64 {
        jacobi_sncndn(x, self.modulus.k_sq()).expect("validated modulus").cn
    }

    fn derivative(&self, x: f64) -> f64 {
        // cn' = −sn·dn.
        let j = jacobi_sncndn(x, self.modulus.k_sq()).expect("validated modulus");
        -j.sn * j.dn
    }

    fn cells(&self, lo: f64, hi: f64) -> Result<Vec<ExtremalCell>> {
        let quarter = self.modulus.quarter_period();
        // Cells are [(2l+1)K, (2l+3)K]; keep those inside [lo, hi].
        let l_lo = ((lo / quarter - 1.0) / 2.0).ceil().max(0.0) as u64;
        let l_hi_excl = ((hi / quarter - 3.0) / 2.0).floor() + 1.0;
        if l_hi_excl <= l_lo as f64 {
            return Ok(Vec::new());
        }
        Ok(jacobi_cells_cn(&self.modulus, l_lo..l_hi_excl as u64))
    }

    fn label(&self) -> String {
        format!("cn(k2={})", self.modulus.k_sq())
    }
}

impl Generator for BesselRatioGenerator {
    fn value(&self, x: f64) -> f64 {
        bessel_ratio(self.order.get(), x).expect("validated order, x > 0")
    }

    fn derivative(&self, x: f64) -> f64 {
        bessel_ratio_derivative(self.order.get(), x).expect("validated order, x > 0")
    }

    fn cells(&self, lo: f64, hi: f64) -> Result<Vec<ExtremalCell>> {
        bessel_ratio_cells(self.order.get(), lo, hi)
    }

    fn label(&self) -> String {
        format!("bessel(nu={})", self.order.get())
    }
}

impl Generator for HardyZGenerator {
    fn value(&self, x: f64) -> f64 {
        zeta::hardy_z(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        // Richardson-extrapolated five-point central difference; the
        // 1e-4 step balances truncation (~h⁴·|Z⁽⁵⁾|) against rounding.
        let h = HARDY_Z_DERIVATIVE_STEP;
        (8.0 * (zeta::hardy_z(x + h) - zeta::hardy_z(x - h))
            - (zeta::hardy_z(x + 2.0 * h) - zeta::hardy_z(x - 2.0 * h)))
            / (12.0 * h)
    }

    fn cells(&self, lo: f64, hi: f64) -> Result<Vec<ExtremalCell>> {
        let table = zeta::ZZeroTable::build(lo, hi)?;
        let mut cells = Vec::new();
        for w in table.zeros.windows(2) {
            let (gamma_lo, gamma_hi) = (w[0], w[1]);
            // Exactly one classified extremum inside; suspect windows
            // (Lehmer-like behavior) are skipped, not repaired.
            if table
                .suspect_intervals
                .iter()
                .any(|&(a, b)| a >= gamma_lo && b <= gamma_hi)
            {
                continue;
            }
            let inside: Vec<f64> = table
                .extrema
                .iter()
                .copied()
                .filter(|&e| e > gamma_lo && e < gamma_hi)
                .collect();
            if inside.len() != 1 {
                continue;
            }
            let t0 = inside[0];
            let g_at_t0 = zeta::hardy_z(t0);
            cells.push(ExtremalCell {
                gamma_lo,
                gamma_hi,
                t0,
                sign: g_at_t0.signum(),
                g_at_t0,
            });
        }
        Ok(cells)
    }

    fn label(&self) -> String {
        "hardy-z".to_string()
    }
}

/// A compactly supported `C¹` bump profile: `β(u) = (1−u²)²` on
/// `|u| < 1`, zero outside. `β(±1) = β'(±1) = 0`, so each bump glues
/// `C¹`-smoothly into the unperturbed generator.
fn bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        let w = 1.0 - u * u;
        w * w
    } else {
        0.0
    }
}

/// `β'(u) = −4u(1−u²)` on `|u| < 1`.
fn bump_derivative(u: f64) -> f64 {
    if u.abs() < 1.0 {
        -4.0 * u * (1.0 - u * u)
    } else {
        0.0
    }
}

/// A multiplicative bump deformation of one cell of a base generator:
/// `G_T(x) = G(x)·(1 + Σ aᵢ β((x − cᵢ)/wᵢ))`.
#[derive(Debug, Clone)]
pub struct DeformationSpec {
    /// The base-generator cell being deformed.
    pub cell: ExtremalCell,
    /// Bump amplitudes `aᵢ` (dimensionless; `|aᵢ| < 1` keeps the
    /// multiplier positive on its own, though the constructor checks the
    /// combined effect structurally rather than trusting this bound).
    pub amplitudes: Vec<f64>,
    /// Bump centres `cᵢ`, strictly inside `(γ', γ'')`.
    pub centers: Vec<f64>,
    /// Bump half-widths `wᵢ > 0` with `[cᵢ − wᵢ, cᵢ + wᵢ] ⊂ [γ', γ'']`.
    pub widths: Vec<f64>,
}

/// The deformed generator `G_T`. Valid only on the deformed cell's span
/// (outside it, `G_T` coincides with the base generator by construction,
/// but only the cell itself is re-validated).
pub struct DeformedGenerator {
    base: Arc<dyn Generator>,
    spec: DeformationSpec,
    /// The re-validated cell with the recomputed extremum.
    cell: ExtremalCell,
}

impl DeformedGenerator {
    /// The deformed cell (endpoints unchanged, `t0` and `g_at_t0`
    /// recomputed after the deformation).
    pub fn cell(&self) -> ExtremalCell {
        self.cell
    }

    fn multiplier(&self, x: f64) -> f64 {
        let mut m = 1.0;
        for ((&a, &c), &w) in self
            .spec
            .amplitudes
            .iter()
            .zip(&self.spec.centers)
            .zip(&self.spec.widths)
        {
            m += a * bump((x - c) / w);
        }
        m
    }

    fn multiplier_derivative(&self, x: f64) -> f64 {
        let mut d = 0.0;
        for ((&a, &c), &w) in self
            .spec
            .amplitudes
            .iter()
            .zip(&self.spec.centers)
            .zip(&self.spec.widths)
        {
            d += a / w * bump_derivative((x - c) / w);
        }
        d
    }
}

impl Generator for DeformedGenerator {
    fn value(&self, x: f64) -> f64 {
        self.base.value(x) * self.multiplier(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.base.derivative(x) * self.multiplier(x)
            + self.base.value(x) * self.multiplier_derivative(x)
    }

    fn cells(&self, lo: f64, hi: f64) -> Result<Vec<ExtremalCell>> {
        if self.cell.gamma_lo >= lo && self.cell.gamma_hi <= hi {
            Ok(vec![self.cell])
        } else {
            Ok(Vec::new())
        }
    }

    fn label(&self) -> String {
        format!("deformed[{}]", self.base.label())
    }
}

/// Build a deformed generator, re-validating the Theorem hypotheses on the
/// cell: endpoint zeros survive (the deformation is multiplicative), the
/// sign stays fixed inside, and exactly one interior extremum remains. The
/// extremum generally moves; its new location is re-solved and stored in
/// the returned generator's cell.
pub fn make_deformed_generator(
    base: Arc<dyn Generator>,
    spec: DeformationSpec,
) -> Result<DeformedGenerator> {
    let cell = spec.cell;
    if !cell.is_well_formed() {
        return Err(Error::DeformationRejected {
            reason: "base cell is not well-formed".to_string(),
            witness: cell.t0,
        });
    }
    if spec.amplitudes.len() != spec.centers.len() || spec.amplitudes.len() != spec.widths.len() {
        return Err(Error::DeformationRejected {
            reason: format!(
                "mismatched bump arrays: {} amplitudes, {} centers, {} widths",
                spec.amplitudes.len(),
                spec.centers.len(),
                spec.widths.len()
            ),
            witness: f64::NAN,
        });
    }
    for (&c, &w) in spec.centers.iter().zip(&spec.widths) {
        if !(w > 0.0) {
            return Err(Error::DeformationRejected {
                reason: format!("non-positive bump width {w}"),
                witness: c,
            });
        }
        if c - w < cell.gamma_lo || c + w > cell.gamma_hi {
            return Err(Error::DeformationRejected {
                reason: format!(
                    "bump support [{}, {}] escapes the cell [{}, {}]",
                    c - w,
                    c + w,
                    cell.gamma_lo,
                    cell.gamma_hi
                ),
                witness: c,
            });
        }
    }

    let deformed = DeformedGenerator { base, spec, cell };

    // Structural re-validation on a fine interior scan: sign-fixedness and
    // the derivative's sign pattern (exactly one change, extremum-shaped).
    let width = cell.width();
    let mut previous_slope_sign = 0.0;
    let mut slope_changes = 0usize;
    let mut bracket: Option<(f64, f64)> = None;
    for i in 0..STRUCTURE_SCAN_POINTS {
        let x = cell.gamma_lo + width * (i as f64 + 0.5) / STRUCTURE_SCAN_POINTS as f64;
        let v = deformed.value(x);
        if cell.sign * v <= 0.0 {
            return Err(Error::DeformationRejected {
                reason: format!("sign-fixedness destroyed: G_T({x}) = {v}"),
                witness: x,
            });
        }
        let slope_sign = deformed.derivative(x).signum();
        if previous_slope_sign != 0.0 && slope_sign != 0.0 && slope_sign != previous_slope_sign {
            slope_changes += 1;
            let x_prev =
                cell.gamma_lo + width * (i as f64 - 0.5) / STRUCTURE_SCAN_POINTS as f64;
            bracket = Some((x_prev, x));
            if slope_changes > 1 {
                return Err(Error::DeformationRejected {
                    reason: format!("multiple interior extrema: second slope flip near {x}"),
                    witness: x,
                });
            }
        }
        if slope_sign != 0.0 {
            previous_slope_sign = slope_sign;
        }
    }
    let (bracket_lo, bracket_hi) = bracket.ok_or_else(|| Error::DeformationRejected {
        reason: "no interior extremum found after deformation".to_string(),
        witness: cell.t0,
    })?;

    let t0 = find_root_bracketed(|x| deformed.derivative(x), bracket_lo, bracket_hi, 1e-12)?;
    let g_at_t0 = deformed.value(t0);
    let new_cell = ExtremalCell { t0, g_at_t0, sign: g_at_t0.signum(), ..cell };
    Ok(DeformedGenerator { cell: new_cell, ..deformed })
}

/// `λ·G` for a fixed `λ > 0`: used to exercise the scale invariance of
/// the normalized pipeline (`H` is scale-free).
pub struct ScaledGenerator {
    base: Arc<dyn Generator>,
    factor: f64,
}

pub fn make_scaled_generator(base: Arc<dyn Generator>, factor: f64) -> Result<ScaledGenerator> {
    if !(factor > 0.0) || !factor.is_finite() {
        return Err(Error::Domain(format!("scale factor must be positive, got {factor}")));
    }
    Ok(ScaledGenerator { base, factor })
}

impl Generator for ScaledGenerator {
    fn value(&self, x: f64) -> f64 {
        self.factor * self.base.value(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.factor * self.base.derivative(x)
    }

    fn cells(&self, lo: f64, hi: f64) -> Result<Vec<ExtremalCell>> {
        Ok(self
            .base
            .cells(lo, hi)?
            .into_iter()
            .map(|c| ExtremalCell { g_at_t0: self.factor * c.g_at_t0, ..c })
            .collect())
    }

    fn label(&self) -> String {
        format!("scaled[{} x {}]", self.base.label(), self.factor)
    }
}

/// Outcome of checking one cell against every structural invariant.
/// Failures are data, not errors: callers decide what to do with a cell
/// that fails (the theorem harness refuses them; the CLI prints them).
#[derive(Debug, Clone)]
pub struct CellValidation {
    /// `|G(γ')|` and `|G(γ'')|`, expected ≤ 1e-8·|G(t0)|.
    pub endpoint_residuals: (f64, f64),
    /// `|G'(t0)|`, expected ≤ 1e-7·|G(t0)|.
    pub derivative_at_t0: f64,
    /// Interior sign-change count of `G'` on the structure scan
    /// (1 means exactly one extremum).
    pub interior_extrema: usize,
    /// First scan point where `sign·G(x) ≤ 0`, if any.
    pub sign_violation: Option<f64>,
    /// Largest `|G(x)/G(t0)|` over the interior normalization scan.
    pub normalization_max: f64,
    /// Width admissibility `γ'' − γ' ≤ γ'/ln γ'` (flag, not a failure).
    pub admissible: bool,
}

impl CellValidation {
    /// All structural checks passed (admissibility is reported separately:
    /// an inadmissible cell can still be structurally perfect).
    pub fn passed(&self) -> bool {
        let scale = 1.0f64; // residuals below are already scale-normalized
        self.endpoint_residuals.0 <= ENDPOINT_RESIDUAL_TOL * scale
            && self.endpoint_residuals.1 <= ENDPOINT_RESIDUAL_TOL * scale
            && self.derivative_at_t0 <= EXTREMUM_DERIVATIVE_TOL * scale
            && self.interior_extrema == 1
            && self.sign_violation.is_none()
            && self.normalization_max <= 1.0 + 1e-12
    }
}

/// Check every structural invariant of `cell` under `generator`.
///
/// Residual fields are normalized by `|G(t0)|` so the gates are
/// scale-free; see [`CellValidation::passed`].
pub fn validate_cell(generator: &dyn Generator, cell: &ExtremalCell) -> CellValidation {
    let scale = cell.g_at_t0.abs().max(f64::MIN_POSITIVE);
    let width = cell.width();

    let endpoint_residuals = (
        generator.value(cell.gamma_lo).abs() / scale,
        generator.value(cell.gamma_hi).abs() / scale,
    );
    let derivative_at_t0 = generator.derivative(cell.t0).abs() / scale;

    let mut sign_violation = None;
    let mut interior_extrema = 0usize;
    let mut previous_slope_sign = 0.0;
    for i in 0..STRUCTURE_SCAN_POINTS {
        let x = cell.gamma_lo + width * (i as f64 + 0.5) / STRUCTURE_SCAN_POINTS as f64;
        if sign_violation.is_none() && cell.sign * generator.value(x) <= 0.0 {
            sign_violation = Some(x);
        }
        let slope_sign = generator.derivative(x).signum();
        if previous_slope_sign != 0.0 && slope_sign != 0.0 && slope_sign != previous_slope_sign {
            interior_extrema += 1;
        }
        if slope_sign != 0.0 {
            previous_slope_sign = slope_sign;
        }
    }

    let mut normalization_max = 0.0f64;
    for i in 0..NORMALIZATION_SCAN_POINTS {
        let x = cell.gamma_lo + width * (i as f64 + 0.5) / NORMALIZATION_SCAN_POINTS as f64;
        normalization_max = normalization_max.max((generator.value(x) / cell.g_at_t0).abs());
    }

    CellValidation {
        endpoint_residuals,
        derivative_at_t0,
        interior_extrema,
        sign_violation,
        normalization_max,
        admissible: cell.is_admissible(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
        assert!(
            (actual - expected).abs() <= tol,
            "{what}: actual={actual:.16e}, expected={expected:.16e}, diff={:.3e}",
            (actual - expected).abs()
        );
    }

    /// Five-point central difference for derivative cross-checks.
    fn finite_difference(g: &dyn Generator, x: f64, h: f64) -> f64 {
        (8.0 * (g.value(x + h) - g.value(x - h)) - (g.value(x + 2.0 * h) - g.value(x - 2.0 * h)))
            / (12.0 * h)
    }

    #[test]
    fn sn_extrema_have_unit_magnitude() {
        let g = make_sn_generator(0.5).unwrap();
        for cell in g.cells(0.0, 40.0).unwrap() {
            assert_close(g.value(cell.t0).abs(), 1.0, 1e-12, "|sn| at cell extremum");
            assert_close(cell.g_at_t0.abs(), 1.0, 1e-15, "recorded |G(t0)|");
        }
    }

    #[test]
    fn sn_cell_count_matches_the_lattice() {
        let g = make_sn_generator(0.5).unwrap();
        let quarter = EllipticModulus::new(0.5).unwrap().quarter_period();
        // Cells [2lK, (2l+2)K] inside [0, 20K]: l = 0..=9.
        let cells = g.cells(0.0, 20.0 * quarter).unwrap();
        assert_eq!(cells.len(), 10, "sn cells in [0, 20K]");
        // And the lattice positions are exact.
        assert_close(cells[0].gamma_lo, 0.0, 1e-15, "first cell left endpoint");
        assert_close(cells[9].gamma_hi, 20.0 * quarter, 1e-12, "last cell right endpoint");
    }

    #[test]
    fn jacobi_derivatives_match_finite_differences() {
        let sn = make_sn_generator(0.5).unwrap();
        let cn = make_cn_generator(0.5).unwrap();
        for i in 0..200 {
            let x = 0.05 + i as f64 * 0.11;
            for g in [&sn as &dyn Generator, &cn as &dyn Generator] {
                let fd = finite_difference(g, x, 1e-4);
                assert!(
                    (g.derivative(x) - fd).abs() <= 1e-7,
                    "{} derivative at {x}: analytic {} vs fd {fd}",
                    g.label(),
                    g.derivative(x)
                );
            }
        }
    }

    #[test]
    fn bessel_first_cell_matches_frozen_zeros() {
        // First two zeros of J0 to 15 digits.
        let g = make_bessel_generator(0.0).unwrap();
        let cells = g.cells(1.0, 9.0).unwrap();
        assert!(!cells.is_empty());
        assert_close(cells[0].gamma_lo, 2.404_825_557_695_773, 1e-9, "first J0 zero");
        assert_close(cells[0].gamma_hi, 5.520_078_110_286_311, 1e-9, "second J0 zero");
        // The interior extremum is the interlaced J1 zero.
        assert_close(cells[0].t0, 3.831_705_970_207_512, 1e-9, "first J1 zero");
    }

    #[test]
    fn bessel_derivative_identity_matches_finite_differences() {
        // The step is large (1e-3) because the difference quotient divides
        // the evaluator's ~1e-10 noise by h (≈1.5e-7 through the five-point
        // weights); truncation at this step is still far below the gate.
        let g = make_bessel_generator(0.0).unwrap();
        for i in 0..100 {
            let x = 1.0 + i as f64 * 0.37;
            let fd = finite_difference(&g, x, 1e-3);
            assert!(
                (g.derivative(x) - fd).abs() <= 1e-6,
                "Bessel ratio derivative at {x}: identity {} vs fd {fd}",
                g.derivative(x)
            );
        }
    }

    #[test]
    fn bessel_cells_far_out_are_admissible_and_near_are_not() {
        let g = make_bessel_generator(0.0).unwrap();
        // width ~ π; bound γ'/ln γ' ≈ 3.11 at γ' = 5 (fails), ≈ 9.1 at 31.
        for cell in g.cells(30.0, 60.0).unwrap() {
            assert!(cell.is_admissible(), "cell at {} should be admissible", cell.gamma_lo);
        }
        let near = g.cells(2.0, 9.0).unwrap();
        assert!(!near[0].is_admissible(), "first Bessel cell is too wide for its height");
    }

    #[test]
    fn hardy_z_first_cell_brackets_the_classical_zeros() {
        let g = make_hardy_z_generator();
        let cells = g.cells(14.0, 26.0).unwrap();
        assert!(!cells.is_empty());
        assert_close(cells[0].gamma_lo, 14.134_725_141_734_693, 1e-7, "first Z zero");
        assert_close(cells[0].gamma_hi, 21.022_039_638_771_554, 1e-7, "second Z zero");
        assert!(cells[0].t0 > 14.2 && cells[0].t0 < 20.9, "interior extremum");
    }

    #[test]
    fn hardy_z_derivative_matches_a_wider_difference() {
        let g = make_hardy_z_generator();
        for &x in &[20.0, 45.5, 101.2, 333.3] {
            let fd = finite_difference(&g, x, 5e-3);
            assert!(
                (g.derivative(x) - fd).abs() <= 1e-6 * g.derivative(x).abs().max(1.0),
                "Z' at {x}: {} vs {fd}",
                g.derivative(x)
            );
        }
    }

    #[test]
    fn every_family_emits_cells_that_validate() {
        let sn = make_sn_generator(0.5).unwrap();
        let cn = make_cn_generator(0.5).unwrap();
        let bessel = make_bessel_generator(0.0).unwrap();
        let z = make_hardy_z_generator();
        let ranges: [(&dyn Generator, f64, f64); 4] =
            [(&sn, 0.0, 30.0), (&cn, 0.0, 30.0), (&bessel, 5.0, 40.0), (&z, 12.0, 60.0)];
        for (g, lo, hi) in ranges {
            let cells = g.cells(lo, hi).unwrap();
            assert!(!cells.is_empty(), "{} emitted no cells in [{lo}, {hi}]", g.label());
            for cell in cells {
                let v = validate_cell(g, &cell);
                assert!(
                    v.passed(),
                    "{} cell at γ'={} failed validation: {v:?}",
                    g.label(),
                    cell.gamma_lo
                );
            }
        }
    }

    #[test]
    fn normalization_is_bounded_by_the_extremum() {
        // |G(t)/G(t0)| ≤ 1 inside every admissible cell, equality only
        // at t0 — the property that tames the large exponent.
        let g = make_sn_generator(0.3).unwrap();
        for cell in g.cells(0.0, 25.0).unwrap() {
            let v = validate_cell(&g, &cell);
            assert!(
                v.normalization_max <= 1.0 + 1e-12,
                "normalization overshoot: {}",
                v.normalization_max
            );
        }
    }

    #[test]
    fn validate_cell_rejects_a_corrupted_extremum() {
        let g = make_sn_generator(0.5).unwrap();
        let good = g.cells(0.0, 20.0).unwrap()[1];
        let v_good = validate_cell(&g, &good);
        assert!(v_good.passed());

        // Shift t0 off the extremum: the derivative gate must fail.
        let bad = ExtremalCell { t0: good.t0 + 0.3 * good.width(), ..good };
        let v_bad = validate_cell(&g, &bad);
        assert!(!v_bad.passed(), "corrupted cell passed: {v_bad:?}");
        assert!(v_bad.derivative_at_t0 > EXTREMUM_DERIVATIVE_TOL);
    }

    #[test]
    fn zero_amplitude_deformation_is_the_identity() {
        let base: Arc<dyn Generator> = Arc::new(make_sn_generator(0.5).unwrap());
        let cell = base.cells(0.0, 20.0).unwrap()[0];
        let spec = DeformationSpec {
            cell,
            amplitudes: vec![0.0],
            centers: vec![cell.t0 + 0.2],
            widths: vec![0.3 * cell.width()],
        };
        let deformed = make_deformed_generator(Arc::clone(&base), spec).unwrap();
        let mut sup = 0.0f64;
        for i in 0..=400 {
            let x = cell.gamma_lo + cell.width() * i as f64 / 400.0;
            sup = sup.max((deformed.value(x) - base.value(x)).abs());
        }
        assert!(sup <= 1e-15, "identity deformation differs by {sup}");
        assert_close(deformed.cell().t0, cell.t0, 1e-9, "extremum unchanged");
    }

    #[test]
    fn small_deformation_keeps_the_cell_structure() {
        let base: Arc<dyn Generator> = Arc::new(make_sn_generator(0.5).unwrap());
        let cell = base.cells(0.0, 20.0).unwrap()[1];
        // Off-centre bump whose support covers t0, so the extremum shifts.
        let spec = DeformationSpec {
            cell,
            amplitudes: vec![0.05],
            centers: vec![cell.t0 - 0.15 * cell.width()],
            widths: vec![0.3 * cell.width()],
        };
        let deformed = make_deformed_generator(Arc::clone(&base), spec).unwrap();
        let new_cell = deformed.cell();
        let v = validate_cell(&deformed, &new_cell);
        assert!(v.passed(), "deformed cell failed validation: {v:?}");
        // The bump is off-centre, so the extremum must have moved.
        assert!(
            (new_cell.t0 - cell.t0).abs() > 1e-6,
            "extremum did not move: {} vs {}",
            new_cell.t0,
            cell.t0
        );
        // And the endpoints are untouched (multiplicative deformation).
        assert_close(deformed.value(cell.gamma_lo), 0.0, 1e-12, "left endpoint zero");
        assert_close(deformed.value(cell.gamma_hi), 0.0, 1e-12, "right endpoint zero");
    }

    #[test]
    fn violent_deformation_is_rejected_with_a_witness() {
        let base: Arc<dyn Generator> = Arc::new(make_sn_generator(0.5).unwrap());
        let cell = base.cells(0.0, 20.0).unwrap()[0];
        // A deep negative bump near the extremum forces either a sign flip
        // or a second extremum; both must be rejected.
        let spec = DeformationSpec {
            cell,
            amplitudes: vec![-1.4],
            centers: vec![cell.t0 + 0.15 * cell.width()],
            widths: vec![0.12 * cell.width()],
        };
        match make_deformed_generator(base, spec) {
            Err(Error::DeformationRejected { witness, .. }) => {
                assert!(
                    witness > cell.gamma_lo && witness < cell.gamma_hi,
                    "witness {witness} outside the cell"
                );
            }
            Err(other) => panic!("wrong error kind: {other}"),
            Ok(_) => panic!("structure-destroying deformation was accepted"),
        }
    }

    #[test]
    fn bump_support_must_stay_inside_the_cell() {
        let base: Arc<dyn Generator> = Arc::new(make_sn_generator(0.5).unwrap());
        let cell = base.cells(0.0, 20.0).unwrap()[0];
        let spec = DeformationSpec {
            cell,
            amplitudes: vec![0.1],
            centers: vec![cell.gamma_lo + 0.05 * cell.width()],
            widths: vec![0.2 * cell.width()],
        };
        assert!(matches!(
            make_deformed_generator(base, spec),
            Err(Error::DeformationRejected { .. })
        ));
    }

    #[test]
    fn scaling_scales_values_and_cells() {
        let base: Arc<dyn Generator> = Arc::new(make_cn_generator(0.5).unwrap());
        let scaled = make_scaled_generator(Arc::clone(&base), 3.0).unwrap();
        let cell_base = base.cells(0.0, 20.0).unwrap()[0];
        let cell_scaled = scaled.cells(0.0, 20.0).unwrap()[0];
        assert_close(cell_scaled.g_at_t0, 3.0 * cell_base.g_at_t0, 1e-15, "scaled g_at_t0");
        assert_close(scaled.value(2.0), 3.0 * base.value(2.0), 1e-15, "scaled value");
        let v = validate_cell(&scaled, &cell_scaled);
        assert!(v.passed(), "scaled cell failed: {v:?}");
        assert!(make_scaled_generator(base, -1.0).is_err());
    }
}
