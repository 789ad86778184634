//! The mean-value laboratory: everything between a validated extremal
//! cell and a finished verification record.
//!
//! The chain, per cell `[γ', γ'']` of a generator `G` with extremum `t0`:
//!
//! 1. **Hat cell** — pull the cell back through the ladder,
//!    `φ₁{[γ̊', γ̊'']} = [γ', γ'']`, `φ₁(t̊₀) = t₀`.
//! 2. **Exact moment identity** —
//!    `∫ |G|^α |G'| dx = 2/(α+1)·|G(t₀)|^{α+1}` (a pure calculus fact
//!    used as the denominator's closed form).
//! 3. **ω estimate** — the weighted mean value
//!    `ω = ∫_{γ̊'}^{γ̊''} |G(φ₁)|^α |G'(φ₁)| w(t) dt / (ln γ' · 2/(α+1)·|G(t₀)|^{α+1})`
//!    with `w = |ζ(1/2+it)|²`; expected `1 + O(ln ln γ'/ln γ')`.
//! 4. **Exponent fixed point** — `α* = 2·ω(α*)·ln γ' − 1` by damped
//!    iteration (ω depends only weakly on α).
//! 5. **Unit integral** — at `α*`, the H-normalized weighted integral is
//!    forced to 1; its deviation measures the numerics, not the theorem.
//! 6. **Mean-value point** — `t_H ∈ (γ̊', γ̊'')` with
//!    `w(t_H) = 1/I`, `I = ∫ |H|^{α*} |H'_{φ₁}| dt`: the executable
//!    content of the `1/|ζ(1/2+it_H)|²` representation.
//! 7. **Deformation functional** — the same pipeline on a bump-deformed
//!    generator, and **Dirac concentration** — how the weighted mass
//!    piles onto `t̊₀` as the exponent grows.
//!
//! Everything is computed in H-normalized form (`H = G/G(t₀)`, so all
//! integrands are `O(1)`) and rescaled on output; this keeps Bessel cells
//! — whose `|G(t₀)|^{α+1}` is as small as `1e-30` — inside the
//! quadrature's absolute floor.

use std::sync::Arc;

use serde::Serialize;

use crate::cell::ExtremalCell;
use crate::error::{Error, Result};
use crate::exec;
use crate::generators::{make_deformed_generator, validate_cell, DeformationSpec, Generator};
use crate::ladder::LadderTable;
use crate::numerics::{adaptive_integrate, fixed_point, integrate_peaked};

/// t-step of the dense φ₁ march over a hat cell.
const CELL_LADDER_STEP: f64 = 1e-3;

/// Allowed drift between the marched and the re-solved φ₁ at the far end
/// of a hat cell.
const CELL_LADDER_DRIFT_TOL: f64 = 1e-7;

/// Relative tolerance of the cell-level quadratures.
const CELL_QUADRATURE_REL_TOL: f64 = 1e-9;

/// Scan resolution for locating the mean-value point.
const TH_SCAN_POINTS: usize = 1024;

/// Treat the weight as constant across the scan below this relative
/// variation (the degenerate case where every point is a mean-value
/// point). Deliberately looser than machine epsilon but far tighter than
/// any genuine `|ζ|²` variation over a cell, and independent of the
/// `O(1e-6)` slack the exponent fixed point leaves in `1/I`.
const DEGENERATE_WEIGHT_TOL: f64 = 1e-9;

/// Fixed-point controls for the exponent solve.
const EXPONENT_DAMPING: f64 = 0.5;
const EXPONENT_TOL: f64 = 1e-6;
const EXPONENT_MAX_ITER: usize = 50;

/// A cell together with its φ₁-preimages.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HatCell {
    pub cell: ExtremalCell,
    pub gamma_lo_hat: f64,
    pub gamma_hi_hat: f64,
    pub t0_hat: f64,
}

impl HatCell {
    pub fn width(&self) -> f64 {
        self.gamma_hi_hat - self.gamma_lo_hat
    }

    /// Distance from `t̊₀` to the nearer hat endpoint: the largest δ for
    /// which the concentration window stays inside the hat cell.
    pub fn half_width_at_t0(&self) -> f64 {
        (self.t0_hat - self.gamma_lo_hat).min(self.gamma_hi_hat - self.t0_hat)
    }
}

/// One measurement of the weighted mean value ω at a fixed exponent.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OmegaEstimate {
    /// `numerator / denominator` (stored division of the two fields).
    pub omega: f64,
    /// Exponent the integrand was evaluated at.
    pub alpha_used: f64,
    /// `∫_{γ̊'}^{γ̊''} |G(φ₁)|^α |G'(φ₁)| w(t) dt`.
    pub numerator: f64,
    /// `ln γ' · 2/(α+1) · |G(t₀)|^{α+1}`.
    pub denominator: f64,
    /// The cell measured.
    pub cell: ExtremalCell,
}

/// Converged solution of `α = 2·ω(α)·ln γ' − 1`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentSolution {
    pub alpha_star: f64,
    /// ω measured at the final iterate.
    pub omega_star: f64,
    pub iterations: usize,
    /// `|α − g(α)|` at convergence.
    pub residual: f64,
}

/// The located mean-value point and its certificate.
#[derive(Debug, Clone, Serialize)]
pub struct THLocation {
    /// The intermediate-value root nearest `t̊₀`.
    pub t_h: f64,
    /// `|w(t_H)·I − 1|`.
    pub residual: f64,
    /// `I = ∫ |H|^{α*} |H'_{φ₁}| dt` over the hat cell (no weight).
    pub i_integral: f64,
    /// Every root found by the scan, ascending.
    pub all_roots: Vec<f64>,
}

/// Everything measured for one cell.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    /// Family tag of the generator measured.
    pub generator: String,
    pub hat_cell: HatCell,
    pub exponent: ExponentSolution,
    /// `I`: the representation integral (reciprocal of `|ζ|²` at `t_H`).
    pub i_integral: f64,
    /// The construction-forced weighted unit integral; ≈ 1.
    pub unit_check: f64,
    pub t_h: f64,
    /// `|w(t_H)·I − 1|`.
    pub t_h_residual: f64,
    /// `(δ, fraction of the weighted mass within δ of t̊₀)`.
    pub concentration: Vec<(f64, f64)>,
}

/// Knobs for the full per-cell pipeline.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Run cells that fail the width-admissibility condition anyway.
    pub allow_inadmissible: bool,
    /// Concentration window sizes as fractions of the hat cell's
    /// half-width at `t̊₀`, ascending.
    pub delta_fractions: Vec<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            allow_inadmissible: false,
            delta_fractions: vec![0.05, 0.1, 0.2, 0.5, 1.0],
        }
    }
}

/// Pull one cell back through the ladder.
pub fn hat_cell(table: &LadderTable, cell: &ExtremalCell) -> Result<HatCell> {
    let gamma_lo_hat = table.phi1_inverse(cell.gamma_lo)?;
    let gamma_hi_hat = table.phi1_inverse(cell.gamma_hi)?;
    let t0_hat = table.phi1_inverse(cell.t0)?;
    debug_assert!(gamma_lo_hat < t0_hat && t0_hat < gamma_hi_hat);
    Ok(HatCell { cell: *cell, gamma_lo_hat, gamma_hi_hat, t0_hat })
}

/// Dense φ₁ interpolant over one hat cell.
///
/// # Algorithm
/// Classical RK4 on `dφ/dt = w(t)/(ln φ + 1 + c − ln 2π)` at a fixed fine
/// step (two weight evaluations per step via midpoint sharing), then
/// cubic Hermite between knots using the stored `(φ, φ')` pairs. The far
/// endpoint is compared against an independent root solve and must agree
/// to [`CELL_LADDER_DRIFT_TOL`]; quadrature inside the cell then pays
/// ~100ns per φ₁ value instead of a fresh transcendental solve.
struct CellLadder {
    t_lo: f64,
    step: f64,
    /// `(φ, φ')` at `t_lo + i·step`.
    knots: Vec<(f64, f64)>,
}

impl CellLadder {
    fn build(table: &LadderTable, t_lo: f64, t_hi: f64) -> Result<Self> {
        let steps = ((t_hi - t_lo) / CELL_LADDER_STEP).ceil().max(2.0) as usize;
        let h = (t_hi - t_lo) / steps as f64;
        let config = *table.config();
        let source = table.source();

        let mut knots = Vec::with_capacity(steps + 1);
        let mut phi = table.phi1(t_lo)?;
        let mut w_here = source.weight(t_lo);
        for i in 0..steps {
            let t = t_lo + i as f64 * h;
            knots.push((phi, w_here / config.log_offset(phi)));
            let w_mid = source.weight(t + 0.5 * h);
            let w_next = source.weight(t + h);
            let k1 = w_here / config.log_offset(phi);
            let k2 = w_mid / config.log_offset(phi + 0.5 * h * k1);
            let k3 = w_mid / config.log_offset(phi + 0.5 * h * k2);
            let k4 = w_next / config.log_offset(phi + h * k3);
            phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            w_here = w_next;
        }
        knots.push((phi, w_here / config.log_offset(phi)));

        let resolved = table.phi1(t_hi)?;
        let drift = (phi - resolved).abs();
        assert!(
            drift <= CELL_LADDER_DRIFT_TOL * resolved.abs().max(1.0),
            "cell ladder drifted {drift:.3e} from the root solve over [{t_lo}, {t_hi}]"
        );
        // Pin the endpoint so downstream interpolation is exact there.
        knots.last_mut().expect("at least two knots").0 = resolved;
        Ok(Self { t_lo, step: h, knots })
    }

    /// φ₁(t) by cubic Hermite between the two enclosing knots.
    fn phi(&self, t: f64) -> f64 {
        let pos = (t - self.t_lo) / self.step;
        let i = (pos.floor() as usize).min(self.knots.len() - 2);
        let u = pos - i as f64;
        let (p0, d0) = self.knots[i];
        let (p1, d1) = self.knots[i + 1];
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        h00 * p0 + self.step * (h10 * d0 + h11 * d1) + h01 * p1
    }
}

/// `lhs = ∫_{γ'}^{γ''} |G|^α |G'| dx` by quadrature against the closed
/// form `rhs = 2/(α+1)·|G(t₀)|^{α+1}`; returns `(lhs, rhs, relative
/// residual)`.
pub fn exact_moment_identity(
    g: &dyn Generator,
    cell: &ExtremalCell,
    alpha: f64,
) -> Result<(f64, f64, f64)> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("moment exponent must be positive, got {alpha}")));
    }
    let scale = cell.g_at_t0.abs();
    // Integrate the H-normalized integrand so the absolute scale is O(1)
    // regardless of how small |G(t₀)| is, then rescale the value.
    let f = |x: f64| (g.value(x) / scale).abs().powf(alpha) * (g.derivative(x) / scale).abs();
    // |G|^α humps flank t₀ at roughly width/√(α+1); hint all three spots.
    let flank = cell.width() / (alpha + 1.0).sqrt();
    let hints = [cell.t0 - flank, cell.t0, cell.t0 + flank];
    let q = adaptive_integrate(f, cell.gamma_lo, cell.gamma_hi, CELL_QUADRATURE_REL_TOL, &hints)?;
    let scale_back = scale.powf(alpha + 1.0);
    let lhs = q.value * scale_back;
    let rhs = 2.0 / (alpha + 1.0) * scale_back;
    Ok((lhs, rhs, (lhs - rhs).abs() / rhs))
}

/// The ω numerator in H-normalized units:
/// `∫_{γ̊'}^{γ̊''} |G(φ₁)/G(t₀)|^α · |G'(φ₁)/G(t₀)| · w(t) dt`.
fn normalized_weighted_integral(
    table: &LadderTable,
    g: &dyn Generator,
    hat: &HatCell,
    ladder: &CellLadder,
    alpha: f64,
) -> Result<f64> {
    let scale = hat.cell.g_at_t0.abs();
    let source = table.source();
    let f = |t: f64| {
        let x = ladder.phi(t);
        (g.value(x) / scale).abs().powf(alpha)
            * (g.derivative(x) / scale).abs()
            * source.weight(t)
    };
    let q = adaptive_integrate(
        f,
        hat.gamma_lo_hat,
        hat.gamma_hi_hat,
        CELL_QUADRATURE_REL_TOL,
        &[hat.t0_hat],
    )?;
    Ok(q.value)
}

fn omega_estimate_inner(
    table: &LadderTable,
    g: &dyn Generator,
    hat: &HatCell,
    ladder: &CellLadder,
    alpha: f64,
) -> Result<OmegaEstimate> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("omega exponent must be positive, got {alpha}")));
    }
    let cell = hat.cell;
    let normalized = normalized_weighted_integral(table, g, hat, ladder, alpha)?;
    let scale_back = cell.g_at_t0.abs().powf(alpha + 1.0);
    let numerator = normalized * scale_back;
    let denominator = cell.gamma_lo.ln() * 2.0 / (alpha + 1.0) * scale_back;
    Ok(OmegaEstimate {
        omega: numerator / denominator,
        alpha_used: alpha,
        numerator,
        denominator,
        cell,
    })
}

/// Measure ω for one admissible cell at a fixed exponent.
pub fn omega_estimate(
    table: &LadderTable,
    g: &dyn Generator,
    cell: &ExtremalCell,
    alpha: f64,
) -> Result<OmegaEstimate> {
    require_admissible(cell)?;
    let hat = hat_cell(table, cell)?;
    let ladder = CellLadder::build(table, hat.gamma_lo_hat, hat.gamma_hi_hat)?;
    omega_estimate_inner(table, g, &hat, &ladder, alpha)
}

fn require_admissible(cell: &ExtremalCell) -> Result<()> {
    if cell.is_admissible() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "cell [{}, {}] is wider ({}) than its admissibility bound ({}); \
             the mean-value hypotheses do not apply",
            cell.gamma_lo,
            cell.gamma_hi,
            cell.width(),
            cell.admissibility_bound()
        )))
    }
}

fn solve_exponent_inner(
    table: &LadderTable,
    g: &dyn Generator,
    hat: &HatCell,
    ladder: &CellLadder,
) -> Result<ExponentSolution> {
    let log_gamma = hat.cell.gamma_lo.ln();
    let alpha0 = 2.0 * log_gamma - 1.0;
    let mut last_omega = f64::NAN;
    let mut failure: Option<Error> = None;
    let iterate = |alpha: f64| -> f64 {
        match omega_estimate_inner(table, g, hat, ladder, alpha) {
            Ok(est) => {
                last_omega = est.omega;
                2.0 * est.omega * log_gamma - 1.0
            }
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        }
    };
    let fp = fixed_point(iterate, alpha0, EXPONENT_DAMPING, EXPONENT_TOL, EXPONENT_MAX_ITER);
    if let Some(e) = failure {
        return Err(e);
    }
    let fp = fp?;
    let alpha_star = fp.value;
    Ok(ExponentSolution {
        alpha_star,
        omega_star: last_omega,
        iterations: fp.iterations,
        residual: (alpha_star - (2.0 * last_omega * log_gamma - 1.0)).abs(),
    })
}

/// Resolve the α–ω self-reference for one admissible cell.
pub fn solve_exponent(
    table: &LadderTable,
    g: &dyn Generator,
    cell: &ExtremalCell,
) -> Result<ExponentSolution> {
    require_admissible(cell)?;
    let hat = hat_cell(table, cell)?;
    let ladder = CellLadder::build(table, hat.gamma_lo_hat, hat.gamma_hi_hat)?;
    solve_exponent_inner(table, g, &hat, &ladder)
}

/// The construction-forced unit integral
/// `∫ |H(φ₁)|^{α*} |H'_{φ₁}| w(t) dt` with `H = G/G(t₀)`; ≈ 1 for a
/// converged exponent, and its deviation measures the numerics.
pub fn weighted_unit_integral(
    table: &LadderTable,
    g: &dyn Generator,
    cell: &ExtremalCell,
    exponent: &ExponentSolution,
) -> Result<f64> {
    let hat = hat_cell(table, cell)?;
    let ladder = CellLadder::build(table, hat.gamma_lo_hat, hat.gamma_hi_hat)?;
    normalized_weighted_integral(table, g, &hat, &ladder, exponent.alpha_star)
}

fn locate_t_h_inner(
    table: &LadderTable,
    g: &dyn Generator,
    hat: &HatCell,
    ladder: &CellLadder,
    alpha_star: f64,
) -> Result<THLocation> {
    let scale = hat.cell.g_at_t0.abs();
    let f = |t: f64| {
        let x = ladder.phi(t);
        (g.value(x) / scale).abs().powf(alpha_star) * (g.derivative(x) / scale).abs()
    };
    // No weight: a smooth pair of humps flanking t̊₀, ideal for the
    // peak-aware splitter.
    let peak_width = hat.width() / (alpha_star + 1.0).sqrt();
    let i_integral = integrate_peaked(
        f,
        hat.gamma_lo_hat,
        hat.gamma_hi_hat,
        hat.t0_hat,
        peak_width,
        CELL_QUADRATURE_REL_TOL,
    )?
    .value;
    if !(i_integral > 0.0) {
        return Err(Error::Domain(format!(
            "representation integral I = {i_integral} is not positive"
        )));
    }
    let target = 1.0 / i_integral;

    // Scan the weight across the hat cell for crossings of 1/I.
    let source = table.source();
    let n = TH_SCAN_POINTS;
    let step = hat.width() / n as f64;
    let ts: Vec<f64> = (0..=n).map(|i| hat.gamma_lo_hat + i as f64 * step).collect();
    let ws: Vec<f64> = exec::map_slice(&ts, |&t| source.weight(t));

    let (mut w_min, mut w_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &w in &ws {
        w_min = w_min.min(w);
        w_max = w_max.max(w);
    }
    if w_max - w_min <= DEGENERATE_WEIGHT_TOL * w_max.abs().max(1.0) {
        // Numerically constant weight: every point is a mean-value
        // point; report the scan point nearest t̊₀.
        let t_h = ts
            .iter()
            .copied()
            .min_by(|a, b| {
                (a - hat.t0_hat).abs().total_cmp(&(b - hat.t0_hat).abs())
            })
            .expect("scan is nonempty");
        return Ok(THLocation {
            t_h,
            residual: (source.weight(t_h) * i_integral - 1.0).abs(),
            i_integral,
            all_roots: vec![t_h],
        });
    }

    let mut all_roots = Vec::new();
    for i in 0..n {
        let (f_lo, f_hi) = (ws[i] - target, ws[i + 1] - target);
        if f_lo == 0.0 {
            all_roots.push(ts[i]);
        } else if f_lo * f_hi < 0.0 {
            let root = crate::numerics::find_root_bracketed(
                |t| source.weight(t) - target,
                ts[i],
                ts[i + 1],
                1e-13,
            )?;
            all_roots.push(root);
        }
    }
    if ws[n] - target == 0.0 {
        all_roots.push(ts[n]);
    }
    if all_roots.is_empty() {
        // The mean-value sandwich w_min ≤ 1/I ≤ w_max failed at scan
        // resolution: an upstream numerical problem, reported with the
        // evidence.
        return Err(Error::ZeroIsolation {
            lo: hat.gamma_lo_hat,
            hi: hat.gamma_hi_hat,
            detail: format!(
                "no crossing of 1/I = {target:.6e}: weight scan spans [{w_min:.6e}, {w_max:.6e}]"
            ),
        });
    }
    let t_h = all_roots
        .iter()
        .copied()
        .min_by(|a, b| (a - hat.t0_hat).abs().total_cmp(&(b - hat.t0_hat).abs()))
        .expect("roots are nonempty");
    Ok(THLocation {
        t_h,
        residual: (source.weight(t_h) * i_integral - 1.0).abs(),
        i_integral,
        all_roots,
    })
}

/// Locate the mean-value point `t_H` with `w(t_H) = 1/I`.
pub fn locate_t_h(
    table: &LadderTable,
    g: &dyn Generator,
    cell: &ExtremalCell,
    exponent: &ExponentSolution,
) -> Result<THLocation> {
    let hat = hat_cell(table, cell)?;
    let ladder = CellLadder::build(table, hat.gamma_lo_hat, hat.gamma_hi_hat)?;
    locate_t_h_inner(table, g, &hat, &ladder, exponent.alpha_star)
}

fn dirac_concentration_inner(
    table: &LadderTable,
    g: &dyn Generator,
    hat: &HatCell,
    ladder: &CellLadder,
    alpha: f64,
    deltas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    for &d in deltas {
        if !(d > 0.0 && d <= hat.width()) {
            return Err(Error::Domain(format!(
                "concentration window {d} outside (0, {}]",
                hat.width()
            )));
        }
    }
    let scale = hat.cell.g_at_t0.abs();
    let source = table.source();
    let f = |t: f64| {
        let x = ladder.phi(t);
        (g.value(x) / scale).abs().powf(alpha)
            * (g.derivative(x) / scale).abs()
            * source.weight(t)
    };
    let total = adaptive_integrate(
        f,
        hat.gamma_lo_hat,
        hat.gamma_hi_hat,
        CELL_QUADRATURE_REL_TOL,
        &[hat.t0_hat],
    )?
    .value;
    if !(total > 0.0) {
        return Err(Error::Domain(format!("weighted cell mass {total} is not positive")));
    }
    let mut fractions = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let lo = (hat.t0_hat - d).max(hat.gamma_lo_hat);
        let hi = (hat.t0_hat + d).min(hat.gamma_hi_hat);
        let inside = adaptive_integrate(f, lo, hi, CELL_QUADRATURE_REL_TOL, &[hat.t0_hat])?.value;
        fractions.push((d, inside / total));
    }
    Ok(fractions)
}

/// Fraction of the weighted cell mass within `δ` of `t̊₀`, for each `δ`.
///
/// The exponent is a free parameter (rather than only the fixed point) so
/// concentration at `α*` can be compared against small exponents — the
/// Dirac mechanism is precisely that growing exponents pile the mass onto
/// `t̊₀`. Fractions are normalized by the total mass at the same `α`.
pub fn dirac_concentration(
    table: &LadderTable,
    g: &dyn Generator,
    cell: &ExtremalCell,
    alpha: f64,
    deltas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("concentration exponent must be positive: {alpha}")));
    }
    let hat = hat_cell(table, cell)?;
    let ladder = CellLadder::build(table, hat.gamma_lo_hat, hat.gamma_hi_hat)?;
    dirac_concentration_inner(table, g, &hat, &ladder, alpha, deltas)
}

/// Run the whole pipeline for one cell.
pub fn verify_cell(
    table: &LadderTable,
    g: &dyn Generator,
    cell: &ExtremalCell,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let validation = validate_cell(g, cell);
    if !validation.passed() {
        return Err(Error::Domain(format!(
            "cell [{}, {}] fails structural validation: {validation:?}",
            cell.gamma_lo, cell.gamma_hi
        )));
    }
    if !options.allow_inadmissible {
        require_admissible(cell)?;
    }
    let hat = hat_cell(table, cell)?;
    let ladder = CellLadder::build(table, hat.gamma_lo_hat, hat.gamma_hi_hat)?;
    let exponent = solve_exponent_inner(table, g, &hat, &ladder)?;
    let unit_check = normalized_weighted_integral(table, g, &hat, &ladder, exponent.alpha_star)?;
    let location = locate_t_h_inner(table, g, &hat, &ladder, exponent.alpha_star)?;
    let half = hat.half_width_at_t0();
    let deltas: Vec<f64> = options.delta_fractions.iter().map(|f| f * half).collect();
    let concentration =
        dirac_concentration_inner(table, g, &hat, &ladder, exponent.alpha_star, &deltas)?;
    Ok(VerificationReport {
        generator: g.label(),
        hat_cell: hat,
        exponent,
        i_integral: location.i_integral,
        unit_check,
        t_h: location.t_h,
        t_h_residual: location.residual,
        concentration,
    })
}

/// Verify many cells concurrently (each cell is independent; the table
/// and generator are shared read-only).
pub fn verify_cells(
    table: &LadderTable,
    g: &dyn Generator,
    cells: &[ExtremalCell],
    options: &VerifyOptions,
) -> Vec<Result<VerificationReport>> {
    exec::map_slice(cells, |cell| verify_cell(table, g, cell, options))
}

/// Evaluate the deformation functional `ℱ[H_T]`: run the pipeline on the
/// bump-deformed generator and return its representation integral
/// together with the full report. `ℱ[H_T]·w(t_{H_T}) = 1` up to the
/// numerics.
pub fn functional_f(
    table: &LadderTable,
    base: Arc<dyn Generator>,
    spec: DeformationSpec,
    options: &VerifyOptions,
) -> Result<(f64, VerificationReport)> {
    let deformed = make_deformed_generator(base, spec)?;
    let cell = deformed.cell();
    let report = verify_cell(table, &deformed, &cell, options)?;
    Ok((report.i_integral, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts::LADDER_LOG_OFFSET;
    use crate::generators::{
        make_bessel_generator, make_cn_generator, make_scaled_generator, make_sn_generator,
    };
    use crate::ladder::{LadderConfig, WeightSource};
    use crate::zeta::SecondMomentTable;
    use std::sync::OnceLock;

    fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
        assert!(
            (actual - expected).abs() <= tol,
            "{what}: actual={actual:.16e}, expected={expected:.16e}, diff={:.3e}",
            (actual - expected).abs()
        );
    }

    /// Shared zeta-weight ladder over [30, 300].
    fn zeta_ladder() -> &'static LadderTable {
        static TABLE: OnceLock<LadderTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let moments = SecondMomentTable::build(10.0, 301.0).unwrap();
            LadderTable::build(LadderConfig::default(), WeightSource::Zeta(moments), 300.0)
                .unwrap()
        })
    }

    fn uniform_ladder() -> &'static LadderTable {
        static TABLE: OnceLock<LadderTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            LadderTable::build(LadderConfig::default(), WeightSource::Uniform, 300.0).unwrap()
        })
    }

    /// An sn cell whose x-range sits inside the shared ladder's image.
    fn sn_cell_near(x: f64) -> (crate::generators::SnGenerator, ExtremalCell) {
        let g = make_sn_generator(0.5).unwrap();
        let cells = g.cells(x - 10.0, x + 10.0).unwrap();
        let cell = cells[0];
        (g, cell)
    }

    #[test]
    fn hat_cell_round_trips_through_the_ladder() {
        let table = zeta_ladder();
        let (_, cell) = sn_cell_near(100.0);
        let hat = hat_cell(table, &cell).unwrap();

        assert!(hat.gamma_lo_hat < hat.t0_hat && hat.t0_hat < hat.gamma_hi_hat);
        assert!(hat.gamma_lo_hat > cell.gamma_lo, "preimage must sit above the image");
        assert_close(table.phi1(hat.gamma_lo_hat).unwrap(), cell.gamma_lo, 1e-7, "φ₁(γ̊')");
        assert_close(table.phi1(hat.gamma_hi_hat).unwrap(), cell.gamma_hi, 1e-7, "φ₁(γ̊'')");
        assert_close(table.phi1(hat.t0_hat).unwrap(), cell.t0, 1e-7, "φ₁(t̊₀)");
        assert!(
            hat.width() > cell.width(),
            "hat width {} should exceed cell width {}",
            hat.width(),
            cell.width()
        );
    }

    #[test]
    fn cell_ladder_matches_pointwise_solves() {
        let table = zeta_ladder();
        let (_, cell) = sn_cell_near(100.0);
        let hat = hat_cell(table, &cell).unwrap();
        let ladder = CellLadder::build(table, hat.gamma_lo_hat, hat.gamma_hi_hat).unwrap();
        for i in 0..=20 {
            let t = hat.gamma_lo_hat + hat.width() * i as f64 / 20.0;
            let dense = ladder.phi(t);
            let solved = table.phi1(t).unwrap();
            assert_close(dense, solved, 1e-7, "dense φ₁ vs root solve");
        }
    }

    #[test]
    fn moment_identity_is_exact_for_sn_at_alpha_one() {
        let (g, cell) = sn_cell_near(100.0);
        let (lhs, rhs, residual) = exact_moment_identity(&g, &cell, 1.0).unwrap();
        assert_close(rhs, 1.0, 1e-15, "closed form at |G(t₀)| = 1, α = 1");
        assert!(residual <= 1e-8, "lhs {lhs} vs rhs {rhs}: residual {residual:.3e}");
    }

    #[test]
    fn moment_identity_scales_homogeneously() {
        let alpha = 3.0;
        let base: Arc<dyn Generator> = Arc::new(make_cn_generator(0.5).unwrap());
        let cell = base.cells(90.0, 110.0).unwrap()[0];
        let (_, rhs_base, _) = exact_moment_identity(base.as_ref(), &cell, alpha).unwrap();

        let doubled = make_scaled_generator(Arc::clone(&base), 2.0).unwrap();
        let cell2 = doubled.cells(90.0, 110.0).unwrap()[0];
        let (lhs2, rhs2, residual) = exact_moment_identity(&doubled, &cell2, alpha).unwrap();
        assert_close(
            rhs2,
            rhs_base * 2f64.powf(alpha + 1.0),
            1e-12 * rhs2.abs(),
            "rhs homogeneity of degree α+1",
        );
        assert!(residual <= 1e-8, "scaled lhs {lhs2} vs rhs {rhs2}");
    }

    #[test]
    fn moment_identity_holds_for_a_bessel_cell_at_alpha_five() {
        let g = make_bessel_generator(0.0).unwrap();
        let cell = g.cells(95.0, 110.0).unwrap()[0];
        let (lhs, rhs, residual) = exact_moment_identity(&g, &cell, 5.0).unwrap();
        assert!(
            residual <= 1e-8,
            "Bessel moment identity: lhs {lhs:.12e} vs rhs {rhs:.12e} ({residual:.3e})"
        );
    }

    #[test]
    fn numerator_change_of_variables_is_consistent() {
        // t-space (through the dense cell ladder) versus x-space (through
        // the exact substitution dt·w = (ln x + A)dx): the load-bearing
        // correctness check of the hat machinery.
        let table = zeta_ladder();
        let (g, cell) = sn_cell_near(100.0);
        let hat = hat_cell(table, &cell).unwrap();
        let ladder = CellLadder::build(table, hat.gamma_lo_hat, hat.gamma_hi_hat).unwrap();
        for alpha in [1.0, 4.0, 11.0] {
            let t_space = normalized_weighted_integral(table, &g, &hat, &ladder, alpha).unwrap();
            let scale = cell.g_at_t0.abs();
            let x_space = adaptive_integrate(
                |x| {
                    (g.value(x) / scale).abs().powf(alpha)
                        * (g.derivative(x) / scale).abs()
                        * (x.ln() + LADDER_LOG_OFFSET)
                },
                cell.gamma_lo,
                cell.gamma_hi,
                CELL_QUADRATURE_REL_TOL,
                &[cell.t0],
            )
            .unwrap()
            .value;
            assert!(
                (t_space - x_space).abs() <= 1e-5 * x_space.abs(),
                "change of variables at α = {alpha}: t-space {t_space:.12e} vs x-space {x_space:.12e}"
            );
        }
    }

    #[test]
    fn omega_sits_in_the_diagnostic_band() {
        let table = zeta_ladder();
        let (g, cell) = sn_cell_near(100.0);
        let est = omega_estimate(table, &g, &cell, 8.0).unwrap();
        assert!(
            (0.7..=1.3).contains(&est.omega),
            "ω = {} outside the diagnostic band",
            est.omega
        );
        assert!(est.omega > 0.0);
        assert_eq!(est.omega, est.numerator / est.denominator);

        // Degree-zero homogeneity: rescaling G leaves ω (nearly) bit-identical.
        let base: Arc<dyn Generator> = Arc::new(make_sn_generator(0.5).unwrap());
        let doubled = make_scaled_generator(base, 2.0).unwrap();
        let cell2 = doubled.cells(90.0, 110.0).unwrap()[0];
        let est2 = omega_estimate(table, &doubled, &cell2, 8.0).unwrap();
        assert!(
            (est.omega - est2.omega).abs() <= 1e-9,
            "ω not scale-free: {} vs {}",
            est.omega,
            est2.omega
        );
    }

    #[test]
    fn omega_matches_the_expected_log_ratio() {
        // ω is a weighted average of (ln x + A)/ln γ' over the cell, so it
        // should sit near (ln t₀ + A)/ln γ'.
        let table = zeta_ladder();
        let (g, cell) = sn_cell_near(100.0);
        let est = omega_estimate(table, &g, &cell, 8.0).unwrap();
        let predicted = (cell.t0.ln() + LADDER_LOG_OFFSET) / cell.gamma_lo.ln();
        assert_close(est.omega, predicted, 0.02, "ω vs log-ratio prediction");
    }

    #[test]
    fn inadmissible_cells_are_refused() {
        let table = zeta_ladder();
        let g = make_bessel_generator(0.0).unwrap();
        // Bessel cells near the origin are wider than γ'/ln γ'.
        let near = g.cells(2.0, 9.0).unwrap()[0];
        assert!(!near.is_admissible());
        assert!(omega_estimate(table, &g, &near, 2.0).is_err());
        assert!(solve_exponent(table, &g, &near).is_err());
    }

    #[test]
    fn exponent_fixed_point_converges_fast() {
        let table = zeta_ladder();
        let (g, cell) = sn_cell_near(100.0);
        let sol = solve_exponent(table, &g, &cell).unwrap();
        let log_gamma = cell.gamma_lo.ln();
        assert!(sol.iterations <= 20, "took {} iterations", sol.iterations);
        assert!(sol.residual <= 1e-5, "fixed-point residual {:.3e}", sol.residual);
        assert!(
            (log_gamma..=4.0 * log_gamma).contains(&sol.alpha_star),
            "α* = {} outside [ln γ', 4 ln γ']",
            sol.alpha_star
        );
        assert_close(
            sol.alpha_star,
            2.0 * sol.omega_star * log_gamma - 1.0,
            1e-5,
            "α* vs 2ω* ln γ' − 1",
        );
    }

    #[test]
    fn exponent_grows_with_the_cell_height() {
        let table = zeta_ladder();
        let (g, low_cell) = sn_cell_near(60.0);
        let (_, high_cell) = sn_cell_near(250.0);
        let low = solve_exponent(table, &g, &low_cell).unwrap();
        let high = solve_exponent(table, &g, &high_cell).unwrap();
        assert!(
            low.alpha_star < high.alpha_star,
            "α* fell: {} at γ'={} vs {} at γ'={}",
            low.alpha_star,
            low_cell.gamma_lo,
            high.alpha_star,
            high_cell.gamma_lo
        );
    }

    #[test]
    fn unit_integral_is_forced_to_one_and_feels_alpha() {
        let table = zeta_ladder();
        let (g, cell) = sn_cell_near(100.0);
        let sol = solve_exponent(table, &g, &cell).unwrap();
        let unit = weighted_unit_integral(table, &g, &cell, &sol).unwrap();
        assert_close(unit, 1.0, 1e-4, "construction-forced unit integral");

        // Perturbing the exponent must visibly break the unit value:
        // value(α) ≈ (α*+1)/(α+1).
        let perturbed = ExponentSolution { alpha_star: sol.alpha_star + 0.5, ..sol };
        let drifted = weighted_unit_integral(table, &g, &cell, &perturbed).unwrap();
        assert!(
            (drifted - 1.0).abs() > 1e-3,
            "unit integral insensitive to α: {drifted} at α+0.5"
        );
    }

    #[test]
    fn g_form_of_the_weighted_integral_matches_the_scaling_identity() {
        // Running the weighted integral with G in place of H multiplies
        // it by |G(t₀)|^{α+1}: the un-normalized identity.
        let table = zeta_ladder();
        let base: Arc<dyn Generator> = Arc::new(make_sn_generator(0.5).unwrap());
        let tripled = make_scaled_generator(base, 3.0).unwrap();
        let cell = tripled.cells(90.0, 110.0).unwrap()[0];
        let alpha = 9.0;
        let est = omega_estimate(table, &tripled, &cell, alpha).unwrap();
        // numerator IS the G-form integral; compare against the ω-scaled
        // closed form assembled from independently measured pieces.
        let expected = est.omega * 2.0 / (alpha + 1.0) * cell.gamma_lo.ln()
            * cell.g_at_t0.abs().powf(alpha + 1.0);
        assert!(
            (est.numerator - expected).abs() <= 1e-4 * expected.abs(),
            "G-form integral {:.9e} vs scaled identity {:.9e}",
            est.numerator,
            expected
        );
    }

    #[test]
    fn t_h_sits_inside_the_hat_cell_with_a_tiny_residual() {
        let table = zeta_ladder();
        let (g, cell) = sn_cell_near(100.0);
        let sol = solve_exponent(table, &g, &cell).unwrap();
        let hat = hat_cell(table, &cell).unwrap();
        let loc = locate_t_h(table, &g, &cell, &sol).unwrap();
        assert!(
            loc.t_h > hat.gamma_lo_hat && loc.t_h < hat.gamma_hi_hat,
            "t_H = {} not strictly inside ({}, {})",
            loc.t_h,
            hat.gamma_lo_hat,
            hat.gamma_hi_hat
        );
        assert!(loc.residual <= 1e-4, "residual {:.3e}", loc.residual);
        assert!(!loc.all_roots.is_empty());
        // The returned root is the t̊₀-nearest one.
        let nearest = loc
            .all_roots
            .iter()
            .copied()
            .min_by(|a, b| (a - hat.t0_hat).abs().total_cmp(&(b - hat.t0_hat).abs()))
            .unwrap();
        assert_eq!(loc.t_h, nearest);
        // Mean-value sandwich: some scan weight below 1/I, some above
        // (otherwise no root would have been found).
        assert!(loc.i_integral > 0.0);
    }

    #[test]
    fn uniform_weight_degenerates_to_the_extremum() {
        // With weight ≡ 1 the fixed point forces I = 1 and every point is
        // a mean-value point; the locator reports t̊₀ (nearest scan point).
        // The uniform ladder's image at t ≤ 300 only reaches x ≈ 92, so
        // use a cell well below that.
        let table = uniform_ladder();
        let (g, cell) = sn_cell_near(60.0);
        let sol = solve_exponent(table, &g, &cell).unwrap();
        let loc = locate_t_h(table, &g, &cell, &sol).unwrap();
        // I inherits the fixed point's O(tol) slack in α*.
        assert_close(loc.i_integral, 1.0, 1e-5, "degenerate I");
        let hat = hat_cell(table, &cell).unwrap();
        assert!(
            (loc.t_h - hat.t0_hat).abs() <= hat.width() / TH_SCAN_POINTS as f64,
            "degenerate t_H = {} should be the scan point nearest t̊₀ = {}",
            loc.t_h,
            hat.t0_hat
        );
        assert!(loc.residual <= 1e-5);
        assert_eq!(loc.all_roots.len(), 1);
    }

    #[test]
    fn concentration_is_monotone_normalized_and_sharper_at_alpha_star() {
        let table = zeta_ladder();
        let (g, cell) = sn_cell_near(100.0);
        let sol = solve_exponent(table, &g, &cell).unwrap();
        let hat = hat_cell(table, &cell).unwrap();
        let half = hat.half_width_at_t0();
        let deltas = [0.05, 0.1, 0.2, 0.5, 1.0].map(|f| f * half);

        let at_star = dirac_concentration(table, &g, &cell, sol.alpha_star, &deltas).unwrap();
        for w in at_star.windows(2) {
            assert!(
                w[1].1 >= w[0].1,
                "mass fraction decreased: {:?} -> {:?}",
                w[0],
                w[1]
            );
        }
        // The window reaching the nearer endpoint holds most of the mass
        // (not all: the hat cell is asymmetric about t̊₀, so the far side
        // keeps its share).
        let full_window = at_star.last().unwrap();
        assert!(
            full_window.1 >= 0.7,
            "window spanning to the nearer endpoint holds {} of the mass",
            full_window.1
        );

        let at_one = dirac_concentration(table, &g, &cell, 1.0, &deltas).unwrap();
        assert!(
            at_star[1].1 > at_one[1].1,
            "no concentration gain at α*: {} vs {} at δ = 0.1·half",
            at_star[1].1,
            at_one[1].1
        );

        // Fractions are normalized: a window clipped to the whole hat
        // cell carries exactly everything.
        let all = dirac_concentration(table, &g, &cell, sol.alpha_star, &[hat.width()]).unwrap();
        assert_close(all[0].1, 1.0, 1e-12, "full-width mass fraction");

        // Out-of-range windows are refused.
        assert!(dirac_concentration(table, &g, &cell, 2.0, &[2.0 * hat.width()]).is_err());
        assert!(dirac_concentration(table, &g, &cell, 2.0, &[0.0]).is_err());
    }

    #[test]
    fn verify_cell_assembles_a_consistent_report() {
        let table = zeta_ladder();
        let (g, cell) = sn_cell_near(100.0);
        let report = verify_cell(table, &g, &cell, &VerifyOptions::default()).unwrap();
        assert_eq!(report.generator, g.label());
        assert_close(report.unit_check, 1.0, 1e-4, "unit check");
        assert!(report.t_h_residual <= 1e-4);
        assert!(report.t_h > report.hat_cell.gamma_lo_hat);
        assert!(report.t_h < report.hat_cell.gamma_hi_hat);
        assert_close(
            report.i_integral * table.source().weight(report.t_h),
            1.0,
            1e-4,
            "representation identity",
        );
        assert_eq!(report.concentration.len(), VerifyOptions::default().delta_fractions.len());

        // And the whole thing in parallel over two cells.
        let g2 = make_sn_generator(0.5).unwrap();
        let cells = g2.cells(80.0, 120.0).unwrap();
        let reports = verify_cells(table, &g2, &cells, &VerifyOptions::default());
        assert!(reports.iter().all(|r| r.is_ok()));
    }

    #[test]
    fn scale_invariance_of_the_whole_pipeline() {
        let table = zeta_ladder();
        let base: Arc<dyn Generator> = Arc::new(make_sn_generator(0.5).unwrap());
        let cell = base.cells(90.0, 110.0).unwrap()[0];
        let report = verify_cell(table, base.as_ref(), &cell, &VerifyOptions::default()).unwrap();

        for factor in [0.5, 3.0] {
            let scaled = make_scaled_generator(Arc::clone(&base), factor).unwrap();
            let scaled_cell = scaled.cells(90.0, 110.0).unwrap()[0];
            let scaled_report =
                verify_cell(table, &scaled, &scaled_cell, &VerifyOptions::default()).unwrap();
            let close = |a: f64, b: f64, what: &str| {
                assert!(
                    (a - b).abs() <= 1e-6 * b.abs().max(1.0),
                    "{what} moved under λ = {factor}: {a} vs {b}"
                );
            };
            close(scaled_report.exponent.alpha_star, report.exponent.alpha_star, "α*");
            close(scaled_report.exponent.omega_star, report.exponent.omega_star, "ω*");
            close(scaled_report.i_integral, report.i_integral, "I");
            close(scaled_report.t_h, report.t_h, "t_H");
        }
    }

    #[test]
    fn functional_reduces_to_the_base_integral_at_zero_deformation() {
        let table = zeta_ladder();
        let base: Arc<dyn Generator> = Arc::new(make_sn_generator(0.5).unwrap());
        let cell = base.cells(90.0, 110.0).unwrap()[0];
        let base_report =
            verify_cell(table, base.as_ref(), &cell, &VerifyOptions::default()).unwrap();

        let spec = DeformationSpec {
            cell,
            amplitudes: vec![0.0],
            centers: vec![cell.t0 + 0.1 * cell.width()],
            widths: vec![0.2 * cell.width()],
        };
        let (value, report) =
            functional_f(table, Arc::clone(&base), spec, &VerifyOptions::default()).unwrap();
        assert!(
            (value - base_report.i_integral).abs() <= 1e-9 * base_report.i_integral,
            "zero deformation moved ℱ: {value} vs {}",
            base_report.i_integral
        );
        assert!(report.t_h_residual <= 1e-4);
    }

    #[test]
    fn deformed_functional_satisfies_the_representation() {
        let table = zeta_ladder();
        let base: Arc<dyn Generator> = Arc::new(make_sn_generator(0.5).unwrap());
        let cell = base.cells(90.0, 110.0).unwrap()[0];
        // Off-centre bump gentle enough to keep the single-extremum
        // structure (narrow bumps put 1/width into the slope and get
        // rejected).
        let spec = DeformationSpec {
            cell,
            amplitudes: vec![0.05],
            centers: vec![cell.t0 - 0.15 * cell.width()],
            widths: vec![0.3 * cell.width()],
        };
        let (value, report) =
            functional_f(table, Arc::clone(&base), spec, &VerifyOptions::default()).unwrap();
        let w_at_t_h = table.source().weight(report.t_h);
        assert_close(value * w_at_t_h, 1.0, 1e-4, "ℱ[H_T]·|ζ(1/2 + i t_H)|²");

        // H_T is still normalized at the (recomputed) extremum.
        let deformed_t0 = report.hat_cell.cell.t0;
        assert!(
            (report.hat_cell.cell.g_at_t0.abs() > 0.0) && deformed_t0 > cell.gamma_lo
        );
        assert_close(report.unit_check, 1.0, 1e-4, "deformed unit check");
    }
}
