//! Shared mathematical constants.

/// Euler–Mascheroni constant `c = lim (H_n − ln n)`, correctly rounded f64.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ln(2π)`, correctly rounded f64.
pub const LN_TWO_PI: f64 = 1.837_877_066_409_345_5;

/// `c − ln 2π`: the linear coefficient of the ladder equation
/// `V ln V + (c − ln 2π) V + c0 = ∫_0^T |zeta(1/2+it)|^2 dt`.
pub const LADDER_LINEAR_COEFF: f64 = EULER_GAMMA - LN_TWO_PI;

/// `1 + c − ln 2π`: shows up as the additive constant in
/// `phi1'(t) = |zeta|^2(t) / (ln phi1(t) + 1 + c − ln 2π)` and in the
/// x-space form of weighted cell integrals.
pub const LADDER_LOG_OFFSET: f64 = 1.0 + LADDER_LINEAR_COEFF;

/// Default lower edge of the ladder grid; below this the transcendental
/// equation is still solvable but none of the verification machinery
/// queries it.
pub const LADDER_T_MIN: f64 = 30.0;

/// Default relative tolerance for the per-grid-point ladder residual
/// `|hl − (phi1 ln phi1 + (c − ln 2π) phi1 + c0)| ≤ tol · hl`.
pub const LADDER_RESIDUAL_TOL: f64 = 1e-6;
