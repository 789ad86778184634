//! The critical-line analytic layer: `ζ(1/2 + it)`, Hardy's `Z`, the
//! Riemann–Siegel theta phase, zero tables, and the cumulative second
//! moment that the ladder construction inverts.
//!
//! Two independent evaluators back the line: Euler–Maclaurin summation
//! (linear cost, ~1e-12 accuracy, used below [`ZETA_METHOD_SWITCH`]) and
//! the Riemann–Siegel formula with five correction terms (square-root
//! cost, used above). Their agreement on the overlap is asserted in tests,
//! so a regression in either shows up as a cross-method gap long before it
//! pollutes the tables built on top.

pub mod euler_maclaurin;
pub mod loggamma;
pub mod riemann_siegel;
pub mod second_moment;
pub mod theta;
pub mod zeros;

pub use euler_maclaurin::zeta_half_line;
pub use loggamma::ln_gamma_complex;
pub use riemann_siegel::{hardy_z_riemann_siegel, RS_T_MIN};
pub use second_moment::{SecondMomentTable, SECOND_MOMENT_REL_TOL, SECOND_MOMENT_STEP};
pub use theta::{riemann_siegel_theta, riemann_siegel_theta_prime, THETA_ASYMPTOTIC_MIN};
pub use zeros::{
    find_z_extrema, find_z_zeros, hardy_z_prime, TableSource, ZZeroTable, INGEST_RESIDUAL_TOL,
    ZERO_REFINE_TOL,
};

/// Heights at or above this use the Riemann–Siegel formula; below it,
/// Euler–Maclaurin. At the switch the Riemann–Siegel absolute error is
/// under 1e-9 and Euler–Maclaurin costs ~520 terms, so both accuracy and
/// cost favour exactly this neighbourhood.
pub const ZETA_METHOD_SWITCH: f64 = 400.0;

/// Hardy's `Z(t) = e^{iθ(t)} ζ(1/2 + it)`, real-valued with
/// `|Z(t)| = |ζ(1/2 + it)|`.
///
/// # Panics
/// If `t` is negative or not finite.
pub fn hardy_z(t: f64) -> f64 {
    if t < ZETA_METHOD_SWITCH {
        let z = zeta_half_line(t);
        let (sin_theta, cos_theta) = riemann_siegel_theta(t).sin_cos();
        z.re * cos_theta - z.im * sin_theta
    } else {
        hardy_z_riemann_siegel(t)
    }
}

/// `|ζ(1/2 + it)|²`, the second-moment integrand.
///
/// # Panics
/// If `t` is negative or not finite.
pub fn zeta_mod_sq(t: f64) -> f64 {
    if t < ZETA_METHOD_SWITCH {
        zeta_half_line(t).norm_sqr()
    } else {
        let z = hardy_z_riemann_siegel(t);
        z * z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close_abs(actual: f64, expected: f64, tol: f64, what: &str) {
        assert!(
            (actual - expected).abs() <= tol,
            "{what}: actual={actual:.16e}, expected={expected:.16e}"
        );
    }

    #[test]
    fn rotated_zeta_is_real_on_the_euler_maclaurin_range() {
        // Z(t) is real by construction; the imaginary part of e^{iθ}ζ is a
        // direct probe of the theta/zeta phase agreement.
        let mut t = 10.0;
        while t <= 399.0 {
            let z = zeta_half_line(t);
            let (sin_theta, cos_theta) = riemann_siegel_theta(t).sin_cos();
            let imag = z.re * sin_theta + z.im * cos_theta;
            assert!(
                imag.abs() <= 1e-6,
                "Im(e^{{iθ}}ζ) = {imag:.3e} at t={t}"
            );
            t += 7.7;
        }
    }

    #[test]
    fn dispatcher_matches_frozen_values_on_both_sides() {
        let cases = [
            (30.0, 0.596_028_519_239_884_9, 1e-11),
            (100.0, 2.692_697_056_664_463_5, 1e-11),
            (250.5, -1.175_862_516_922_561_8, 1e-10),
            (523.7, -0.957_736_663_919_158_7, 3e-9),
            (1000.3, 2.194_978_321_699_487_4, 3e-9),
        ];
        for (t, expected, tol) in cases {
            assert_close_abs(hardy_z(t), expected, tol, "Z via dispatcher");
        }
    }

    #[test]
    fn modulus_agrees_between_z_and_zeta_routes() {
        for &t in &[20.0, 150.0, 399.9, 400.0, 777.3, 4000.0] {
            let from_z = hardy_z(t) * hardy_z(t);
            let direct = zeta_mod_sq(t);
            assert!(
                (from_z - direct).abs() <= 1e-8 * direct.max(1e-6),
                "|ζ|² route mismatch at t={t}: {from_z} vs {direct}"
            );
        }
    }

    #[test]
    fn methods_agree_at_the_switch() {
        let em = {
            let z = zeta_half_line(ZETA_METHOD_SWITCH);
            let (sin_theta, cos_theta) = riemann_siegel_theta(ZETA_METHOD_SWITCH).sin_cos();
            z.re * cos_theta - z.im * sin_theta
        };
        let rs = hardy_z_riemann_siegel(ZETA_METHOD_SWITCH);
        assert_close_abs(em, rs, 2e-9, "hand-over continuity");
    }
}
