//! Cross-validation of the zeta core against the independent oracles in
//! `common`: a differently-truncated Euler–Maclaurin ζ, a log-Gamma theta,
//! and an adaptive-Simpson second quadrature scheme.

mod common;

use common::{assert_close, assert_rel_close, bisect, simpson, theta_oracle, z_oracle};
use jacobs_ladder::zeta::{
    find_z_zeros, hardy_z, riemann_siegel_theta, zeta_half_line, zeta_mod_sq, SecondMomentTable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// High-precision ordinates of the first three Hardy Z zeros.
const Z_ZEROS: [f64; 3] = [14.134725141734694, 21.022039638771555, 25.01085758014569];

#[test]
fn first_three_z_zeros_match_oracle_bisection() {
    let zeros = find_z_zeros(10.0, 26.0).expect("zero scan over [10, 26]");
    assert_eq!(zeros.len(), 3, "expected exactly three zeros in [10, 26], got {zeros:?}");

    for (&found, &anchor) in zeros.iter().zip(&Z_ZEROS) {
        let oracle_zero = bisect(|t| z_oracle(t).0, anchor - 0.05, anchor + 0.05, 1e-12);
        assert_close(oracle_zero, anchor, 1e-9, "oracle bisection vs frozen ordinate");
        assert_close(found, oracle_zero, 1e-6, "refined zero vs oracle bisection");
        assert_close(found, anchor, 1e-8, "refined zero vs frozen ordinate");
    }
}

#[test]
fn phase_realness_on_random_heights() {
    // e^{iθ(t)} ζ(1/2+it) is real for real t; the imaginary leak measures
    // the joint phase accuracy of the theta and zeta implementations.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0f_f51de);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let t = rng.gen_range(10.0..10_000.0);
        let z = zeta_half_line(t);
        let theta = riemann_siegel_theta(t);
        let leak = (theta.sin() * z.re + theta.cos() * z.im).abs();
        if leak > worst {
            worst = leak;
        }
        assert!(leak <= 1e-6, "imaginary leak {leak:.3e} at t = {t}");
    }
    assert!(worst > 0.0, "leak should be tiny but not identically zero");
}

#[test]
fn hardy_z_matches_the_oracle_below_one_thousand() {
    // 401 deterministic heights covering both evaluation branches
    // (Euler–Maclaurin low, Riemann–Siegel high).
    let mut sup = 0.0_f64;
    let mut sup_leak = 0.0_f64;
    for i in 0..=400 {
        let t = 10.0 + 2.475 * i as f64;
        let (z_o, leak) = z_oracle(t);
        let z = hardy_z(t);
        sup = sup.max((z - z_o).abs());
        sup_leak = sup_leak.max(leak);
    }
    assert!(sup <= 1e-6, "sup |Z - Z_oracle| = {sup:.3e} exceeds 1e-6");
    assert!(sup_leak <= 1e-7, "oracle imaginary leak {sup_leak:.3e} too large");
}

#[test]
fn second_moment_matches_adaptive_simpson() {
    let table = SecondMomentTable::build(10.0, 101.0).expect("second-moment table");

    // Checkpoint value against the independent quadrature scheme.
    let hl_100 = table.hl(100.0).expect("hl(100)");
    let simpson_100 = simpson(&zeta_mod_sq, 0.0, 100.0, 1e-10);
    assert_rel_close(hl_100, simpson_100, 1e-8, "hl(100) vs adaptive Simpson");
    assert_rel_close(hl_100, 295.63509905471913, 1e-9, "hl(100) vs frozen value");

    // Off-checkpoint value exercises the tail integration path.
    let hl_mid = table.hl(55.5).expect("hl(55.5)");
    let simpson_mid = simpson(&zeta_mod_sq, 0.0, 55.5, 1e-10);
    assert_rel_close(hl_mid, simpson_mid, 1e-8, "hl(55.5) vs adaptive Simpson");
}

#[test]
// Frozen references keep their full published digits.
#[allow(clippy::excessive_precision)]
fn theta_oracle_agreement() {
    // Spans the log-Gamma branch (t < 10 is excluded by the ladder's
    // domain; 10 sits exactly at the asymptotic switch) through heights
    // where the asymptotic expansion must carry many leading digits.
    for &t in &[10.0, 31.6, 100.0, 1.0e3, 1.0e4, 1.0e5] {
        let main = riemann_siegel_theta(t);
        let oracle = theta_oracle(t);
        assert_close(main, oracle, 2e-9, &format!("theta({t}) main vs oracle"));
    }
    assert_close(
        theta_oracle(1.0e5),
        433752.0272291707814356,
        2e-9,
        "theta oracle vs frozen theta(1e5)",
    );
}
