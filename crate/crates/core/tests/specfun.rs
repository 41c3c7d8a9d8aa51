mod common;

use std::f64::consts::{FRAC_PI_4, PI};

use common::airy_oracle::airy_oracle;
use num_complex::Complex64;
use proptest::prelude::*;
use wavestrip::specfun::{
    airy, airy_full, circular_distance_mod_pi, phi, phi_left_inverse, PhiInverse,
};

/// Relative error against the oracle. For negative arguments both functions
/// oscillate through zero, so the error is measured against the modulus
/// `sqrt(Ai^2 + Bi^2)`.
pub fn airy_rel_error(x: f64) -> f64 {
    let (ai, bi) = airy_oracle(x);
    let got = airy(x).unwrap();
    if x < 0.0 {
        let m = (ai * ai + bi * bi).sqrt();
        ((got.ai - ai).abs() / m).max((got.bi - bi).abs() / m)
    } else {
        ((got.ai - ai).abs() / ai.abs()).max((got.bi - bi).abs() / bi.abs())
    }
}

#[test]
fn airy_matches_fixed_point_series() {
    let mut worst: (f64, f64) = (0.0, 0.0);
    for i in 0..=700 {
        let x = -30.0 + 0.05 * i as f64;
        let e = airy_rel_error(x);
        if e > worst.0 {
            worst = (e, x);
        }
    }
    assert!(worst.0 <= 1e-10, "max relative error {:e} at x = {}", worst.0, worst.1);
}

#[test]
fn airy_matches_oracle_at_seams() {
    for x in [-8.5, -8.4999, -3.0, -2.9999, 1.5, 1.5001, 8.4999, 8.5, 4.0, -0.001] {
        assert!(airy_rel_error(x) <= 1e-10, "x = {x}");
    }
}

#[test]
fn airy_zero_from_oracle() {
    let (ai, _) = airy_oracle(-2.338_107_410_459_767);
    assert!(ai.abs() < 1e-14);
    assert!(airy(-2.338_107_410_459_767).unwrap().ai.abs() < 1e-9);
}

#[test]
fn airy_oscillatory_envelope() {
    // |sqrt(pi) t^{1/4} Ai(-t) - sin(2/3 t^{3/2} + pi/4)| <= c / t^{5/4}
    let c = 0.2;
    for t in [10.0f64, 100.0, 1000.0] {
        let a = airy(-t).unwrap();
        let z = 2.0 / 3.0 * t.powf(1.5);
        let lhs_ai = (PI.sqrt() * t.powf(0.25) * a.ai - (z + FRAC_PI_4).sin()).abs();
        let lhs_bi = (PI.sqrt() * t.powf(0.25) * a.bi - (z + FRAC_PI_4).cos()).abs();
        let bound = c / t.powf(1.25);
        assert!(lhs_ai <= bound, "Ai at t = {t}: {lhs_ai:e} > {bound:e}");
        assert!(lhs_bi <= bound, "Bi at t = {t}: {lhs_bi:e} > {bound:e}");
    }
}

#[test]
fn phi_round_trip_exact_variant() {
    let n = 10_000;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let theta = 50.0 * PI * i as f64 / (n - 1) as f64;
        let back = phi_left_inverse(phi(theta), PhiInverse::Exact).unwrap();
        worst = worst.max(circular_distance_mod_pi(back, theta));
    }
    assert!(worst < 1e-12, "round-trip error {worst:e}");
}

#[test]
fn phi_branch_variant_offset_is_constant() {
    // Away from branch switches the literal formula is off by a constant.
    let mut offsets = Vec::new();
    for i in 0..200 {
        let theta = 0.05 + (PI - 0.1) * i as f64 / 199.0;
        let z = phi(theta);
        if (z.norm() - 0.5).abs() < 0.05 || z.re.abs() < 0.05 {
            continue;
        }
        let back = phi_left_inverse(z, PhiInverse::Branch).unwrap();
        offsets.push((back - theta).rem_euclid(PI));
    }
    let first = offsets[0];
    let spread = offsets
        .iter()
        .map(|o| circular_distance_mod_pi(*o, first))
        .fold(0.0, f64::max);
    assert!((first - FRAC_PI_4).abs() < 1e-12, "offset {first}");
    assert!(spread < 1e-12, "offset spread {spread:e}");
}

proptest! {
    #[test]
    fn phi_modulus_is_abs_sine(x in -100.0f64..100.0) {
        prop_assert!((phi(x).norm() - (x + FRAC_PI_4).sin().abs()).abs() < 1e-14);
    }

    #[test]
    fn phi_is_pi_periodic(x in -100.0f64..100.0) {
        prop_assert!((phi(x + PI) - phi(x)).norm() < 1e-12);
    }

    #[test]
    fn wronskian_holds(x in -30.0f64..5.0) {
        let a = airy_full(x).unwrap();
        prop_assert!((a.wronskian() * PI - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exact_inverse_in_range(re in -0.8f64..0.8, im in -0.8f64..0.8) {
        let t = phi_left_inverse(Complex64::new(re, im), PhiInverse::Exact).unwrap();
        prop_assert!((0.0..PI).contains(&t));
    }
}
