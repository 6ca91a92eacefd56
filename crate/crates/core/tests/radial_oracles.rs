use proptest::prelude::*;
use steklov_core::radial::{
    gh_values, rayleigh_quotient, sigma1_ball, sigma1_via_gh, solve_profile, DEFAULT_STEPS,
};

// H^3 solution regular at the origin, up to scale.
fn h3_profile(r: f64) -> (f64, f64) {
    let (s, c) = (r.sinh(), r.cosh());
    let f = (c * s - r) / (s * s);
    let fp = ((c * c + s * s - 1.0) * s * s - 2.0 * s * c * (c * s - r)) / s.powi(4);
    (f, fp)
}

fn h3_sigma(radius: f64) -> f64 {
    let (f, fp) = h3_profile(radius);
    fp / f
}

#[test]
fn hyperbolic_plane_closed_form() {
    for &radius in &[0.1, 0.5, 1.0, 2.0, 4.0] {
        let got = sigma1_ball(2, -1.0, radius).unwrap();
        let want = 1.0 / f64::sinh(radius);
        assert!((got - want).abs() <= 1e-6 * want, "R={radius}: {got} vs {want}");
    }
    assert!((sigma1_ball(2, -1.0, 1.0).unwrap() - 0.850918).abs() < 1e-6);
}

#[test]
fn hyperbolic_space_closed_form() {
    for &radius in &[0.2, 1.0, 3.0] {
        let got = sigma1_ball(3, -1.0, radius).unwrap();
        let want = h3_sigma(radius);
        assert!((got - want).abs() <= 1e-6 * want, "R={radius}: {got} vs {want}");
    }
}

#[test]
fn scaled_curvature_matches_rescaled_ball() {
    // sigma_1 on B_R in M_{-4} equals 2 sigma_1 on B_{2R} in M_{-1}.
    let a = sigma1_ball(2, -4.0, 0.75).unwrap();
    let b = 2.0 * sigma1_ball(2, -1.0, 1.5).unwrap();
    assert!((a - b).abs() < 1e-8 * b);
}

#[test]
fn euclidean_balls() {
    for n in 2..6 {
        let s = sigma1_ball(n, 0.0, 2.0).unwrap();
        assert!((s - 0.5).abs() < 1e-10, "n={n}: {s}");
    }
}

#[test]
fn gh_identity_holds() {
    for &(n, kappa, radius) in &[(2, -1.0, 1.0), (3, -1.0, 2.0), (4, -0.3, 1.2), (2, 0.0, 1.0)] {
        let a = sigma1_ball(n, kappa, radius).unwrap();
        let b = sigma1_via_gh(n, kappa, radius).unwrap();
        assert!((a - b).abs() <= 1e-6 * a, "n={n} kappa={kappa}: {a} vs {b}");
    }
}

#[test]
fn fourth_order_convergence() {
    let exact = 1.0 / f64::sinh(2.0);
    let err = |steps| (solve_profile(2, -1.0, 2.0, steps).unwrap().sigma1() - exact).abs();
    let (e1, e2) = (err(64), err(128));
    let ratio = e1 / e2;
    assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio} ({e1}, {e2})");
}

#[test]
fn exact_profile_minimizes_rayleigh_quotient() {
    let p = solve_profile(2, -1.0, 1.0, 1024).unwrap();
    let exact = rayleigh_quotient(&p, p.f()).unwrap();
    assert!((exact - p.sigma1()).abs() < 1e-6);
    let perturbed: Vec<f64> = p.grid().iter().zip(p.f()).map(|(r, f)| f + 0.05 * r * r * r).collect();
    assert!(rayleigh_quotient(&p, &perturbed).unwrap() > exact);
}

#[test]
fn gh_identity_over_grid() {
    for n in 2..=4 {
        for &kappa in &[0.0, -0.5, -1.0] {
            for &radius in &[0.5, 1.0, 2.0] {
                let a = sigma1_ball(n, kappa, radius).unwrap();
                let b = sigma1_via_gh(n, kappa, radius).unwrap();
                assert!((a - b).abs() <= 1e-6 * a, "n={n} kappa={kappa} R={radius}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn scaling_law() {
    for &c in &[0.5, 2.0, 4.0] {
        for &(n, kappa, radius) in &[(2, -1.0, 1.0), (3, -0.5, 0.7), (4, 0.0, 1.5)] {
            let base = sigma1_ball(n, kappa, radius).unwrap();
            let scaled = sigma1_ball(n, kappa / (c * c), c * radius).unwrap();
            assert!((scaled - base / c).abs() <= 1e-8 * base / c, "c={c} n={n}: {scaled} vs {}", base / c);
        }
    }
}

#[test]
fn hyperbolic_plane_profile_is_tanh() {
    let p = solve_profile(2, -1.0, 3.0, DEFAULT_STEPS).unwrap();
    let dev = p.grid().iter().zip(p.f()).map(|(r, f)| (f - 2.0 * (r / 2.0).tanh()).abs()).fold(0.0, f64::max);
    assert!(dev <= 1e-8, "{dev}");
}

#[test]
fn g_and_h_monotone_on_dense_grid() {
    let nodes = 10_000;
    for &(kappa, radius) in &[(-1.0, 3.0), (0.0, 3.0), (1.0, 2.5)] {
        for n in 2..=4 {
            let p = solve_profile(n, kappa, radius, nodes - 1).unwrap();
            assert_eq!(p.g().len(), nodes);
            for w in p.g().windows(2) {
                assert!(w[1] - w[0] >= -1e-9, "G decreases: n={n} kappa={kappa}");
            }
        }
    }
    for &kappa in &[-1.0, -0.5, 0.0] {
        for n in 2..=4 {
            let p = solve_profile(n, kappa, 3.0, nodes - 1).unwrap();
            for w in p.h().windows(2) {
                assert!(w[1] - w[0] <= 1e-9, "H increases: n={n} kappa={kappa}");
            }
        }
    }
}

#[test]
fn gh_point_values() {
    let (g, h) = gh_values(2, 0.0, 1.0).unwrap();
    assert!((g - 3.0).abs() < 1e-9 && (h - 2.0).abs() < 1e-9);
    let (g, h) = gh_values(4, 0.0, 0.5).unwrap();
    assert!((g - 2.5).abs() < 1e-9 && (h - 4.0).abs() < 1e-9);

    // F = 2 tanh(r/2), F' = sech^2(r/2), sn = sinh.
    let r = 1.0f64;
    let f = 2.0 * (r / 2.0).tanh();
    let fp = 1.0 / (r / 2.0).cosh().powi(2);
    let g_want = 2.0 * f * fp + r.cosh() / r.sinh() * f * f;
    let h_want = fp * fp + f * f / r.sinh().powi(2);
    let (g, h) = gh_values(2, -1.0, 1.0).unwrap();
    assert!((g - g_want).abs() < 1e-6 && (h - h_want).abs() < 1e-6);
}

#[test]
fn rayleigh_quotient_of_polynomials() {
    let p = solve_profile(2, 0.0, 1.0, 1024).unwrap();
    let linear = rayleigh_quotient(&p, p.grid()).unwrap();
    assert!((linear - 1.0).abs() < 1e-6);
    // int_0^1 (4 r^2 + r^2) r dr = 5/4.
    let square: Vec<f64> = p.grid().iter().map(|r| r * r).collect();
    assert!((rayleigh_quotient(&p, &square).unwrap() - 1.25).abs() < 1e-5);
    let mut vanishing = square.clone();
    *vanishing.last_mut().unwrap() = 0.0;
    assert!(rayleigh_quotient(&p, &vanishing).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn random_trial_functions_do_not_beat_sigma1(
        n in 2usize..=4,
        kappa in prop_oneof![Just(0.0), Just(-0.5), Just(-1.0)],
        radius in prop_oneof![Just(0.5), Just(1.0), Just(2.0)],
        a in proptest::collection::vec(-1.0f64..1.0, 4),
    ) {
        let p = solve_profile(n, kappa, radius, 1024).unwrap();
        let phi: Vec<f64> = p
            .grid()
            .iter()
            .map(|&r| {
                let t = r / radius;
                r * (1.0 + a[0] * t + a[1] * t * t + a[2] * (3.0 * t).sin() + a[3] * t.powi(4))
            })
            .collect();
        prop_assume!(phi.last().unwrap().abs() > 1e-3 * radius);
        let q = rayleigh_quotient(&p, &phi).unwrap();
        prop_assert!(q >= p.sigma1() * (1.0 - 1e-4), "q={} sigma1={}", q, p.sigma1());
    }
}
