use std::f64::consts::PI;

use proptest::prelude::*;
use steklov_core::radial::solve_profile;
use steklov_core::spaceform::{ball_volume, sn};
use steklov_core::symmetrize::*;

fn two_valued() -> WeightedSampleSet {
    WeightedSampleSet::new([(2.0, PI / 4.0), (1.0, PI / 4.0), (2.0, PI / 4.0), (1.0, PI / 4.0)]).unwrap()
}

#[test]
fn superlevel_examples() {
    let c = WeightedSampleSet::new([(5.0, 1.0), (5.0, 2.0)]).unwrap();
    assert_eq!(superlevel_measure(&c, 4.0), 3.0);
    assert_eq!(superlevel_measure(&c, 5.0), 0.0);
    let two = WeightedSampleSet::new([(1.0, 0.5), (2.0, 0.5)]).unwrap();
    assert_eq!(superlevel_measure(&two, 1.5), 0.5);
    assert_eq!(superlevel_measure(&two, f64::NEG_INFINITY), two.total_measure());
}

#[test]
fn two_valued_rearrangements() {
    let s = two_valued();
    let down = rearrange_decreasing(&s, 2, 0.0).unwrap();
    let up = rearrange_increasing(&s, 2, 0.0).unwrap();
    let edge = 0.5f64.sqrt();
    assert!((down.outer_radius() - 1.0).abs() < 1e-12);
    assert_eq!(down.eval(0.0), Some(2.0));
    assert_eq!(down.eval(edge - 1e-9), Some(2.0));
    assert_eq!(down.eval(edge + 1e-9), Some(1.0));
    assert_eq!(up.eval(edge - 1e-9), Some(1.0));
    assert_eq!(up.eval(edge + 1e-9), Some(2.0));
    assert_eq!(up.eval(1.0), Some(2.0));
    assert_eq!(down.eval(1.0 + 1e-9), None);
    for f in [&down, &up] {
        assert!((f.ls_norm(1.0).unwrap() - s.ls_norm(1.0).unwrap()).abs() < 1e-12);
    }
    assert_eq!(WeightedSampleSet::new([(2.0, 3.0)]).unwrap().ls_norm(1.0).unwrap(), 6.0);
}

#[test]
fn constant_function_is_fixed() {
    let s = WeightedSampleSet::new((0..50).map(|i| (3.5, 0.01 + i as f64 * 1e-3))).unwrap();
    for f in [rearrange_decreasing(&s, 3, -1.0).unwrap(), rearrange_increasing(&s, 3, -1.0).unwrap()] {
        assert!(f.values().iter().all(|&v| v == 3.5));
    }
}

#[test]
fn empty_set_is_rejected() {
    let s = WeightedSampleSet::new(std::iter::empty()).unwrap();
    assert!(rearrange_decreasing(&s, 2, 0.0).is_err());
}

#[test]
fn eta_examples() {
    let t = EtaTransfer::new(2, -1.0, 0.0).unwrap();
    assert!((eta_transfer(&t, 1.0).unwrap() - 2.0 * 0.5f64.sinh()).abs() < 1e-12);
    assert!((eta_derivative(&t, 1.0).unwrap() - 0.5f64.cosh()).abs() < 1e-12);
    for &r in &[0.01, 0.3, 2.0, 4.5] {
        assert!((eta_transfer(&t, r).unwrap() - 2.0 * (r / 2.0).sinh()).abs() < 1e-10 * r);
    }
    let id = EtaTransfer::new(3, -0.5, -0.5).unwrap();
    assert_eq!(eta_transfer(&id, 1.3).unwrap(), 1.3);
    assert_eq!(eta_derivative(&id, 1.3).unwrap(), 1.0);
}

#[test]
fn volume_transfer_estimates() {
    let d = 3.0;
    for &(k_prime, kappa) in &[(-1.0, 0.0), (-1.0, -0.5), (-0.5, 0.0)] {
        for n in 2..=3 {
            let t = EtaTransfer::new(n, k_prime, kappa).unwrap();
            // In the model space of curvature K' the Ricci lower bound is K = K'.
            let bound = (sn(k_prime, d) / sn(kappa, d)).powi(n as i32 - 1);
            for i in 1..=1000 {
                let r = d * i as f64 / 1000.0;
                let eta = t.eta(r).unwrap();
                let deta = t.eta_derivative(r).unwrap();
                assert!(eta >= r, "eta({r}) = {eta}");
                assert!(deta >= 1.0, "eta'({r}) = {deta}");
                let ratio = sn(kappa, eta) / sn(kappa, r);
                assert!(deta.max(ratio) <= bound + 1e-9, "K'={k_prime} kappa={kappa} n={n} r={r}");
            }
        }
    }
}

// Star-shaped union of sectors about p in M_{K'}^n, with sector k covering
// a fraction `weights[k]` of the unit sphere and reaching out to radius
// `grid[outer[k]]`. The cells (radial shell x sector) have exact measures.
struct SectorStar {
    n: usize,
    k_prime: f64,
    grid: Vec<f64>,
    weights: Vec<f64>,
    outer: Vec<usize>,
}

impl SectorStar {
    fn samples<F: Fn(usize) -> f64>(&self, cell_value: F) -> WeightedSampleSet {
        let vol: Vec<f64> =
            self.grid.iter().map(|&r| ball_volume(self.n, self.k_prime, r).unwrap()).collect();
        let mut pairs = Vec::new();
        for (w, &reach) in self.weights.iter().zip(&self.outer) {
            for i in 0..reach {
                let lo = if i == 0 { 0.0 } else { vol[i - 1] };
                pairs.push((cell_value(i), w * (vol[i] - lo)));
            }
        }
        WeightedSampleSet::new(pairs).unwrap()
    }
}

fn star(n: usize, k_prime: f64) -> SectorStar {
    let grid: Vec<f64> = (1..=400).map(|i| 2.0 * i as f64 / 400.0).collect();
    let outer = vec![400, 150, 320, 90, 260, 400, 200];
    let raw = [1.0, 0.5, 2.0, 1.5, 1.0, 0.3, 0.7];
    let total: f64 = raw.iter().sum();
    SectorStar { n, k_prime, grid, weights: raw.iter().map(|w| w / total).collect(), outer }
}

#[test]
fn rearrangement_dominations_on_sector_stars() {
    for &(n, k_prime, kappa) in &[(2, -1.0, 0.0), (2, -1.0, -0.5), (3, -1.0, 0.0), (2, -0.5, -0.5)] {
        let s = star(n, k_prime);
        let t = EtaTransfer::new(n, k_prime, kappa).unwrap();
        let eta_grid: Vec<f64> = s.grid.iter().map(|&r| t.eta(r).unwrap()).collect();
        let profile = solve_profile(n, kappa, eta_grid.last().unwrap() * 1.01, 4096).unwrap();
        let g = |i: usize| profile.at(eta_grid[i]).unwrap().g;
        let h = |i: usize| profile.at(eta_grid[i]).unwrap().h;
        // Flat stretches of G or H (H = 2 for the flat disk) tie up to
        // round-off, hence the 1e-12 relative allowance on the gaps.
        // Step versions of G and H, jumping at eta(r_i); the relative nudge
        // keeps a shell endpoint that reproduces eta(r_i) in its own step.
        let step = |f: &dyn Fn(usize) -> f64, r: f64| {
            let r = r * (1.0 - 1e-10);
            let i = eta_grid.partition_point(|&e| e < r).min(eta_grid.len() - 1);
            f(i)
        };

        let up = rearrange_increasing(&s.samples(g), n, kappa).unwrap();
        let gap = increasing_dominance_gap(&up, |r| step(&g, r));
        assert!(gap <= 1e-12 * g(399), "G: n={n} K'={k_prime} kappa={kappa} gap={gap}");

        let down = rearrange_decreasing(&s.samples(h), n, kappa).unwrap();
        let gap = decreasing_dominance_gap(&down, |r| step(&h, r));
        assert!(gap <= 1e-12 * h(0), "H: n={n} K'={k_prime} kappa={kappa} gap={gap}");

        let g_star = profile.at(up.outer_radius()).unwrap().g;
        assert!(up.values().last().unwrap() >= &(g_star * (1.0 - 1e-9)));
    }
}

#[test]
fn rearrangement_domination_is_sharp_for_balls() {
    // A single full sector: the domain is the ball B_p(2) and both sides agree.
    let mut s = star(2, -1.0);
    s.weights = vec![1.0];
    s.outer = vec![400];
    let t = EtaTransfer::new(2, -1.0, 0.0).unwrap();
    let profile = solve_profile(2, 0.0, 3.0, 4096).unwrap();
    let up = rearrange_increasing(&s.samples(|i| profile.at(t.eta(s.grid[i]).unwrap()).unwrap().g), 2, 0.0)
        .unwrap();
    for (&r, &v) in up.radii().iter().zip(up.values()) {
        assert!((v - profile.at(r).unwrap().g).abs() <= 1e-9 * v);
    }
}

fn sample_set(max_len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((-5.0f64..5.0, 1e-4f64..1e-2), 1..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ls_norms_are_invariant(
        pairs in sample_set(1000),
        n in 2usize..=3,
        kappa in prop_oneof![Just(0.0), Just(-1.0)],
    ) {
        let s = WeightedSampleSet::new(pairs).unwrap();
        let down = rearrange_decreasing(&s, n, kappa).unwrap();
        let up = rearrange_increasing(&s, n, kappa).unwrap();
        for exponent in [1.0, 2.0, 3.0] {
            let direct = s.ls_norm(exponent).unwrap();
            for f in [&down, &up] {
                let rearranged = f.ls_norm(exponent).unwrap();
                prop_assert!((rearranged - direct).abs() <= 1e-10 * direct, "s={} {} vs {}", exponent, rearranged, direct);
            }
        }
        prop_assert!((ball_volume(n, kappa, down.outer_radius()).unwrap() - s.total_measure()).abs() <= 1e-10 * s.total_measure());
    }

    #[test]
    fn rearrangements_are_monotone(pairs in sample_set(300)) {
        let s = WeightedSampleSet::new(pairs).unwrap();
        let down = rearrange_decreasing(&s, 2, -1.0).unwrap();
        let up = rearrange_increasing(&s, 2, -1.0).unwrap();
        prop_assert_eq!(down.monotonicity(), Monotonicity::NonIncreasing);
        prop_assert!(down.values().windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(up.values().windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(down.radii().windows(2).all(|w| w[1] >= w[0]));
        let max = s.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(down.values()[0], max);
        prop_assert_eq!(*up.values().last().unwrap(), max);
    }

    #[test]
    fn superlevel_measure_is_non_increasing(pairs in sample_set(200), a in -6.0f64..6.0, b in -6.0f64..6.0) {
        let s = WeightedSampleSet::new(pairs).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(s.superlevel_measure(hi) <= s.superlevel_measure(lo));
    }

    #[test]
    fn eta_derivative_at_least_one(r in 1e-3f64..5.0) {
        let t = EtaTransfer::new(2, -1.0, 0.0).unwrap();
        prop_assert!(t.eta_derivative(r).unwrap() >= 1.0);
        prop_assert!(t.eta(r).unwrap() >= r);
    }
}
