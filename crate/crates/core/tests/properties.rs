use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use qwalk::analysis::{peak_gap, symmetry_deviation};
use qwalk::evolution::{compare_engines, evolve_dense};
use qwalk::{evolve, initial_state, make_coin, run_walk, CoinParams, Complex64, LatticeSpec};

fn coin_state() -> impl Strategy<Value = (Complex64, Complex64)> {
    (0.0f64..=1.0, 0.0..TAU, 0.0..TAU).prop_map(|(w, a, b)| {
        (Complex64::from_polar(w.sqrt(), a), Complex64::from_polar((1.0 - w).sqrt(), b))
    })
}

fn params() -> impl Strategy<Value = CoinParams> {
    (0.0..TAU, 0.0..PI, 0.0..PI).prop_map(|(t, p1, p2)| CoinParams::new(t, p1, p2).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn probability_conserved(p in params(), (a, b) in coin_state(), steps in 1usize..120) {
        let d = run_walk(&p, a, b, steps).unwrap();
        prop_assert!((d.total() - 1.0).abs() <= 1e-10);
        prop_assert!(d.probs().iter().all(|q| *q >= 0.0));
    }

    #[test]
    fn engines_agree(p in params(), (a, b) in coin_state(), n in 1usize..25) {
        let coin = make_coin(&p);
        for r in compare_engines(&coin, &coin, a, b, n).unwrap() {
            prop_assert!(r.within(1e-12), "t={} off by {}", r.t, r.max_abs);
        }
    }

    #[test]
    fn dense_distribution_matches(p in params(), (a, b) in coin_state(), n in 2usize..20, k in 0usize..20) {
        let steps = k.min(n);
        let coin = make_coin(&p);
        let dense = evolve_dense(a, b, &coin, n, steps).unwrap();
        let lattice = LatticeSpec::new(n).unwrap();
        let fast = evolve(&initial_state(a, b, lattice).unwrap(), &coin, steps).unwrap().distribution().window(n);
        prop_assert!(dense.max_abs_diff(&fast).unwrap() <= 1e-12);
    }

    #[test]
    fn phi2_never_changes_probabilities(t in 0.0..TAU, p1 in 0.0..PI, p2 in 0.0..PI, (a, b) in coin_state(), steps in 1usize..60) {
        let base = run_walk(&CoinParams::new(t, p1, 0.0).unwrap(), a, b, steps).unwrap();
        let other = run_walk(&CoinParams::new(t, p1, p2).unwrap(), a, b, steps).unwrap();
        prop_assert!(base.max_abs_diff(&other).unwrap() <= 1e-12);
    }

    #[test]
    fn theta_plus_pi_is_invisible(p in params(), (a, b) in coin_state(), steps in 1usize..60) {
        let shifted = CoinParams::raw(p.theta() + PI, p.phi1(), p.phi2()).unwrap();
        let d1 = run_walk(&p, a, b, steps).unwrap();
        let d2 = run_walk(&shifted, a, b, steps).unwrap();
        prop_assert!(d1.max_abs_diff(&d2).unwrap() <= 1e-12);
    }

    #[test]
    fn identity_coin_splits_to_corners((a, b) in coin_state(), steps in 1usize..50) {
        let s0 = initial_state(a, b, LatticeSpec::new(steps).unwrap()).unwrap();
        let s = evolve(&s0, &make_coin(&CoinParams::new(0.0, 0.0, 0.0).unwrap()), steps).unwrap();
        let t = steps as i64;
        let sign = if steps % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((s.amplitudes_at(t).unwrap().0 - a).norm() <= 1e-15);
        prop_assert!((s.amplitudes_at(-t).unwrap().1 - b * sign).norm() <= 1e-15);
    }

    #[test]
    fn measures_bounded(p in params(), steps in 1usize..60) {
        let (a, b) = (Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0), Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2));
        let d = run_walk(&p, a, b, steps).unwrap();
        let g = peak_gap(&d).unwrap();
        let s = symmetry_deviation(&d).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&g));
        prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
    }
}

#[test]
fn grover_has_period_two() {
    let s0 = initial_state(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), LatticeSpec::new(4).unwrap()).unwrap();
    let coin = make_coin(&CoinParams::from_degrees(90.0, 0.0, 0.0, true).unwrap());
    let s2 = evolve(&s0, &coin, 2).unwrap();
    for x in -5..=5 {
        let (h0, t0) = s0.amplitudes_at(x).unwrap();
        let (h2, t2) = s2.amplitudes_at(x).unwrap();
        assert!((h0 - h2).norm() < 1e-15 && (t0 - t2).norm() < 1e-15, "x={x}");
    }
}

#[test]
fn hadamard_two_step_probabilities() {
    let p = CoinParams::from_degrees(45.0, 0.0, 0.0, true).unwrap();
    let d = run_walk(&p, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 2).unwrap();
    for (x, want) in [(-2, 0.25), (-1, 0.0), (0, 0.5), (1, 0.0), (2, 0.25)] {
        assert!((d.get(x).unwrap() - want).abs() < 1e-15, "x={x}");
    }
}
