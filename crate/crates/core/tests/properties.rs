use std::f64::consts::PI;

use heatlab::asymptotics::{fit_coefficients, log_grid, BasisTerm};
use heatlab::heat::{ks_mc, sk_series, sk_series_curve};
use heatlab::specfun::{erfc_halved, gamma, ksbm_third_coeff};
use heatlab::supremum::{bm_sup_tail, cauchy_sup_tail, skbm_sup_tail};
use heatlab::{Interval, McConfig, StableIndex};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn idx(a: f64) -> StableIndex<f64> {
    StableIndex::new(a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..10.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs / rhs - 1.0).abs() <= 1e-12, "x = {x}: {lhs} vs {rhs}");
    }

    #[test]
    fn erfc_halved_decreasing(u in 0.0f64..30.0, du in 1e-6f64..5.0) {
        prop_assert!(erfc_halved(u + du) < erfc_halved(u));
    }

    #[test]
    fn ksbm_third_coeff_scales_with_length(a in 1.01f64..1.99, l in 0.01f64..100.0) {
        let i = idx(a);
        let base = ksbm_third_coeff(&i, 1.0).unwrap();
        let scaled = ksbm_third_coeff(&i, l).unwrap() * l.powf(a - 1.0);
        prop_assert!((scaled / base - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn series_scaling_identity(a in 0.3f64..1.95, c in 0.2f64..5.0, t in 1e-4f64..1.0) {
        let i = idx(a);
        let n = 2000;
        let d1 = Interval::new(0.0, 1.0).unwrap();
        let dc = Interval::new(0.0, c).unwrap();
        let (q1, _) = sk_series(&i, &d1, t, n).unwrap();
        let (qc, _) = sk_series(&i, &dc, c.powf(a) * t, n).unwrap();
        prop_assert!((qc / (c * q1) - 1.0).abs() <= 1e-12, "{qc} vs {}", c * q1);
    }
}

#[test]
fn legendre_duplication() {
    for n in 1..=10 {
        let n = n as f64;
        let lhs = gamma(n).unwrap() * gamma(n + 0.5).unwrap();
        let rhs = 2f64.powf(1.0 - 2.0 * n) * PI.sqrt() * gamma(2.0 * n).unwrap();
        assert!((lhs / rhs - 1.0).abs() <= 1e-10, "n = {n}");
    }
}

#[test]
fn erfc_halved_at_zero() {
    assert_eq!(erfc_halved(0.0), 1.0);
}

#[test]
fn tail_functions_monotone_in_unit_interval() {
    let tails = [bm_sup_tail(), cauchy_sup_tail(), skbm_sup_tail(&idx(1.0)), skbm_sup_tail(&idx(1.5))];
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let pair = (0.0f64..50.0, 0.0f64..50.0);
    for f in &tails {
        for _ in 0..1000 {
            let (x, y) = pair.new_tree(&mut runner).unwrap().current();
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            let (a, b) = (f.survival(lo), f.survival(hi));
            assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b), "{}: {a}, {b}", f.label());
            assert!(b <= a + 1e-12, "{} increases between {lo} and {hi}", f.label());
        }
    }
}

#[test]
fn series_curve_invariants() {
    let d = Interval::new(0.0, 1.0).unwrap();
    for a in [0.5, 1.0, 1.5, 1.9] {
        let c = sk_series_curve(&idx(a), &d, &log_grid(1e-8, 10.0, 40)).unwrap();
        c.check_invariants(0.0).unwrap();
    }
}

#[test]
fn ks_mc_scaling() {
    // X_{2^a t} =d 2 X_t, so Q on (0,2) at 2^a t is twice Q on (0,1) at t
    let a = 1.5;
    let i = idx(a);
    let cfg = |seed| McConfig {
        paths: 40_000,
        n_steps: 64,
        x_strata: 1,
        seed,
    };
    let t = 0.01;
    let one = ks_mc(&i, &Interval::new(0.0, 1.0).unwrap(), t, &cfg(3)).unwrap();
    let two = ks_mc(&i, &Interval::new(0.0, 2.0).unwrap(), 2f64.powf(a) * t, &cfg(4)).unwrap();
    let se = (4.0 * one.stderr.powi(2) + two.stderr.powi(2)).sqrt();
    assert!((two.estimate - 2.0 * one.estimate).abs() <= 3.0 * se, "{} vs {}", two.estimate, 2.0 * one.estimate);
    // with a shared seed the scaled paths coincide
    let same = ks_mc(&i, &Interval::new(0.0, 2.0).unwrap(), 2f64.powf(a) * t, &cfg(3)).unwrap();
    assert!((same.estimate / (2.0 * one.estimate) - 1.0).abs() < 1e-12);
}

#[test]
fn fit_translation_invariance() {
    let i = idx(1.5);
    let ts = log_grid(1e-6, 1e-3, 25);
    let fit = |a: f64| {
        let d = Interval::new(a, a + 1.0).unwrap();
        let c = sk_series_curve(&i, &d, &ts).unwrap();
        fit_coefficients(&c, &[BasisTerm::Power, BasisTerm::Linear], (1e-6, 1e-3)).unwrap()
    };
    let (f0, f7) = (fit(0.0), fit(7.0));
    for (x, y) in f0.coefficients.iter().zip(&f7.coefficients) {
        assert!((x.estimate - y.estimate).abs() <= 1e-12 * x.estimate.abs().max(1.0));
    }
}
