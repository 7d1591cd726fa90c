//! Distributional checks of the samplers against the deterministic numerics.

use heatlab::mc::collect_paths;
use heatlab::quad::{integrate, Tolerance};
use heatlab::subordinator::{density, levy_tail, sample};
use heatlab::supremum::{sample_stable_sup, skbm_sup_tail};
use heatlab::{DensityEvalConfig, StableIndex, SupSampleConfig};

fn idx(a: f64) -> StableIndex<f64> {
    StableIndex::new(a).unwrap()
}

#[test]
fn sampler_histogram_matches_density() {
    const N: usize = 1_000_000;
    const BINS: usize = 50;
    for (k, a) in [1.0, 1.5].into_iter().enumerate() {
        let i = idx(a);
        let cfg = DensityEvalConfig::for_index(&i);
        let mut xs = collect_paths(N as u64, 100 + k as u64, |_, rng| sample(&i, 1.0, rng));
        xs.sort_by(|x, y| x.total_cmp(y));
        let (lo, hi) = (xs[N / 100], xs[N - N / 100]);
        // log-spaced bins: the upper tail is heavy
        let edges: Vec<f64> = (0..=BINS).map(|j| lo * (hi / lo).powf(j as f64 / BINS as f64)).collect();
        for w in edges.windows(2) {
            let count = xs.partition_point(|&x| x < w[1]) - xs.partition_point(|&x| x < w[0]);
            let p = integrate(|x| density(&i, x, &cfg).unwrap(), w[0], w[1], Tolerance::new(1e-12, 1e-10)).value;
            let expected = N as f64 * p;
            let sd = (N as f64 * p * (1.0 - p)).sqrt();
            assert!(
                (count as f64 - expected).abs() <= 4.0 * sd,
                "alpha {a}, bin [{}, {}]: {count} vs {expected:.1} +- {sd:.1}",
                w[0],
                w[1]
            );
        }
    }
}

#[test]
fn small_time_tail_matches_levy_measure() {
    let h = 1e-4;
    let n = 10_000_000u64;
    for a in [1.0, 1.5] {
        let i = idx(a);
        let hits: u64 = collect_paths(n, 7, |_, rng| (sample(&i, h, rng) > 1.0) as u64).into_iter().sum();
        let rate = hits as f64 / (n as f64 * h);
        let want = levy_tail(&i, 1.0);
        assert!((rate / want - 1.0).abs() <= 0.1, "alpha {a}: {rate} vs {want}");
    }
}

#[test]
fn subordinate_tail_dominates_stable_tail() {
    let cfg = SupSampleConfig {
        n_steps: 256,
        bridge_correction: false,
        paths: 200_000,
        seed: 5,
    };
    for a in [1.0, 1.5] {
        let i = idx(a);
        let tail = skbm_sup_tail(&i);
        let sups = sample_stable_sup(&i, &cfg).unwrap();
        let n = sups.len() as f64;
        for u in [0.5, 1.0, 2.0, 4.0] {
            let p = sups.iter().filter(|&&s| s > u).count() as f64 / n;
            let se = (p * (1.0 - p) / n).sqrt();
            assert!(tail.survival(u) + 1e-9 >= p - 3.0 * se, "alpha {a}, u {u}: {} < {p}", tail.survival(u));
        }
    }
}
