//! Reproducible path-parallel Monte Carlo.
//!
//! Every path owns its own ChaCha8 stream keyed by `(seed, path index)`.
//! Paths are processed in fixed-size chunks, and the per-chunk results are
//! combined by a pairwise tree whose shape depends only on the path count,
//! so results do not depend on how many worker threads rayon uses.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Paths per work unit.
pub const CHUNK: u64 = 1024;

/// Random stream of path `path` under `seed`.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

/// Second stream of path `path`, reserved for draws whose number varies
/// between estimators (bridge extrema, subdivisions).
pub fn aux_rng(seed: u64, path: u64) -> ChaCha8Rng {
    path_rng(seed, path | (1 << 63))
}

/// Associative combination of partial results.
pub trait Merge: Send {
    fn merge(self, other: Self) -> Self;
}

fn tree_reduce<A: Merge>(mut parts: Vec<A>) -> Option<A> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.merge(b)),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop()
}

/// Runs `visit(acc, path, rng)` for every path and merges the accumulators.
pub fn run_paths<A, I, F>(paths: u64, seed: u64, init: I, visit: F) -> A
where
    A: Merge,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64, &mut ChaCha8Rng) + Sync,
{
    let chunks = paths.div_ceil(CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            let end = ((c + 1) * CHUNK).min(paths);
            for p in c * CHUNK..end {
                let mut rng = path_rng(seed, p);
                visit(&mut acc, p, &mut rng);
            }
            acc
        })
        .collect();
    tree_reduce(parts).unwrap_or_else(init)
}

/// Per-path values in path order.
pub fn collect_paths<T, F>(paths: u64, seed: u64, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    let chunks: Vec<Vec<T>> = (0..paths.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(paths);
            (c * CHUNK..end).map(|p| draw(p, &mut path_rng(seed, p))).collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Running mean and centred second moment (mergeable).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.n as f64).sqrt()
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        let mut m = Self::default();
        for &x in xs {
            m.push(x);
        }
        m
    }
}

impl Merge for Moments {
    fn merge(self, o: Self) -> Self {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let w = o.n as f64 / n as f64;
        Self {
            n,
            mean: self.mean + d * w,
            m2: self.m2 + o.m2 + d * d * self.n as f64 * w,
        }
    }
}

impl Merge for Vec<Moments> {
    fn merge(mut self, o: Self) -> Self {
        if self.is_empty() {
            return o;
        }
        for (a, b) in self.iter_mut().zip(o) {
            *a = a.merge(b);
        }
        self
    }
}

impl Merge for u64 {
    fn merge(self, o: Self) -> Self {
        self + o
    }
}

impl<A: Merge, B: Merge> Merge for (A, B) {
    fn merge(self, o: Self) -> Self {
        (self.0.merge(o.0), self.1.merge(o.1))
    }
}
