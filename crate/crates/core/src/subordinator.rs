//! The `alpha/2`-stable subordinator: exact sampling and the density of `S_1`.

use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::num::Real;
use crate::quad::{integrate_points, Tolerance};
use crate::specfun::{gamma, ln_gamma, sin_pi, StableIndex};

/// Precomputed crossovers (60 series terms, series/tail agreement 1e-6).
///
/// Produced by [`calibrate_crossover`]; the unit tests re-run the calibration.
pub const CROSSOVER_TABLE: [(f64, f64); 4] = [
    (1.0, 2.499_998_852_857_621e5),
    (1.25, 1.245_015_530_677_227_5e9),
    (1.5, 1.030_469_448_885_030_7e8),
    (1.75, 1.195_018_319_478_502_9e7),
];

/// Controls the density evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityEvalConfig {
    /// Truncation of the alternating series.
    pub series_terms: usize,
    /// Above this point the power-law tail is used.
    pub crossover: f64,
    /// Relative error accepted from the series.
    pub target_tol: f64,
}

impl DensityEvalConfig {
    pub const DEFAULT_TERMS: usize = 60;
    pub const DEFAULT_TOL: f64 = 1e-10;

    /// Default configuration: table lookup where available, calibration otherwise.
    pub fn for_index<T: Real>(index: &StableIndex<T>) -> Self {
        let a = index.alpha().as_f64();
        let crossover = CROSSOVER_TABLE
            .iter()
            .find(|(alpha, _)| *alpha == a)
            .map(|&(_, x)| x)
            .unwrap_or_else(|| calibrate_crossover(index, Self::DEFAULT_TERMS, 1e-6));
        Self {
            series_terms: Self::DEFAULT_TERMS,
            crossover,
            target_tol: Self::DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.series_terms == 0 {
            return Err(Error::InvalidConfig("series_terms must be >= 1".into()));
        }
        if !(self.crossover > 0.0) {
            return Err(Error::InvalidConfig("crossover must be > 0".into()));
        }
        if !(self.target_tol > 0.0 && self.target_tol <= 1e-3) {
            return Err(Error::InvalidConfig("target_tol must lie in (0, 1e-3]".into()));
        }
        Ok(())
    }
}

/// Which representation produced a density value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DensityMethod {
    Series,
    Tail,
    /// Kanter integral representation, used where the series cancels badly.
    Integral,
}

/// `A / x^{1+alpha/2}` constant of the density tail, `A = (alpha/2) / Γ(1 - alpha/2)`.
pub fn tail_constant<T: Real>(index: &StableIndex<T>) -> T {
    let rho = index.subordinator_index();
    rho / gamma(T::one() - rho).expect("1 - rho in (0, 1)")
}

/// Lévy density `(alpha/2) / Γ(1 - alpha/2) * u^{-1-alpha/2}` of the subordinator.
pub fn levy_density<T: Real>(index: &StableIndex<T>, u: T) -> T {
    let rho = index.subordinator_index();
    tail_constant(index) * u.powf(-T::one() - rho)
}

/// Lévy measure of `(u, ∞)`: `u^{-alpha/2} / Γ(1 - alpha/2)`.
pub fn levy_tail<T: Real>(index: &StableIndex<T>, u: T) -> T {
    let rho = index.subordinator_index();
    u.powf(-rho) / gamma(T::one() - rho).expect("1 - rho in (0, 1)")
}

/// `ln a(pi v)` for the Kanter function, `v in (0, 1)`.
fn ln_kanter<T: Real>(rho: T, v: T) -> T {
    let one = T::one();
    let num = rho * sin_pi(rho * v).ln() + (one - rho) * sin_pi((one - rho) * v).ln();
    (num - sin_pi(v).ln()) / (one - rho)
}

/// Exact sampler for `S_t` at a fixed `t`.
#[derive(Debug, Clone, Copy)]
pub struct Kanter {
    rho: f64,
    power: f64,
    ln_scale: f64,
}

impl Kanter {
    pub fn new(index: &StableIndex<f64>, t: f64) -> Self {
        let rho = index.subordinator_index();
        Self {
            rho,
            power: (1.0 - rho) / rho,
            ln_scale: t.ln() / rho,
        }
    }

    /// `S_t = t^{1/rho} (a(pi U) / E)^{(1-rho)/rho}`.
    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        use std::f64::consts::PI;
        let v: f64 = Open01.sample(rng);
        let e: f64 = Exp1.sample(rng);
        let rho = self.rho;
        let s1 = (PI * rho * v).sin();
        let s2 = (PI * (1.0 - rho) * v).sin();
        // reflect so sin(pi v) keeps full relative precision as v -> 1
        let s3 = if v < 0.5 { (PI * v).sin() } else { (PI * (1.0 - v)).sin() };
        // ln S = ln_scale + ln s1 - ln s3 / rho + (1-rho)/rho ln(s2 / E)
        (self.ln_scale + s1.ln() - s3.ln() / rho + self.power * (s2 / e).ln()).exp()
    }
}

/// One draw of `S_t`.
pub fn sample<R: Rng + ?Sized>(index: &StableIndex<f64>, t: f64, rng: &mut R) -> f64 {
    Kanter::new(index, t).draw(rng)
}

/// Fills `out` with independent copies of `S_{t/n}`, `n = out.len()`.
pub fn fill_increments<R: Rng + ?Sized>(index: &StableIndex<f64>, t: f64, out: &mut [f64], rng: &mut R) {
    let k = Kanter::new(index, t / out.len() as f64);
    for s in out.iter_mut() {
        *s = k.draw(rng);
    }
}

/// `n` independent increments of `S` over a uniform grid on `[0, t]`.
pub fn sample_increments<R: Rng + ?Sized>(index: &StableIndex<f64>, t: f64, n: usize, rng: &mut R) -> Vec<f64> {
    let mut out = vec![0.0; n.max(1)];
    fill_increments(index, t, &mut out, rng);
    out
}

struct SeriesEval<T> {
    value: T,
    error: T,
}

// Signed sin(pi rho n) and ln Γ(1 + rho n) - ln n! for n = 1..=terms+2.
struct SeriesCoefficients<T> {
    rho: T,
    coef: Vec<(T, T)>,
}

impl<T: Real> SeriesCoefficients<T> {
    fn new(rho: T, terms: usize) -> Self {
        let one = T::one();
        let coef = (1..=terms + 2)
            .map(|n| {
                let nf = T::from_usize_lossy(n);
                let sign = if n % 2 == 1 { one } else { -one };
                let ln_mag = ln_gamma(one + rho * nf).expect("positive") - ln_gamma(nf + one).expect("positive");
                (sign * sin_pi(rho * nf), ln_mag)
            })
            .collect();
        Self { rho, coef }
    }

    fn eval(&self, x: T) -> SeriesEval<T> {
        let ln_x = x.ln();
        let one = T::one();
        let term = |n: usize| -> T {
            let (s, ln_mag) = self.coef[n - 1];
            if s == T::zero() {
                return T::zero();
            }
            let nf = T::from_usize_lossy(n);
            s * (ln_mag - (self.rho * nf + one) * ln_x).exp()
        };
        let terms = self.coef.len() - 2;
        let mut sum = T::zero();
        let mut abs_sum = T::zero();
        for n in 1..=terms {
            let tn = term(n);
            sum = sum + tn;
            abs_sum = abs_sum + tn.abs();
        }
        let trunc = term(terms + 1).abs() + term(terms + 2).abs();
        let round = T::lit(4.0) * T::epsilon() * abs_sum;
        let pi = T::PI();
        SeriesEval {
            value: sum / pi,
            error: (trunc + round) / pi,
        }
    }

    fn usable(&self, x: T, target_tol: f64) -> Option<T> {
        let s = self.eval(x);
        let tol = T::lit(target_tol).max(T::lit(4.0) * T::epsilon());
        let ok = s.value > T::zero() && s.value.is_finite() && s.error.is_finite() && s.error <= tol * s.value;
        ok.then_some(s.value)
    }
}

fn series_eval<T: Real>(rho: T, x: T, terms: usize) -> SeriesEval<T> {
    SeriesCoefficients::new(rho, terms).eval(x)
}

fn series_usable<T: Real>(rho: T, x: T, cfg: &DensityEvalConfig) -> Option<T> {
    SeriesCoefficients::new(rho, cfg.series_terms).usable(x, cfg.target_tol)
}

/// Smallest `x` (to 0.1% in log scale) at which the truncated series meets `cfg.target_tol`.
pub fn series_threshold<T: Real>(index: &StableIndex<T>, cfg: &DensityEvalConfig) -> T {
    let rho = index.subordinator_index();
    let mut hi = T::lit(cfg.crossover).max(T::one());
    while series_usable(rho, hi, cfg).is_none() && hi < T::lit(1e30) {
        hi = hi * T::lit(10.0);
    }
    let mut lo = T::lit(1e-6);
    if series_usable(rho, lo, cfg).is_some() {
        return lo;
    }
    while (hi / lo).ln() > T::lit(1e-3) {
        let mid = (lo * hi).sqrt();
        if series_usable(rho, mid, cfg).is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Truncated alternating series for `g_1` at `x`, rejecting points where the
/// truncation or cancellation error exceeds `cfg.target_tol`.
pub fn density_series<T: Real>(index: &StableIndex<T>, x: T, cfg: &DensityEvalConfig) -> Result<T> {
    cfg.validate()?;
    if !(x > T::zero()) || !x.is_finite() {
        return Err(domain("density_series", x.as_f64(), "(0, inf)"));
    }
    let rho = index.subordinator_index();
    series_usable(rho, x, cfg).ok_or_else(|| Error::SeriesDiverged {
        x: x.as_f64(),
        smallest_usable_x: series_threshold(index, cfg).as_f64(),
    })
}

/// Density of `S_1` via the Kanter representation
/// `P(S_1 <= x) = ∫_0^1 exp(-a(pi v) x^{-k}) dv`, `k = rho / (1 - rho)`.
pub fn density_integral<T: Real>(index: &StableIndex<T>, x: T) -> T {
    let one = T::one();
    let rho = index.subordinator_index();
    let k = rho / (one - rho);
    let ln_xk = -k * x.ln();
    let f = |v: T| {
        if v <= T::zero() || v >= one {
            return T::zero();
        }
        let z = ln_kanter(rho, v) + ln_xk;
        let ez = z.exp();
        if !ez.is_finite() {
            return T::zero();
        }
        (z - ez).exp()
    };
    let eps = T::epsilon().as_f64();
    let tol = Tolerance::new(1e-300, (1e-13f64).max(50.0 * eps)).with_max_intervals(4000);
    let pts: Vec<T> = [0.0, 0.25, 0.5, 0.75, 0.9, 0.97, 0.99, 0.999, 1.0]
        .iter()
        .map(|&p| T::lit(p))
        .collect();
    let mass = integrate_points(f, &pts, tol).value;
    k * mass / x
}

/// Density evaluator with the series coefficients precomputed.
pub struct DensityEvaluator<T> {
    index: StableIndex<T>,
    cfg: DensityEvalConfig,
    series: SeriesCoefficients<T>,
}

impl<T: Real> DensityEvaluator<T> {
    pub fn new(index: &StableIndex<T>, cfg: &DensityEvalConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            index: *index,
            cfg: *cfg,
            series: SeriesCoefficients::new(index.subordinator_index(), cfg.series_terms),
        })
    }

    /// `g_1(x)` and the method used.
    pub fn eval(&self, x: T) -> Result<(T, DensityMethod)> {
        if !(x > T::zero()) || x.is_nan() {
            return Err(domain("density", x.as_f64(), "(0, inf)"));
        }
        if x >= T::lit(self.cfg.crossover) {
            let rho = self.index.subordinator_index();
            return Ok((tail_constant(&self.index) * x.powf(-T::one() - rho), DensityMethod::Tail));
        }
        if let Some(v) = self.series.usable(x, self.cfg.target_tol) {
            return Ok((v, DensityMethod::Series));
        }
        Ok((density_integral(&self.index, x), DensityMethod::Integral))
    }
}

/// Density of `S_1` with the method that produced it.
pub fn density_with_method<T: Real>(
    index: &StableIndex<T>,
    x: T,
    cfg: &DensityEvalConfig,
) -> Result<(T, DensityMethod)> {
    DensityEvaluator::new(index, cfg)?.eval(x)
}

/// Density `g_1` of `S_1` at `x > 0`.
pub fn density<T: Real>(index: &StableIndex<T>, x: T, cfg: &DensityEvalConfig) -> Result<T> {
    density_with_method(index, x, cfg).map(|(v, _)| v)
}

/// Density of `S_t`: `t^{-2/alpha} g_1(x t^{-2/alpha})`.
pub fn density_scaled<T: Real>(index: &StableIndex<T>, t: T, x: T, cfg: &DensityEvalConfig) -> Result<T> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(domain("density_scaled", t.as_f64(), "t > 0"));
    }
    let c = t.powf(-T::lit(2.0) / index.alpha());
    Ok(c * density(index, x * c, cfg)?)
}

/// Smallest `x` where the `terms`-term series and the tail asymptote agree to
/// `agreement` (relative), searched on a log grid and refined by bisection.
pub fn calibrate_crossover<T: Real>(index: &StableIndex<T>, terms: usize, agreement: f64) -> f64 {
    let rho = index.subordinator_index().as_f64();
    let a = tail_constant(index).as_f64();
    let gap = |x: f64| {
        let s = series_eval(rho, x, terms).value;
        (s - a * x.powf(-1.0 - rho)).abs() / (a * x.powf(-1.0 - rho))
    };
    // gap decays like a power of x once the series has converged
    let mut hi = 1.0f64;
    while gap(hi) > agreement && hi < 1e300 {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    while hi / lo > 1.0 + 1e-7 {
        let mid = (lo * hi).sqrt();
        if gap(mid) > agreement {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}
