//! Laws and samplers for the three suprema: `sup W` over a fixed time, the
//! stable supremum over operational time, and `sup W` up to `S_1`.

use std::fmt;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Open01, StandardNormal};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::mc::{self, Moments};
use crate::num::Real;
use crate::quad::{integrate, integrate_points, integrate_to_infinity, Tolerance};
use crate::specfun::{catalan_exponent, erfc_halved, Regime, StableIndex};
use crate::subordinator::{tail_constant, DensityEvalConfig, DensityEvaluator, Kanter};

/// How a [`TailFunction`] is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailMethod {
    ClosedForm,
    Quadrature,
    MonteCarloTable,
}

type Curve = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Survival function `u -> P(M > u)` with its domain and provenance.
#[derive(Clone)]
pub struct TailFunction {
    survival: Curve,
    stderr: Option<Curve>,
    asymptote: Option<Curve>,
    domain_lo: f64,
    domain_hi: f64,
    method: TailMethod,
    label: String,
}

impl fmt::Debug for TailFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TailFunction")
            .field("label", &self.label)
            .field("method", &self.method)
            .field("domain", &(self.domain_lo, self.domain_hi))
            .finish()
    }
}

impl TailFunction {
    pub fn new<F>(label: impl Into<String>, method: TailMethod, domain_lo: f64, domain_hi: f64, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            survival: Arc::new(f),
            stderr: None,
            asymptote: None,
            domain_lo,
            domain_hi,
            method,
            label: label.into(),
        }
    }

    /// Attaches a large-`u` asymptote used beyond `domain_hi`.
    pub fn with_asymptote<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.asymptote = Some(Arc::new(f));
        self
    }

    /// `P(M > u)`. Arguments below the domain are clamped; above it the
    /// asymptote is used when present, otherwise the boundary value.
    pub fn survival(&self, u: f64) -> f64 {
        if u > self.domain_hi {
            if let Some(a) = &self.asymptote {
                return a(u);
            }
            return (self.survival)(self.domain_hi);
        }
        (self.survival)(u.max(self.domain_lo))
    }

    /// Pointwise standard error (Monte Carlo tables only).
    pub fn stderr(&self, u: f64) -> Option<f64> {
        self.stderr.as_ref().map(|s| s(u.clamp(self.domain_lo, self.domain_hi)))
    }

    pub fn method(&self) -> TailMethod {
        self.method
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.domain_lo, self.domain_hi)
    }

    pub fn has_asymptote(&self) -> bool {
        self.asymptote.is_some()
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// `P(sup_{s<=1} W_s > u) = erfc(u/2)`.
pub fn bm_sup_tail() -> TailFunction {
    TailFunction::new("bm-sup", TailMethod::ClosedForm, 0.0, f64::INFINITY, |u| {
        if u <= 0.0 {
            1.0
        } else {
            erfc_halved(u)
        }
    })
}

/// Darling's density of the Cauchy supremum at time 1,
/// `f(x) = exp(-I(x)/π) / (π x^{1/2} (1+x^2)^{3/4})`.
pub fn cauchy_sup_density<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(domain("cauchy_sup_density", x.as_f64(), "(0, inf)"));
    }
    let pi = T::PI();
    let i = catalan_exponent(x)?;
    let den = pi * x.sqrt() * (T::one() + x * x).powf(T::lit(0.75));
    Ok((-i / pi).exp() / den)
}

// f(x) - 1/(π x^2), written to avoid cancellation for large x
pub(crate) fn cauchy_excess<T: Real>(x: T) -> T {
    let pi = T::PI();
    let inv2 = (x * x).recip();
    let i = catalan_exponent(x).expect("x > 0");
    let e = -T::lit(0.75) * inv2.ln_1p() - i / pi;
    e.exp_m1() * inv2 / pi
}

pub(crate) fn quad_tol<T: Real>(abs: f64) -> Tolerance<T> {
    let eps = T::epsilon().as_f64();
    Tolerance::new(abs.max(10.0 * eps * 1e-3), (1e-12f64).max(50.0 * eps))
}

/// `∫_u^∞ (f(x) - 1/(π x^2)) dx` for `u >= 1`.
pub fn cauchy_excess_tail<T: Real>(u: T) -> T {
    integrate_to_infinity(cauchy_excess, u, u, quad_tol::<T>(1e-17)).value
}

/// `P(sup_{s<=1} X_s > u)` for the Cauchy process, by quadrature of Darling's density.
pub fn cauchy_sup_survival<T: Real>(u: T) -> T {
    let one = T::one();
    if !(u > T::zero()) {
        return one;
    }
    let pi = T::PI();
    let tail_from = |v: T| one / (pi * v) + cauchy_excess_tail(v);
    if u >= one {
        return tail_from(u);
    }
    // x = s^2 removes the x^{-1/2} singularity
    let body = integrate(
        |s: T| T::lit(2.0) * s * cauchy_sup_density(s * s).unwrap_or(T::zero()),
        u.sqrt(),
        one,
        quad_tol::<T>(1e-15),
    )
    .value;
    tail_from(one) + body
}

/// Quadrature tail of the Cauchy supremum, valid on `[0, 1e6]` and extended by
/// `1/(π u)` beyond.
pub fn cauchy_sup_tail() -> TailFunction {
    TailFunction::new("cauchy-sup", TailMethod::Quadrature, 0.0, 1e6, cauchy_sup_survival::<f64>)
        .with_asymptote(|u| 1.0 / (std::f64::consts::PI * u))
}

/// Smallest grid point beyond which `|P(u) - 1/(π u)| <= (4/π^2) ln u / u^2`
/// holds at every point of a log grid on `[1, u_max]`.
pub fn cauchy_bound_threshold(u_max: f64, points: usize) -> f64 {
    let pi = std::f64::consts::PI;
    let grid: Vec<f64> = (0..points)
        .map(|k| u_max.powf(k as f64 / (points - 1) as f64))
        .collect();
    let mut threshold = 1.0;
    for (k, &u) in grid.iter().enumerate() {
        let gap = cauchy_excess_tail(u).abs();
        let bound = 4.0 / (pi * pi) * u.ln() / (u * u);
        if gap > bound {
            threshold = grid.get(k + 1).copied().unwrap_or(f64::INFINITY);
        }
    }
    threshold
}

/// Evaluation switches for the subordinate supremum tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SkbmTailOptions {
    /// Use `(2/π) arctan(1/u)` for `alpha = 1`, `u > 1`.
    pub fast_path: bool,
    /// Added to the fast-path value. Mutation hook for the validation suite.
    pub tamper: f64,
}

impl Default for SkbmTailOptions {
    fn default() -> Self {
        Self {
            fast_path: true,
            tamper: 0.0,
        }
    }
}

/// `P(sup_{s <= S_1} W_s > u) = ∫_0^∞ erfc(u / (2√v)) g_1(v) dv`.
pub fn skbm_sup_survival<T: Real>(
    index: &StableIndex<T>,
    u: T,
    cfg: &DensityEvalConfig,
    opts: SkbmTailOptions,
) -> Result<T> {
    if u.is_nan() {
        return Err(domain("skbm_sup_survival", f64::NAN, "[0, inf)"));
    }
    if u <= T::zero() {
        return Ok(T::one());
    }
    if opts.fast_path && index.regime() == Regime::Cauchy && u > T::one() {
        let two_over_pi = T::lit(2.0) / T::PI();
        return Ok(two_over_pi * u.recip().atan() + T::lit(opts.tamper));
    }
    let rho = index.subordinator_index();
    let a = tail_constant(index);
    // work in w = ln v; the integrand decays like exp(-rho w) for large w
    let c = T::lit(2.0) * u.ln();
    let w_lo = c - T::lit(8.0);
    let w_hi = ((T::lit(37.0) + (a / rho).ln()) / rho).max(c + T::lit(20.0));
    let mut pts: Vec<T> = [-8.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&d| c + T::lit(d))
        .chain([-6.0, -3.0, 0.0, 3.0, 6.0, 12.0, 24.0, 48.0].iter().map(|&w| T::lit(w)))
        .filter(|&w| w >= w_lo && w <= w_hi)
        .collect();
    pts.push(w_lo);
    pts.push(w_hi);
    pts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    pts.dedup();
    let dens = DensityEvaluator::new(index, cfg)?;
    let mut failure = None;
    let f = |w: T| {
        let v = w.exp();
        let z = u / (T::lit(2.0) * v.sqrt());
        let e = crate::specfun::erfc(z);
        if e == T::zero() {
            return T::zero();
        }
        match dens.eval(v) {
            Ok((g, _)) => e * g * v,
            Err(err) => {
                failure.get_or_insert(err);
                T::zero()
            }
        }
    };
    let body = integrate_points(f, &pts, quad_tol::<T>(1e-14).with_max_intervals(4000)).value;
    if let Some(err) = failure {
        return Err(err);
    }
    // mass of g beyond w_hi, where erfc(u/2√v) is 1 to within u e^{-w_hi/2}
    let rest = a / rho * (-rho * w_hi).exp();
    Ok(body + rest)
}

/// Quadrature tail of `sup_{s <= S_1} W_s`, with the exact arctan law used for
/// `alpha = 1`, `u > 1`.
pub fn skbm_sup_tail(index: &StableIndex<f64>) -> TailFunction {
    skbm_sup_tail_with(index, SkbmTailOptions::default())
}

pub fn skbm_sup_tail_with(index: &StableIndex<f64>, opts: SkbmTailOptions) -> TailFunction {
    let idx = *index;
    let cfg = DensityEvalConfig::for_index(index);
    let rho = index.subordinator_index();
    let tail = skbm_tail_asymptote_constant(index);
    TailFunction::new("skbm-sup", TailMethod::Quadrature, 0.0, 1e6, move |u| {
        skbm_sup_survival(&idx, u, &cfg, opts).unwrap_or(f64::NAN)
    })
    .with_asymptote(move |u| tail * u.powf(-2.0 * rho))
}

/// `c` in `P(sup_{s<=S_1} W_s > u) ~ c u^{-alpha}`:
/// `c = (A/rho) E[(sup_{s<=1} W_s)^{alpha}]`, `A` the density tail constant.
pub fn skbm_tail_asymptote_constant<T: Real>(index: &StableIndex<T>) -> T {
    let a = index.alpha();
    let rho = index.subordinator_index();
    let two = T::lit(2.0);
    // E|W_1|^alpha for variance-2 W
    let moment = two.powf(a) * crate::specfun::gamma((T::one() + a) / two).expect("positive") / T::PI().sqrt();
    tail_constant(index) / rho * moment
}

/// Quadrature value, arctan value and their difference at each `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArctanRow {
    pub u: f64,
    pub quadrature: f64,
    pub arctan: f64,
    pub difference: f64,
}

/// Compares the quadrature tail for `alpha = 1` with `(2/π) arctan(1/u)`.
pub fn arctan_discrepancy(us: &[f64]) -> Result<Vec<ArctanRow>> {
    let idx = StableIndex::new(1.0)?;
    let cfg = DensityEvalConfig::for_index(&idx);
    let opts = SkbmTailOptions {
        fast_path: false,
        tamper: 0.0,
    };
    us.iter()
        .map(|&u| {
            let q = skbm_sup_survival(&idx, u, &cfg, opts)?;
            let a = 2.0 / std::f64::consts::PI * (1.0 / u).atan();
            Ok(ArctanRow {
                u,
                quadrature: q,
                arctan: a,
                difference: q - a,
            })
        })
        .collect()
}

/// Maximum of a Brownian bridge from `w0` to `w1` whose unconditioned
/// increment has variance `var`, given a uniform `v` in (0, 1).
#[inline]
pub fn bridge_max(w0: f64, w1: f64, var: f64, v: f64) -> f64 {
    let d = w1 - w0;
    0.5 * (w0 + w1 + (d * d - 2.0 * var * v.ln()).sqrt())
}

/// Minimum of the same bridge.
#[inline]
pub fn bridge_min(w0: f64, w1: f64, var: f64, v: f64) -> f64 {
    let d = w1 - w0;
    0.5 * (w0 + w1 - (d * d - 2.0 * var * v.ln()).sqrt())
}

/// Sampling budget for the supremum estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SupSampleConfig {
    pub n_steps: usize,
    pub bridge_correction: bool,
    pub paths: u64,
    pub seed: u64,
}

impl SupSampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 || self.paths == 0 {
            return Err(Error::InvalidConfig("n_steps and paths must be >= 1".into()));
        }
        Ok(())
    }
}

/// One step of the subordinated skeleton: `S` increment and the new value of `W_S`.
#[inline]
pub(crate) fn skeleton_step(kanter: &Kanter, x: f64, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let ds = kanter.draw(rng);
    let z: f64 = StandardNormal.sample(rng);
    (ds, x + (2.0 * ds).sqrt() * z)
}

/// Suprema of one path on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupPath {
    /// `X_1`.
    pub endpoint: f64,
    /// Max over the grid `{i/n}` of `X`, including `X_0 = 0`.
    pub skeleton_max: f64,
    /// Max of `W` over `[0, S_1]`, bridging every skeleton segment.
    pub subordinate_max: f64,
}

/// Simulates path `path` of the coupled pair.
pub fn sup_path(index: &StableIndex<f64>, n_steps: usize, seed: u64, path: u64) -> SupPath {
    let kanter = Kanter::new(index, 1.0 / n_steps as f64);
    let mut rng = mc::path_rng(seed, path);
    let mut aux = mc::aux_rng(seed, path);
    let (mut x, mut skel, mut sub) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..n_steps {
        let (ds, x1) = skeleton_step(&kanter, x, &mut rng);
        let v: f64 = Open01.sample(&mut aux);
        skel = skel.max(x1);
        sub = sub.max(bridge_max(x, x1, 2.0 * ds, v));
        x = x1;
    }
    SupPath {
        endpoint: x,
        skeleton_max: skel,
        subordinate_max: sub,
    }
}

/// Coupled samples of both suprema, in path order.
pub fn sample_sup_pairs(index: &StableIndex<f64>, cfg: &SupSampleConfig) -> Result<Vec<SupPath>> {
    cfg.validate()?;
    let n = cfg.n_steps;
    Ok(mc::collect_paths(cfg.paths, cfg.seed, |p, _| sup_path(index, n, cfg.seed, p)))
}

/// Skeleton maxima of the stable process on `[0, 1]` (biased low, bias shrinking in `n_steps`).
pub fn sample_stable_sup(index: &StableIndex<f64>, cfg: &SupSampleConfig) -> Result<Vec<f64>> {
    Ok(sample_sup_pairs(index, cfg)?.iter().map(|p| p.skeleton_max).collect())
}

/// Samples of `sup_{s <= S_1} W_s`, exact for every `n_steps`.
pub fn sample_subordinate_sup(index: &StableIndex<f64>, cfg: &SupSampleConfig) -> Result<Vec<f64>> {
    if !cfg.bridge_correction {
        return Err(Error::InvalidConfig(
            "the subordinate supremum needs bridge_correction = true".into(),
        ));
    }
    Ok(sample_sup_pairs(index, cfg)?.iter().map(|p| p.subordinate_max).collect())
}

/// Monte Carlo mean with a discretisation diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub n_steps: usize,
    /// Mean at `2 n_steps` minus mean at `n_steps`, on the same paths.
    pub refinement_gap: f64,
    pub refinement_stderr: f64,
}

/// `E[sup_{s<=1} X_s]` from skeleton maxima; `alpha` must exceed 1.
///
/// Each path is simulated on `2 n` steps; the estimate uses the even grid
/// points, the diagnostic compares with the full grid.
pub fn mean_stable_sup(index: &StableIndex<f64>, cfg: &SupSampleConfig) -> Result<MeanEstimate> {
    if index.regime() != Regime::HighStable {
        return Err(domain("mean_stable_sup", index.alpha(), "alpha in (1, 2)"));
    }
    cfg.validate()?;
    let n = cfg.n_steps;
    let kanter = Kanter::new(index, 0.5 / n as f64);
    let (coarse, gap) = mc::run_paths(
        cfg.paths,
        cfg.seed,
        || (Moments::default(), Moments::default()),
        |acc, _, rng| {
            let (mut x, mut even, mut all) = (0.0f64, 0.0f64, 0.0f64);
            for i in 0..2 * n {
                let (_, x1) = skeleton_step(&kanter, x, rng);
                all = all.max(x1);
                if i % 2 == 1 {
                    even = even.max(x1);
                }
                x = x1;
            }
            acc.0.push(even);
            acc.1.push(all - even);
        },
    );
    Ok(MeanEstimate {
        estimate: coarse.mean,
        stderr: coarse.stderr(),
        n_steps: n,
        refinement_gap: gap.mean,
        refinement_stderr: gap.stderr(),
    })
}

/// Empirical tail on 512 log-spaced abscissae, interpolated linearly in `ln u`.
pub fn monte_carlo_tail(label: &str, samples: &[f64], u_min: f64, u_max: f64) -> Result<TailFunction> {
    const POINTS: usize = 512;
    if samples.is_empty() || !(u_min > 0.0 && u_max > u_min) {
        return Err(Error::InvalidConfig("need samples and 0 < u_min < u_max".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let above = |u: f64| (sorted.len() - sorted.partition_point(|&s| s <= u)) as f64 / n;
    let lu: Vec<f64> = (0..POINTS)
        .map(|k| u_min.ln() + (u_max / u_min).ln() * k as f64 / (POINTS - 1) as f64)
        .collect();
    let p: Vec<f64> = lu.iter().map(|&l| above(l.exp())).collect();
    let p0 = above(0.0);
    let se: Vec<f64> = p.iter().map(|&q| (q * (1.0 - q) / n).sqrt()).collect();
    let interp = Arc::new(move |vals: &[f64], at0: f64, u: f64| -> f64 {
        if u <= 0.0 {
            return at0;
        }
        if u < u_min {
            // linear in u between the origin and the first abscissa
            return at0 + (vals[0] - at0) * u / u_min;
        }
        let x = (u.ln() - lu[0]) / (lu[1] - lu[0]);
        let k = (x.floor() as usize).min(POINTS - 2);
        let w = x - k as f64;
        vals[k] * (1.0 - w) + vals[k + 1] * w
    });
    let (ip, ie) = (interp.clone(), interp);
    let se0 = (p0 * (1.0 - p0) / n).sqrt();
    let mut tail = TailFunction::new(label, TailMethod::MonteCarloTable, 0.0, u_max, move |u| ip(&p, p0, u));
    tail.stderr = Some(Arc::new(move |u| ie(&se, se0, u)));
    Ok(tail)
}
