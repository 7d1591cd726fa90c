//! Spectral heat content of an interval for the two orderings of killing and
//! subordination.
//!
//! Monte Carlo estimators integrate over the starting point exactly: for a
//! path with running maximum `M+` and minimum `M-` relative to its start, the
//! set of starting points in `(a, b)` that survive has length
//! `(|D| - (M+ - M-))^+`. Scaling puts every path on `[0, 1]` and the interval
//! length becomes `L' = |D| t^{-1/alpha}`.

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Open01, StandardNormal};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::mc::{self, Moments};
use crate::num::Real;
use crate::quad::{integrate_points, integrate_to_infinity, Tolerance};
use crate::specfun::{Regime, StableIndex};
use crate::subordinator::Kanter;
use crate::supremum::{bridge_max, bridge_min, skeleton_step, TailFunction};

/// Open interval `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval<T = f64> {
    a: T,
    b: T,
}

impl<T: Real> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidConfig(format!("interval needs a < b, got ({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn length(&self) -> T {
        self.b - self.a
    }

    /// Number of boundary points, `|∂D| = 2`.
    pub fn boundary_count(&self) -> usize {
        2
    }
}

/// Order of killing and subordination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ProcessKind {
    /// Subordinate first, then kill on leaving `D` (heat content `Q`).
    KilledSubordinate,
    /// Kill Brownian motion first, then subordinate (heat content `Q~`).
    SubordinateKilled,
}

impl ProcessKind {
    pub fn short_name(&self) -> &'static str {
        match self {
            Self::KilledSubordinate => "ksbm",
            Self::SubordinateKilled => "skbm",
        }
    }
}

/// Where the values of a curve come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Series,
    Quadrature,
    MonteCarlo,
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Series => "series",
            Self::Quadrature => "quadrature",
            Self::MonteCarlo => "mc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatPoint {
    pub t: f64,
    pub value: f64,
    pub stderr: f64,
    /// `Q(n) - Q(2n)` for skeleton estimators.
    pub bias_diag: Option<f64>,
}

/// Sampled heat content curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatCurve {
    pub process_kind: ProcessKind,
    pub alpha: f64,
    pub interval: Interval<f64>,
    pub points: Vec<HeatPoint>,
    pub provenance: Provenance,
}

impl HeatCurve {
    /// Checks `0 <= Q <= |D|` and monotonicity, with `k` standard errors of slack.
    pub fn check_invariants(&self, k: f64) -> Result<()> {
        let len = self.interval.length();
        for p in &self.points {
            let slack = k * p.stderr + 1e-12 * len;
            if p.value < -slack || p.value > len + slack {
                return Err(Error::Mismatch(format!("value {} at t = {} outside [0, {len}]", p.value, p.t)));
            }
        }
        let mut pts = self.points.clone();
        pts.sort_by(|x, y| x.t.total_cmp(&y.t));
        for w in pts.windows(2) {
            let slack = k * (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt() + 1e-12 * len;
            if w[1].value > w[0].value + slack {
                return Err(Error::Mismatch(format!("curve increases between t = {} and {}", w[0].t, w[1].t)));
            }
        }
        Ok(())
    }
}

/// Monte Carlo budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub paths: u64,
    pub n_steps: usize,
    /// Starting points used for per-path indicator diagnostics.
    pub x_strata: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 || self.n_steps == 0 || self.x_strata == 0 {
            return Err(Error::InvalidConfig("paths, n_steps and x_strata must be >= 1".into()));
        }
        Ok(())
    }
}

/// Monte Carlo estimate with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// `Q(n) - Q(2n)` on the same paths (skeleton estimators only).
    pub bias_diag: Option<f64>,
    pub bias_stderr: Option<f64>,
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain("t", t, "(0, inf)"));
    }
    Ok(())
}

/// Exponent `t (n pi / |D|)^alpha` of the `n`-th mode.
fn mode_rate<T: Real>(alpha: T, len: T, t: T, n: T) -> T {
    t * (n * T::PI() / len).powf(alpha)
}

/// Truncated eigenfunction series
/// `Q~(t) = Σ_{odd n <= n_terms} 8|D| / (n π)^2 exp(-t (n π / |D|)^alpha)`,
/// with the bound `8|D| / (π^2 n_terms)` on the omitted terms.
pub fn sk_series<T: Real>(index: &StableIndex<T>, d: &Interval<T>, t: T, n_terms: usize) -> Result<(T, T)> {
    if !(t > T::zero()) {
        return Err(domain("t", t.as_f64(), "(0, inf)"));
    }
    sk_series_alpha(index.alpha(), d, t, n_terms)
}

/// Same series for any exponent in `(0, 2]`; `alpha = 2` is Brownian motion.
pub fn sk_series_alpha<T: Real>(alpha: T, d: &Interval<T>, t: T, n_terms: usize) -> Result<(T, T)> {
    if n_terms == 0 {
        return Err(Error::InvalidConfig("n_terms must be >= 1".into()));
    }
    let len = d.length();
    let c = T::lit(8.0) * len / (T::PI() * T::PI());
    // smallest terms first
    let mut sum = T::zero();
    let mut n = if n_terms % 2 == 1 { n_terms } else { n_terms - 1 };
    loop {
        let nf = T::from_usize_lossy(n);
        sum = sum + c / (nf * nf) * (-mode_rate(alpha, len, t, nf)).exp();
        if n == 1 {
            break;
        }
        n -= 2;
    }
    Ok((sum, c / T::from_usize_lossy(n_terms)))
}

/// `|D| - Q~(t)` to full working precision: explicit modes up to a cutoff and
/// an Euler–Maclaurin tail beyond it.
pub fn sk_defect<T: Real>(index: &StableIndex<T>, d: &Interval<T>, t: T) -> Result<T> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(domain("t", t.as_f64(), "(0, inf)"));
    }
    let alpha = index.alpha();
    let len = d.length();
    let one = T::one();
    let two = T::lit(2.0);
    let pi = T::PI();
    let c8 = T::lit(8.0) * len / (pi * pi);
    let k = t * (pi / len).powf(alpha);
    // phi(m) = c8 (1 - exp(-k (2m+1)^alpha)) / (2m+1)^2
    let phi = |m: T| {
        let n = two * m + one;
        c8 * (-(-k * n.powf(alpha)).exp_m1()) / (n * n)
    };
    let dphi = |m: T| {
        let n = two * m + one;
        let e = (-k * n.powf(alpha)).exp();
        let g = -(-k * n.powf(alpha)).exp_m1();
        // d/dm = 2 d/dn
        two * c8 * (alpha * k * n.powf(alpha - one) * e / (n * n) - two * g / (n * n * n))
    };
    // modes with k n^alpha up to ~ a few hundred carry the curvature
    let knee = (one / k).powf(one / alpha).as_f64();
    let cutoff = (4.0 * knee).clamp(2000.0, 4.0e6) as usize;
    let mut sum = T::zero();
    for m in (0..cutoff).rev() {
        sum = sum + phi(T::from_usize_lossy(m));
    }
    let mf = T::from_usize_lossy(cutoff);
    let tol = Tolerance::new(1e-300, (1e-14f64).max(50.0 * T::epsilon().as_f64()));
    let integral = integrate_to_infinity(phi, mf, mf, tol).value;
    Ok(sum + integral + phi(mf) / two - dphi(mf) / T::lit(12.0))
}

/// `Q~(t)` to full precision, `|D| - sk_defect`.
pub fn sk_series_full<T: Real>(index: &StableIndex<T>, d: &Interval<T>, t: T) -> Result<T> {
    Ok(d.length() - sk_defect(index, d, t)?)
}

/// Series curve on the given times.
pub fn sk_series_curve(index: &StableIndex<f64>, d: &Interval<f64>, ts: &[f64]) -> Result<HeatCurve> {
    let points = ts
        .iter()
        .map(|&t| {
            Ok(HeatPoint {
                t,
                value: sk_series_full(index, d, t)?,
                stderr: 0.0,
                bias_diag: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HeatCurve {
        process_kind: ProcessKind::SubordinateKilled,
        alpha: index.alpha(),
        interval: *d,
        points,
        provenance: Provenance::Series,
    })
}

/// When to stop refining the Brownian path inside subordinator jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Stop {
    /// Range reached `L'`: no starting point survives.
    Range,
    /// Both one-sided excursions reached `L'`: crossing measure saturated.
    BothSides,
}

#[derive(Debug, Clone, Copy, Default)]
struct Extremes {
    max: f64,
    min: f64,
}

impl Extremes {
    #[inline]
    fn push(&mut self, x: f64) {
        self.max = self.max.max(x);
        self.min = self.min.min(x);
    }

    fn range(&self) -> f64 {
        self.max - self.min
    }

    fn done(&self, lp: f64, stop: Stop) -> bool {
        match stop {
            Stop::Range => self.range() >= lp,
            Stop::BothSides => self.max >= lp && -self.min >= lp,
        }
    }
}

/// How Brownian motion is followed inside subordinator jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Bridging {
    /// Largest variance of one bridge piece.
    cap: f64,
    stop_at: f64,
    stop: Stop,
}

impl Bridging {
    /// Pieces of variance at most `(L'/8)^2`.
    fn for_length(lp: f64, stop: Stop) -> Self {
        Self {
            cap: (lp / 8.0).powi(2),
            stop_at: lp,
            stop,
        }
    }
}

/// Brownian extremes along one skeleton segment. The segment is cut into
/// pieces of variance at most `b.cap`; max and min of each piece are drawn
/// from their exact bridge marginals.
fn bridge_segment(w0: f64, w1: f64, var: f64, b: &Bridging, aux: &mut ChaCha8Rng, ext: &mut Extremes) {
    let pieces = if var <= b.cap { 1 } else { (var / b.cap).ceil().min(1e9) as u64 };
    let h = var / pieces as f64;
    let mut y = w0;
    for k in 0..pieces {
        let next = if k + 1 == pieces {
            w1
        } else {
            let rem = var * (pieces - k) as f64 / pieces as f64;
            let z: f64 = StandardNormal.sample(aux);
            y + (w1 - y) * h / rem + (h * (rem - h) / rem).sqrt() * z
        };
        let u1: f64 = Open01.sample(aux);
        let u2: f64 = Open01.sample(aux);
        ext.max = ext.max.max(bridge_max(y, next, h, u1));
        ext.min = ext.min.min(bridge_min(y, next, h, u2));
        if ext.done(b.stop_at, b.stop) {
            return;
        }
        y = next;
    }
}

/// Extremes of one coupled path on the unit time interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathExtremes {
    /// Skeleton extremes on the `n`-point grid.
    pub ks_max: f64,
    pub ks_min: f64,
    /// Skeleton extremes on the refined `2n`-point grid.
    pub ks_fine_max: f64,
    pub ks_fine_min: f64,
    /// Brownian extremes up to `S_1` (possibly stopped early, see `stopped`).
    pub sk_max: f64,
    pub sk_min: f64,
    pub stopped: bool,
}

fn walk(index: &StableIndex<f64>, n: usize, refine: bool, bridging: Option<Bridging>, seed: u64, path: u64) -> PathExtremes {
    // with refinement the skeleton runs on 2n steps and the coarse grid keeps every other point
    let (steps, stride) = if refine { (2 * n, 2) } else { (n, 1) };
    let kanter = Kanter::new(index, 1.0 / steps as f64);
    let mut rng = mc::path_rng(seed, path);
    let mut aux = mc::aux_rng(seed, path);
    let mut coarse = Extremes::default();
    let mut fine = Extremes::default();
    let mut sk = Extremes::default();
    let mut stopped = false;
    let mut x = 0.0;
    for i in 0..steps {
        let (ds, x1) = skeleton_step(&kanter, x, &mut rng);
        fine.push(x1);
        if i % stride == stride - 1 {
            coarse.push(x1);
        }
        if let Some(b) = &bridging {
            if !stopped {
                bridge_segment(x, x1, 2.0 * ds, b, &mut aux, &mut sk);
                stopped = sk.done(b.stop_at, b.stop);
            }
        }
        x = x1;
    }
    PathExtremes {
        ks_max: coarse.max,
        ks_min: coarse.min,
        ks_fine_max: fine.max,
        ks_fine_min: fine.min,
        sk_max: sk.max,
        sk_min: sk.min,
        stopped,
    }
}

/// Extremes of path `path` under `cfg`, with bridges sized for `t` on `d`.
pub fn path_extremes(index: &StableIndex<f64>, d: &Interval<f64>, t: f64, cfg: &McConfig, path: u64) -> PathExtremes {
    let lp = d.length() * t.powf(-1.0 / index.alpha());
    walk(index, cfg.n_steps, true, Some(Bridging::for_length(lp, Stop::Range)), cfg.seed, path)
}

#[inline]
fn survival_measure(lp: f64, range: f64) -> f64 {
    (lp - range).max(0.0)
}

#[inline]
fn crossing_measure(lp: f64, max: f64, min: f64) -> f64 {
    (lp.min(-min) - (lp - max).max(0.0)).max(0.0)
}

/// `Q(t)` for the killed subordinate process from skeleton paths.
///
/// Biased upward (the skeleton misses excursions between grid points); the
/// diagnostic is `Q(n) - Q(2n)` on the same paths.
pub fn ks_mc(index: &StableIndex<f64>, d: &Interval<f64>, t: f64, cfg: &McConfig) -> Result<McEstimate> {
    Ok(ks_mc_curve(index, d, &[t], cfg)?.remove(0))
}

/// [`ks_mc`] at several times from one set of paths (estimates are correlated across `t`).
pub fn ks_mc_curve(index: &StableIndex<f64>, d: &Interval<f64>, ts: &[f64], cfg: &McConfig) -> Result<Vec<McEstimate>> {
    cfg.validate()?;
    for &t in ts {
        check_t(t)?;
    }
    let alpha = index.alpha();
    let len = d.length();
    let lps: Vec<f64> = ts.iter().map(|&t| len * t.powf(-1.0 / alpha)).collect();
    let k = ts.len();
    let (est, gap) = mc::run_paths(
        cfg.paths,
        cfg.seed,
        || (vec![Moments::default(); k], vec![Moments::default(); k]),
        |acc, p, _| {
            let e = walk(index, cfg.n_steps, true, None, cfg.seed, p);
            for (i, &lp) in lps.iter().enumerate() {
                let coarse = survival_measure(lp, e.ks_max - e.ks_min);
                let fine = survival_measure(lp, e.ks_fine_max - e.ks_fine_min);
                acc.0[i].push(coarse);
                acc.1[i].push(coarse - fine);
            }
        },
    );
    Ok(ts
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let s = t.powf(1.0 / alpha);
            McEstimate {
                estimate: s * est[i].mean,
                stderr: s * est[i].stderr(),
                bias_diag: Some(s * gap[i].mean),
                bias_stderr: Some(s * gap[i].stderr()),
            }
        })
        .collect())
}

/// `Q~(t)` for the subordinate killed process. Brownian motion is followed
/// through every subordinator jump by bridge refinement, so the estimate does
/// not depend on `n_steps`.
pub fn sk_mc(index: &StableIndex<f64>, d: &Interval<f64>, t: f64, cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    check_t(t)?;
    let alpha = index.alpha();
    let lp = d.length() * t.powf(-1.0 / alpha);
    let m = mc::run_paths(cfg.paths, cfg.seed, Moments::default, |acc, p, _| {
        let e = walk(index, cfg.n_steps, true, Some(Bridging::for_length(lp, Stop::Range)), cfg.seed, p);
        let r = if e.stopped { lp } else { e.sk_max - e.sk_min };
        acc.push(survival_measure(lp, r));
    });
    let s = t.powf(1.0 / alpha);
    Ok(McEstimate {
        estimate: s * m.mean,
        stderr: s * m.stderr(),
        bias_diag: None,
        bias_stderr: None,
    })
}

/// Per-path comparison of the two survival indicators on a grid of starting points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingReport {
    pub paths: u64,
    pub checks: u64,
    /// Starting points where the subordinate killed path survives but the killed subordinate one does not.
    pub violations: u64,
    /// Fraction of starting points where only the killed subordinate path survives.
    pub strict_fraction: f64,
    pub ks: McEstimate,
    pub sk: McEstimate,
}

/// Runs both estimators on shared paths and checks `1{sk survives} <= 1{ks survives}`
/// at the `x_strata` midpoints.
pub fn coupled_check(index: &StableIndex<f64>, d: &Interval<f64>, t: f64, cfg: &McConfig) -> Result<CouplingReport> {
    cfg.validate()?;
    check_t(t)?;
    let alpha = index.alpha();
    let len = d.length();
    let lp = len * t.powf(-1.0 / alpha);
    let strata = cfg.x_strata;
    type Acc = ((Moments, Moments), (u64, u64));
    let ((ks, sk), (violations, strict)): Acc = mc::run_paths(
        cfg.paths,
        cfg.seed,
        || ((Moments::default(), Moments::default()), (0, 0)),
        |acc, p, _| {
            let e = walk(index, cfg.n_steps, true, Some(Bridging::for_length(lp, Stop::Range)), cfg.seed, p);
            let sk_r = if e.stopped { f64::INFINITY } else { e.sk_max - e.sk_min };
            acc.0 .0.push(survival_measure(lp, e.ks_max - e.ks_min));
            acc.0 .1.push(survival_measure(lp, sk_r.min(lp)));
            for j in 0..strata {
                // starting point relative to a, in scaled units
                let y = (j as f64 + 0.5) / strata as f64 * lp;
                let ks_alive = y + e.ks_min > 0.0 && y + e.ks_max < lp;
                let sk_alive = !e.stopped && y + e.sk_min > 0.0 && y + e.sk_max < lp;
                if sk_alive && !ks_alive {
                    acc.1 .0 += 1;
                }
                if ks_alive && !sk_alive {
                    acc.1 .1 += 1;
                }
            }
        },
    );
    let s = t.powf(1.0 / alpha);
    let checks = cfg.paths * strata as u64;
    let wrap = |m: Moments| McEstimate {
        estimate: s * m.mean,
        stderr: s * m.stderr(),
        bias_diag: None,
        bias_stderr: None,
    };
    Ok(CouplingReport {
        paths: cfg.paths,
        checks,
        violations,
        strict_fraction: strict as f64 / checks as f64,
        ks: wrap(ks),
        sk: wrap(sk),
    })
}

/// `∫_a^b P_x(path exceeds b and drops below a by time t) dx`.
pub fn crossing_mc(
    kind: ProcessKind,
    index: &StableIndex<f64>,
    d: &Interval<f64>,
    t: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    Ok(crossing_mc_curve(kind, index, d, &[t], cfg)?.remove(0))
}

/// [`crossing_mc`] at several times from one set of paths.
pub fn crossing_mc_curve(
    kind: ProcessKind,
    index: &StableIndex<f64>,
    d: &Interval<f64>,
    ts: &[f64],
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    cfg.validate()?;
    if ts.is_empty() {
        return Err(Error::InvalidConfig("no times given".into()));
    }
    for &t in ts {
        check_t(t)?;
    }
    let alpha = index.alpha();
    let lps: Vec<f64> = ts.iter().map(|&t| d.length() * t.powf(-1.0 / alpha)).collect();
    let lo = lps.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = lps.iter().cloned().fold(0.0, f64::max);
    // finest pieces for the shortest scaled interval, saturation for the longest
    let bridging = Bridging {
        cap: (lo / 8.0).powi(2),
        stop_at: hi,
        stop: Stop::BothSides,
    };
    let k = ts.len();
    let m = mc::run_paths(
        cfg.paths,
        cfg.seed,
        || vec![Moments::default(); k],
        |acc, p, _| match kind {
            ProcessKind::KilledSubordinate => {
                let e = walk(index, cfg.n_steps, false, None, cfg.seed, p);
                for (a, &lp) in acc.iter_mut().zip(&lps) {
                    a.push(crossing_measure(lp, e.ks_max, e.ks_min));
                }
            }
            ProcessKind::SubordinateKilled => {
                let e = walk(index, cfg.n_steps, false, Some(bridging), cfg.seed, p);
                for (a, &lp) in acc.iter_mut().zip(&lps) {
                    a.push(if e.stopped { lp } else { crossing_measure(lp, e.sk_max, e.sk_min) });
                }
            }
        },
    );
    Ok(ts
        .iter()
        .zip(m)
        .map(|(&t, m)| {
            let s = t.powf(1.0 / alpha);
            McEstimate {
                estimate: s * m.mean,
                stderr: s * m.stderr(),
                bias_diag: None,
                bias_stderr: None,
            }
        })
        .collect())
}

/// Crossing term measured at a reference time, used to scale the bound in [`ks_reduction`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingCalibration {
    pub t_ref: f64,
    /// `C` in `C t^{1+1/alpha} / |D|^alpha`.
    pub constant: f64,
    pub stderr: f64,
}

/// Estimates the crossing constant once at `t_ref`. For `alpha = 1` the
/// reference form carries an extra `ln(1/t)`.
pub fn calibrate_crossing(
    index: &StableIndex<f64>,
    d: &Interval<f64>,
    t_ref: f64,
    cfg: &McConfig,
) -> Result<CrossingCalibration> {
    let c = crossing_mc(ProcessKind::KilledSubordinate, index, d, t_ref, cfg)?;
    let shape = crossing_shape(index, d, t_ref);
    Ok(CrossingCalibration {
        t_ref,
        constant: c.estimate / shape,
        stderr: c.stderr / shape,
    })
}

fn crossing_shape(index: &StableIndex<f64>, d: &Interval<f64>, t: f64) -> f64 {
    let a = index.alpha();
    let base = t.powf(1.0 + 1.0 / a) / d.length().powf(a);
    if index.regime() == Regime::Cauchy {
        base * (1.0 / t).ln()
    } else {
        base
    }
}

/// Main term and crossing bound of the one-dimensional reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reduction {
    /// `2 t^{1/alpha} ∫_0^{|D| t^{-1/alpha}} P(sup X > u) du`.
    pub main_term: f64,
    pub main_error: f64,
    /// Calibrated size of the crossing correction at `t`.
    pub crossing_bound: f64,
    /// Whether the integration ran past the tail's domain on its asymptote.
    pub used_asymptote: bool,
}

impl Reduction {
    /// `|D| - Q(t)` lies in `[main_term - crossing_bound, main_term]`.
    pub fn bracket(&self) -> (f64, f64) {
        (self.main_term - self.crossing_bound, self.main_term)
    }
}

/// One-dimensional reduction of `|D| - Q(t)` through the tail of the stable supremum.
pub fn ks_reduction(
    index: &StableIndex<f64>,
    d: &Interval<f64>,
    t: f64,
    tail: &TailFunction,
    crossing: Option<&CrossingCalibration>,
) -> Result<Reduction> {
    check_t(t)?;
    let alpha = index.alpha();
    let lp = d.length() * t.powf(-1.0 / alpha);
    let (_, hi) = tail.domain();
    if lp > hi && !tail.has_asymptote() {
        return Err(Error::TailDomain {
            domain_hi: hi,
            needed: lp,
        });
    }
    // breakpoints at 0, 1 and every decade up to L'
    let mut pts = vec![0.0, lp.min(1.0)];
    let mut x = 10.0;
    while x < lp {
        pts.push(x);
        x *= 10.0;
    }
    if hi < lp {
        pts.push(hi);
    }
    pts.push(lp);
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup();
    let est = integrate_points(|u| tail.survival(u), &pts, Tolerance::new(1e-13, 1e-11));
    let s = t.powf(1.0 / alpha);
    let crossing_bound = crossing.map_or(0.0, |c| c.constant * crossing_shape(index, d, t));
    Ok(Reduction {
        main_term: 2.0 * s * est.value,
        main_error: 2.0 * s * est.error,
        crossing_bound,
        used_asymptote: lp > hi,
    })
}
