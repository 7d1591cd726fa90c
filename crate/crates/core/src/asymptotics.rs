//! Small-time expansions of the heat content and coefficient extraction.
//!
//! Sign convention: `c3` is the signed coefficient of `t` in the defect,
//! `|D| - Q(t) = c2 t^{1/alpha} + c2log t ln(1/t) + c3 t + o(t)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heat::{HeatCurve, Interval, ProcessKind, Provenance};
use crate::num::Real;
use crate::quad::{integrate_points, integrate_to_infinity, Tolerance};
use crate::specfun::{erfc_halved, gamma, ksbm_third_coeff, skbm_second_coeff, zeta, Regime, StableIndex};
use crate::subordinator::DensityEvalConfig;
use crate::supremum::{
    cauchy_excess, cauchy_sup_density, cauchy_sup_survival, mean_stable_sup, skbm_sup_survival, MeanEstimate,
    SkbmTailOptions, SupSampleConfig,
};

/// How a coefficient was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    /// Structural value (`|D|`, or a term absent in this regime).
    Exact,
    ClosedForm,
    Quadrature { error: f64 },
    MonteCarlo { stderr: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientProvenance {
    pub c1: Method,
    pub c2: Method,
    pub c2log: Method,
    pub c3: Method,
}

/// Three-term small-time expansion of the heat content.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expansion<T = f64> {
    pub process_kind: ProcessKind,
    pub alpha: StableIndex<T>,
    pub interval: Interval<T>,
    /// `|D|`.
    pub c1: T,
    /// Coefficient of `t^{1/alpha}` in the defect (zero for `alpha = 1`).
    pub c2: T,
    /// Coefficient of `t ln(1/t)` in the defect (zero unless `alpha = 1`).
    pub c2log: T,
    /// Signed coefficient of `t` in the defect.
    pub c3: T,
    pub constant_provenance: CoefficientProvenance,
}

impl<T: Real> Expansion<T> {
    /// Predicted `|D| - Q(t)`.
    pub fn defect(&self, t: T) -> T {
        let a = self.alpha.alpha();
        self.c2 * t.powf(a.recip()) + self.c2log * t * (-t.ln()) + self.c3 * t
    }
}

/// Inputs for constants without a closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionResources {
    /// Precomputed `E[sup_{s<=1} X_s]`; simulated with `sup_config` when absent.
    pub stable_mean: Option<MeanEstimate>,
    pub sup_config: SupSampleConfig,
    pub tail_options: SkbmTailOptions,
}

impl Default for ExpansionResources {
    fn default() -> Self {
        Self {
            stable_mean: None,
            sup_config: SupSampleConfig {
                n_steps: 1024,
                bridge_correction: false,
                paths: 100_000,
                seed: 1,
            },
            tail_options: SkbmTailOptions::default(),
        }
    }
}

/// `∫_0^∞ erfc(u/2) u^{alpha-1} du` by quadrature.
pub fn brownian_moment_integral<T: Real>(alpha: T) -> (T, T) {
    // erfc(u/2) < 1e-300 beyond u = 52
    let pts: Vec<T> = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 52.0].iter().map(|&x| T::lit(x)).collect();
    let est = integrate_points(|u: T| erfc_halved(u) * u.powf(alpha - T::one()), &pts, tol::<T>(1e-15));
    (est.value, est.error)
}

/// Closed form `2^alpha Γ((alpha+1)/2) / (alpha √π)` of [`brownian_moment_integral`].
pub fn brownian_moment_closed<T: Real>(alpha: T) -> Result<T> {
    let two = T::lit(2.0);
    Ok(two.powf(alpha) * gamma((alpha + T::one()) / two)? / (alpha * T::PI().sqrt()))
}

fn tol<T: Real>(abs: f64) -> Tolerance<T> {
    let eps = T::epsilon().as_f64();
    Tolerance::new(abs.max(eps * 1e-3), (1e-12f64).max(50.0 * eps))
}

/// `∫_0^1 P(X_1* > u) du + ln|D|/π + ∫_1^∞ (P(X_1* > u) - 1/(π u)) du` for the
/// Cauchy supremum `X_1*`, with both integrals swapped onto Darling's density:
/// `∫_0^1 P = P(1) + ∫_0^1 x f(x) dx` and `∫_1^∞ (P - 1/(πu)) = ∫_1^∞ (x - 1)(f(x) - 1/(π x^2)) dx`.
pub fn ksbm_cauchy_constant<T: Real>(length: T) -> (T, T) {
    let one = T::one();
    let two = T::lit(2.0);
    // x = s^2 on (0, 1)
    let body = integrate_points(
        |s: T| two * s * s * s * cauchy_sup_density(s * s).unwrap_or(T::zero()),
        &[T::zero(), T::lit(0.5), one],
        tol::<T>(1e-15),
    );
    let far = integrate_to_infinity(|x: T| (x - one) * cauchy_excess(x), one, one, tol::<T>(1e-15));
    let value = cauchy_sup_survival(one) + body.value + length.ln() / T::PI() + far.value;
    (value, body.error + far.error)
}

/// `∫_0^1 P(W*_{S_1} > u) du + 2 ln|D|/π + ∫_1^∞ (P(W*_{S_1} > u) - 2/(π u)) du` for `alpha = 1`.
///
/// The first integral runs over the subordination quadrature (absolute
/// tolerance 1e-8); the second uses the arctan law unless disabled.
pub fn skbm_cauchy_constant<T: Real>(length: T, opts: SkbmTailOptions) -> Result<(T, T)> {
    let idx = StableIndex::new(T::one())?;
    let cfg = DensityEvalConfig::for_index(&idx);
    let one = T::one();
    let two_pi = T::lit(2.0) / T::PI();
    let mut failure = None;
    let mut p = |u: T| match skbm_sup_survival(&idx, u, &cfg, opts) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            T::zero()
        }
    };
    let near = integrate_points(&mut p, &[T::zero(), T::lit(0.5), one], Tolerance::new(1e-8, 1e-8));
    let far = integrate_to_infinity(|u: T| p(u) - two_pi / u, one, one, Tolerance::new(1e-10, 1e-9));
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((near.value + T::lit(2.0) * length.ln() / T::PI() + far.value, near.error + far.error))
}

/// Coefficients of the small-time expansion for `alpha in [1, 2)`.
pub fn theorem_expansion(
    kind: ProcessKind,
    index: &StableIndex<f64>,
    d: &Interval<f64>,
    resources: &ExpansionResources,
) -> Result<Expansion<f64>> {
    let len = d.length();
    let a = index.alpha();
    let pi = std::f64::consts::PI;
    let zero = 0.0;
    let (c2, c2log, c3, p2, p2log, p3) = match (kind, index.regime()) {
        (_, Regime::LowStable) => {
            return Err(Error::Unsupported(format!(
                "alpha = {a}: for alpha < 1 only the first two terms are known"
            )))
        }
        (ProcessKind::KilledSubordinate, Regime::HighStable) => {
            let mean = match resources.stable_mean {
                Some(m) => m,
                None => mean_stable_sup(index, &resources.sup_config)?,
            };
            (
                2.0 * mean.estimate,
                zero,
                -ksbm_third_coeff(index, len)?,
                Method::MonteCarlo {
                    stderr: 2.0 * mean.stderr,
                },
                Method::Exact,
                Method::ClosedForm,
            )
        }
        (ProcessKind::SubordinateKilled, Regime::HighStable) => {
            let (integral, err) = brownian_moment_integral(a);
            let scale = 2.0 * a / ((a - 1.0) * gamma(1.0 - a / 2.0)? * len.powf(a - 1.0));
            (
                2.0 * skbm_second_coeff(index)?,
                zero,
                -scale * integral,
                Method::ClosedForm,
                Method::Exact,
                Method::Quadrature { error: scale * err },
            )
        }
        (ProcessKind::KilledSubordinate, Regime::Cauchy) => {
            let (k, err) = ksbm_cauchy_constant(len);
            (
                zero,
                2.0 / pi,
                2.0 * k,
                Method::Exact,
                Method::ClosedForm,
                Method::Quadrature { error: 2.0 * err },
            )
        }
        (ProcessKind::SubordinateKilled, Regime::Cauchy) => {
            let (k, err) = skbm_cauchy_constant(len, resources.tail_options)?;
            (
                zero,
                4.0 / pi,
                2.0 * k,
                Method::Exact,
                Method::ClosedForm,
                Method::Quadrature { error: 2.0 * err },
            )
        }
    };
    Ok(Expansion {
        process_kind: kind,
        alpha: *index,
        interval: *d,
        c1: len,
        c2,
        c2log,
        c3,
        constant_provenance: CoefficientProvenance {
            c1: Method::Exact,
            c2: p2,
            c2log: p2log,
            c3: p3,
        },
    })
}

/// Predicted `Q(t) = c1 - c2 t^{1/alpha} - c2log t ln(1/t) - c3 t`.
pub fn eval_expansion<T: Real>(e: &Expansion<T>, t: T) -> T {
    e.c1 - e.defect(t)
}

fn check_meta(curve: &HeatCurve, kind: ProcessKind, alpha: f64, d: &Interval<f64>) -> Result<()> {
    if curve.process_kind != kind {
        return Err(Error::Mismatch(format!(
            "curve is {:?}, expansion is {kind:?}",
            curve.process_kind
        )));
    }
    if curve.alpha != alpha {
        return Err(Error::Mismatch(format!("curve alpha {} vs {alpha}", curve.alpha)));
    }
    if curve.interval != *d {
        return Err(Error::Mismatch("curve and expansion use different intervals".into()));
    }
    Ok(())
}

/// `(c1 - Q(t) - c2 t^{1/alpha} - c2log t ln(1/t)) / t`, which tends to `c3`.
pub fn residual_curve(curve: &HeatCurve, e: &Expansion<f64>) -> Result<Vec<(f64, f64)>> {
    check_meta(curve, e.process_kind, e.alpha.alpha(), &e.interval)?;
    let inv = 1.0 / e.alpha.alpha();
    Ok(curve
        .points
        .iter()
        .map(|p| {
            let t = p.t;
            let r = (e.c1 - p.value - e.c2 * t.powf(inv) - e.c2log * t * (-t.ln())) / t;
            (t, r)
        })
        .collect())
}

/// Signed `t` coefficient of `|D| - Q~(t)` read off the eigenvalue series:
/// `8 π^{alpha-2} (1 - 2^{alpha-2}) ζ(2 - alpha) |D|^{1-alpha}` for `alpha in (1, 2)`
/// and `(4/π)(1 + ln(2|D|/π))` for `alpha = 1`.
pub fn spectral_third_coeff<T: Real>(index: &StableIndex<T>, length: T) -> Result<T> {
    let a = index.alpha();
    let one = T::one();
    let two = T::lit(2.0);
    let pi = T::PI();
    match index.regime() {
        Regime::HighStable => Ok(T::lit(8.0)
            * pi.powf(a - two)
            * (one - two.powf(a - two))
            * zeta(two - a)?
            * length.powf(one - a)),
        Regime::Cauchy => Ok(T::lit(4.0) / pi * (one + (two * length / pi).ln())),
        Regime::LowStable => Err(Error::Unsupported(format!("alpha = {a} below 1"))),
    }
}

/// Terms available to [`fit_coefficients`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisTerm {
    /// `t^{1/alpha}`
    Power,
    /// `t ln(1/t)`
    TLog,
    /// `t`
    Linear,
}

impl BasisTerm {
    fn eval(self, alpha: f64, t: f64) -> f64 {
        match self {
            Self::Power => t.powf(1.0 / alpha),
            Self::TLog => -t * t.ln(),
            Self::Linear => t,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Power => "t^(1/alpha)",
            Self::TLog => "t*ln(1/t)",
            Self::Linear => "t",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitCoefficient {
    pub term: BasisTerm,
    pub estimate: f64,
    pub stderr: f64,
}

/// Weighted least-squares fit of the defect on a set of basis terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub coefficients: Vec<FitCoefficient>,
    /// Weighted residual norm.
    pub residual_norm: f64,
    pub t_window: (f64, f64),
    pub points: usize,
    /// Condition number of the column-equilibrated normal matrix.
    pub condition: f64,
}

impl FitResult {
    pub fn get(&self, term: BasisTerm) -> Option<&FitCoefficient> {
        self.coefficients.iter().find(|c| c.term == term)
    }
}

/// Default fitting window.
pub const DEFAULT_WINDOW: (f64, f64) = (1e-6, 1e-3);

/// Fits `c1 - Q(t)` on `basis` over the points of `curve` inside `window`.
///
/// Monte Carlo curves are weighted by `1/stderr^2`; other curves get unit
/// weights and a residual-variance scale.
pub fn fit_coefficients(curve: &HeatCurve, basis: &[BasisTerm], window: (f64, f64)) -> Result<FitResult> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::InvalidConfig(format!("fit window needs t_min < t_max, got {window:?}")));
    }
    if basis.is_empty() {
        return Err(Error::InvalidConfig("empty basis".into()));
    }
    let k = basis.len();
    let weighted = curve.provenance == Provenance::MonteCarlo;
    let c1 = curve.interval.length();
    let mut rows = Vec::new();
    // endpoints of a log grid may be off by an ulp
    let (lo_in, hi_in) = (lo * (1.0 - 1e-12), hi * (1.0 + 1e-12));
    for p in curve.points.iter().filter(|p| p.t >= lo_in && p.t <= hi_in) {
        let w = if weighted {
            if !(p.stderr > 0.0) {
                return Err(Error::InvalidConfig(format!("zero stderr at t = {}", p.t)));
            }
            p.stderr.powi(-2)
        } else {
            1.0
        };
        let x: Vec<f64> = basis.iter().map(|b| b.eval(curve.alpha, p.t)).collect();
        rows.push((x, c1 - p.value, w));
    }
    if rows.len() < 2 * k {
        return Err(Error::InvalidConfig(format!(
            "{} points in window, need at least {}",
            rows.len(),
            2 * k
        )));
    }
    // equilibrate columns so the condition number reflects collinearity, not units
    let mut scale = vec![0.0; k];
    for (x, _, w) in &rows {
        for j in 0..k {
            scale[j] += w * x[j] * x[j];
        }
    }
    for s in scale.iter_mut() {
        *s = s.sqrt();
        if !(*s > 0.0) {
            return Err(Error::IllConditioned { condition: f64::INFINITY });
        }
    }
    let mut a = vec![vec![0.0; k]; k];
    let mut rhs = vec![0.0; k];
    for (x, y, w) in &rows {
        for i in 0..k {
            rhs[i] += w * x[i] / scale[i] * y;
            for j in 0..k {
                a[i][j] += w * x[i] / scale[i] * x[j] / scale[j];
            }
        }
    }
    let (vals, vecs) = jacobi_eigen(a);
    let max = vals.iter().cloned().fold(f64::MIN, f64::max);
    let min = vals.iter().cloned().fold(f64::MAX, f64::min);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if condition > 1e12 {
        return Err(Error::IllConditioned { condition });
    }
    // inverse = V diag(1/lambda) V^T
    let inv: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).map(|m| vecs[i][m] * vecs[j][m] / vals[m]).sum())
                .collect()
        })
        .collect();
    let beta: Vec<f64> = (0..k)
        .map(|i| (0..k).map(|j| inv[i][j] * rhs[j]).sum::<f64>() / scale[i])
        .collect();
    let rss: f64 = rows
        .iter()
        .map(|(x, y, w)| {
            let fit: f64 = x.iter().zip(&beta).map(|(a, b)| a * b).sum();
            w * (y - fit).powi(2)
        })
        .sum();
    let sigma2 = if weighted {
        1.0
    } else {
        rss / (rows.len() - k) as f64
    };
    let coefficients = basis
        .iter()
        .enumerate()
        .map(|(i, &term)| FitCoefficient {
            term,
            estimate: beta[i],
            stderr: (sigma2 * inv[i][i]).sqrt() / scale[i],
        })
        .collect();
    Ok(FitResult {
        coefficients,
        residual_norm: rss.sqrt(),
        t_window: window,
        points: rows.len(),
        condition,
    })
}

/// Eigenvalues and eigenvectors (as columns) of a small symmetric matrix.
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let diag: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-32 * diag {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    let (arp, arq) = (a[r][p], a[r][q]);
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let (apr, aqr) = (a[p][r], a[q][r]);
                    a[p][r] = c * apr - s * aqr;
                    a[q][r] = s * apr + c * aqr;
                }
                for r in 0..n {
                    let (vrp, vrq) = (v[r][p], v[r][q]);
                    v[r][p] = c * vrp - s * vrq;
                    v[r][q] = s * vrp + c * vrq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Curve generated by an expansion, for checking the fitting machinery.
pub fn expansion_curve(e: &Expansion<f64>, ts: &[f64]) -> HeatCurve {
    HeatCurve {
        process_kind: e.process_kind,
        alpha: e.alpha.alpha(),
        interval: e.interval,
        points: ts
            .iter()
            .map(|&t| crate::heat::HeatPoint {
                t,
                value: eval_expansion(e, t),
                stderr: 0.0,
                bias_diag: None,
            })
            .collect(),
        provenance: Provenance::Quadrature,
    }
}

/// `n` log-spaced times on `[t_min, t_max]`.
pub fn log_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![t_min];
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let mut g: Vec<f64> = (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect();
    g[0] = t_min;
    g[n - 1] = t_max;
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat::{sk_series_curve, sk_series_full};
    use std::f64::consts::PI;

    fn idx(a: f64) -> StableIndex<f64> {
        StableIndex::new(a).unwrap()
    }

    fn unit() -> Interval<f64> {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn moment_integral_matches_closed_form() {
        for a in [1.0f64, 1.25, 1.5, 1.75] {
            let (q, _) = brownian_moment_integral(a);
            let c = brownian_moment_closed(a).unwrap();
            assert!((q - c).abs() < 1e-12 * c, "{a}");
        }
    }

    #[test]
    fn skbm_third_is_twice_ksbm_third() {
        let res = ExpansionResources {
            stable_mean: Some(MeanEstimate {
                estimate: 1.0,
                stderr: 0.0,
                n_steps: 1,
                refinement_gap: 0.0,
                refinement_stderr: 0.0,
            }),
            ..Default::default()
        };
        for a in [1.2, 1.5, 1.8] {
            let i = idx(a);
            let d = Interval::new(0.0, 2.0).unwrap();
            let sk = theorem_expansion(ProcessKind::SubordinateKilled, &i, &d, &res).unwrap();
            let ks = theorem_expansion(ProcessKind::KilledSubordinate, &i, &d, &res).unwrap();
            assert!((sk.c3 / ks.c3 - 2.0).abs() < 1e-10);
            assert_eq!(sk.c2log, 0.0);
        }
    }

    #[test]
    fn low_index_is_unsupported() {
        let r = theorem_expansion(ProcessKind::SubordinateKilled, &idx(0.7), &unit(), &Default::default());
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn cauchy_log_coefficients() {
        let res = ExpansionResources::default();
        let ks = theorem_expansion(ProcessKind::KilledSubordinate, &idx(1.0), &unit(), &res).unwrap();
        let sk = theorem_expansion(ProcessKind::SubordinateKilled, &idx(1.0), &unit(), &res).unwrap();
        assert_eq!(ks.c2log, 2.0 / PI);
        assert_eq!(sk.c2log / ks.c2log, 2.0);
        assert_eq!(ks.c2, 0.0);
        // the supremum of |Cauchy| gives (2/π) arctan(1/u) for every u > 0, so the constant is 2/π
        let (k, _) = skbm_cauchy_constant(1.0, SkbmTailOptions::default()).unwrap();
        assert!((k - 2.0 / PI).abs() < 1e-7, "{k}");
        // ln|D| enters with weight 1/π
        let (k1, _) = ksbm_cauchy_constant(1.0);
        let (k2, _) = ksbm_cauchy_constant(2.0);
        assert!((k2 - k1 - 2f64.ln() / PI).abs() < 1e-14);
    }

    #[test]
    fn arctan_tail_integral_is_negative() {
        let f = |u: f64| 2.0 / PI * (1.0 / u).atan() - 2.0 / (PI * u);
        let v = integrate_to_infinity(f, 1.0, 1.0, Tolerance::new(1e-14, 1e-12)).value;
        let closed = 2.0 / PI * (1.0 - PI / 4.0 - 2f64.ln() / 2.0);
        assert!(v < 0.0);
        assert!((v - closed).abs() < 1e-12);
    }

    #[test]
    fn residual_on_itself_is_c3() {
        let e = theorem_expansion(ProcessKind::SubordinateKilled, &idx(1.5), &unit(), &Default::default()).unwrap();
        let c = expansion_curve(&e, &log_grid(1e-6, 1e-3, 7));
        let mut c = c;
        c.provenance = Provenance::Series;
        for (_, r) in residual_curve(&c, &e).unwrap() {
            assert!((r - e.c3).abs() < 1e-6 * e.c3.abs());
        }
        c.alpha = 1.25;
        assert!(matches!(residual_curve(&c, &e), Err(Error::Mismatch(_))));
    }

    #[test]
    fn expansion_limits_and_monotonicity() {
        let e = theorem_expansion(ProcessKind::SubordinateKilled, &idx(1.5), &unit(), &Default::default()).unwrap();
        assert!((eval_expansion(&e, 1e-300) - 1.0).abs() < 1e-15);
        let ts = log_grid(1e-8, 1e-3, 50);
        for w in ts.windows(2) {
            assert!(eval_expansion(&e, w[1]) < eval_expansion(&e, w[0]));
        }
    }

    #[test]
    fn fit_recovers_exact_model() {
        let e = theorem_expansion(ProcessKind::SubordinateKilled, &idx(1.5), &unit(), &Default::default()).unwrap();
        let curve = expansion_curve(&e, &log_grid(1e-6, 1e-3, 40));
        let f = fit_coefficients(&curve, &[BasisTerm::Power, BasisTerm::Linear], DEFAULT_WINDOW).unwrap();
        assert!((f.get(BasisTerm::Power).unwrap().estimate - e.c2).abs() < 1e-10);
        assert!((f.get(BasisTerm::Linear).unwrap().estimate - e.c3).abs() < 1e-10 * e.c3.abs().max(1.0) * 10.0);
    }

    #[test]
    fn fit_on_series_matches_spectral_coefficient() {
        let i = idx(1.5);
        let curve = sk_series_curve(&i, &unit(), &log_grid(1e-6, 1e-3, 40)).unwrap();
        let f = fit_coefficients(&curve, &[BasisTerm::Power, BasisTerm::Linear], DEFAULT_WINDOW).unwrap();
        let c2 = 2.0 * skbm_second_coeff(&i).unwrap();
        assert!((f.get(BasisTerm::Power).unwrap().estimate / c2 - 1.0).abs() < 5e-3);
        let spectral = spectral_third_coeff(&i, 1.0).unwrap();
        assert!((f.get(BasisTerm::Linear).unwrap().estimate / spectral - 1.0).abs() < 0.05);
    }

    #[test]
    fn spectral_coefficient_matches_series_residual() {
        for a in [1.0, 1.5] {
            let i = idx(a);
            let t = 1e-7;
            let q = sk_series_full(&i, &unit(), t).unwrap();
            let (c2, c2log) = if a == 1.0 { (0.0, 4.0 / PI) } else { (2.0 * skbm_second_coeff(&i).unwrap(), 0.0) };
            let r = (1.0 - q - c2 * t.powf(1.0 / a) - c2log * t * (-t.ln())) / t;
            let s = spectral_third_coeff(&i, 1.0).unwrap();
            assert!((r - s).abs() < 2e-3 * s.abs(), "{a}: {r} vs {s}");
        }
    }

    #[test]
    fn fit_translation_invariance() {
        let i = idx(1.5);
        let ts = log_grid(1e-6, 1e-3, 20);
        let a = sk_series_curve(&i, &unit(), &ts).unwrap();
        let b = sk_series_curve(&i, &Interval::new(7.0, 8.0).unwrap(), &ts).unwrap();
        let basis = [BasisTerm::Power, BasisTerm::Linear];
        let fa = fit_coefficients(&a, &basis, DEFAULT_WINDOW).unwrap();
        let fb = fit_coefficients(&b, &basis, DEFAULT_WINDOW).unwrap();
        for (x, y) in fa.coefficients.iter().zip(&fb.coefficients) {
            assert!((x.estimate - y.estimate).abs() < 1e-12 * x.estimate.abs().max(1.0));
        }
    }

    #[test]
    fn collinear_basis_is_rejected() {
        let i = idx(1.0);
        let curve = sk_series_curve(&i, &unit(), &log_grid(1e-6, 1e-3, 20)).unwrap();
        let r = fit_coefficients(&curve, &[BasisTerm::Power, BasisTerm::Linear], DEFAULT_WINDOW);
        assert!(matches!(r, Err(Error::IllConditioned { .. })));
        assert!(fit_coefficients(&curve, &[BasisTerm::Linear], (1e-3, 1e-6)).is_err());
    }
}
