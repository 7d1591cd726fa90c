//! Special functions and closed-form expansion constants.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::num::Real;
use crate::quad::{integrate, integrate_to_infinity, Tolerance};

/// Catalan's constant.
pub const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

/// Expansion regime of a stable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// `1 < alpha < 2`
    HighStable,
    /// `alpha == 1`
    Cauchy,
    /// `0 < alpha < 1`
    LowStable,
}

/// Stability index `alpha` of the symmetric stable process, in `(0, 2)`.
///
/// The driving subordinator has index `alpha / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableIndex<T = f64> {
    alpha: T,
    regime: Regime,
}

impl<T: Real> StableIndex<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::lit(2.0)) {
            return Err(domain("stable index", alpha.as_f64(), "(0, 2)"));
        }
        let regime = if alpha == T::one() {
            Regime::Cauchy
        } else if alpha > T::one() {
            Regime::HighStable
        } else {
            Regime::LowStable
        };
        Ok(Self { alpha, regime })
    }

    #[inline]
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Index `alpha / 2` of the stable subordinator.
    #[inline]
    pub fn subordinator_index(&self) -> T {
        self.alpha / T::lit(2.0)
    }

    #[inline]
    pub fn regime(&self) -> Regime {
        self.regime
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Real>(xm1: T) -> T {
    let mut a = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::lit(c) / (xm1 + T::from_usize_lossy(i));
    }
    a
}

/// `sin(pi * x)` with argument reduction done before the multiplication.
pub fn sin_pi<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let r = x - two * (x / two).round();
    let pi = T::PI();
    if r > half {
        (pi * (T::one() - r)).sin()
    } else if r < -half {
        -(pi * (T::one() + r)).sin()
    } else {
        (pi * r).sin()
    }
}

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

/// Gamma function on the real line.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(domain("gamma", x.as_f64(), "reals excluding 0, -1, -2, ..."));
    }
    if x < T::lit(0.5) {
        // reflection: Γ(x) Γ(1-x) = π / sin(πx)
        let g = gamma(T::one() - x)?;
        return Ok(T::PI() / (sin_pi(x) * g));
    }
    let xm1 = x - T::one();
    let t = xm1 + T::lit(LANCZOS_G + 0.5);
    // split the power to delay overflow
    let h = t.powf((xm1 + T::lit(0.5)) / T::lit(2.0));
    let sqrt_2pi = (T::lit(2.0) * T::PI()).sqrt();
    Ok(sqrt_2pi * h * (h * (-t).exp()) * lanczos_sum(xm1))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(domain("ln_gamma", x.as_f64(), "(0, inf)"));
    }
    if x < T::lit(0.5) {
        // ln Γ(x) = ln π - ln sin(πx) - ln Γ(1-x); sin(πx) > 0 on (0, 1/2)
        return Ok(T::PI().ln() - sin_pi(x).ln() - ln_gamma(T::one() - x)?);
    }
    let xm1 = x - T::one();
    let t = xm1 + T::lit(LANCZOS_G + 0.5);
    let half_ln_2pi = T::lit(0.918_938_533_204_672_741_780_329_736_406);
    Ok(half_ln_2pi + (xm1 + T::lit(0.5)) * t.ln() - t + lanczos_sum(xm1).ln())
}

// Chebyshev coefficients of ln(erfc(z) e^{z^2} / t) in y = 2t - 1, t = 2/(2+z).
const ERFC_CHEB: [f64; 28] = [
    -1.302_653_719_781_709_41,
    6.419_697_923_564_902_10e-1,
    1.947_647_320_418_583_60e-2,
    -9.561_514_786_808_632_26e-3,
    -9.465_953_444_820_369_16e-4,
    3.668_394_978_527_614_47e-4,
    4.252_332_480_690_776_89e-5,
    -2.027_857_811_253_424_18e-5,
    -1.624_290_004_647_025_61e-6,
    1.303_655_835_580_523_24e-6,
    1.562_644_172_206_614_19e-8,
    -8.523_809_591_492_654_15e-8,
    6.529_054_439_098_851_49e-9,
    5.059_343_495_551_469_30e-9,
    -9.913_641_564_930_330_66e-10,
    -2.273_651_222_931_835_97e-10,
    9.646_791_102_015_527_02e-11,
    2.394_038_083_039_114_59e-12,
    -6.886_027_526_497_553_22e-12,
    8.944_879_273_090_725_31e-13,
    3.130_921_399_342_958_13e-13,
    -1.127_082_236_136_725_23e-13,
    3.810_905_255_189_232_05e-16,
    7.106_097_613_609_237_12e-15,
    -1.523_028_201_457_104_34e-15,
    -9.457_494_571_291_234_64e-17,
    1.210_237_189_224_278_99e-16,
    -2.816_663_087_747_177_10e-17,
];

/// Complementary error function, relative accuracy near machine precision.
pub fn erfc<T: Real>(z: T) -> T {
    if z < T::zero() {
        return T::lit(2.0) - erfc(-z);
    }
    if z == T::zero() {
        return T::one();
    }
    let two = T::lit(2.0);
    let t = two / (two + z);
    let ty = T::lit(4.0) * t - two;
    let mut d = T::zero();
    let mut dd = T::zero();
    for &c in ERFC_CHEB[1..].iter().rev() {
        let tmp = d;
        d = ty * d - dd + T::lit(c);
        dd = tmp;
    }
    t * (-z * z + T::lit(0.5) * (T::lit(ERFC_CHEB[0]) + ty * d) - dd).exp()
}

/// `P(sup_{s<=1} W_s > u) = erfc(u/2)` for Brownian motion with `E[W_1^2] = 2`.
pub fn erfc_halved<T: Real>(u: T) -> T {
    erfc(u / T::lit(2.0))
}

/// Constant `A_{1,alpha}` of the stable Lévy density `A / |x|^{1+alpha}`.
pub fn levy_constant<T: Real>(index: &StableIndex<T>) -> T {
    let a = index.alpha();
    let one = T::one();
    let two = T::lit(2.0);
    let num = a * two.powf(a - one) * gamma((one + a) / two).expect("(1+a)/2 > 0");
    let den = T::PI().sqrt() * gamma(one - a / two).expect("1 - a/2 in (0, 1)");
    num / den
}

/// `E[sup_{s <= S_1} W_s] = 2 Γ(1 - 1/alpha) / π`, finite only for `alpha > 1`.
pub fn skbm_second_coeff<T: Real>(index: &StableIndex<T>) -> Result<T> {
    let a = index.alpha();
    if a <= T::one() {
        return Err(domain("skbm_second_coeff", a.as_f64(), "(1, 2)"));
    }
    Ok(T::lit(2.0) * gamma(T::one() - T::one() / a)? / T::PI())
}

/// Magnitude of the `t` coefficient for killed stable processes with `alpha in (1, 2)`:
/// `2^α Γ((1+α)/2) / ((α-1) √π Γ(1-α/2) length^{α-1})`.
pub fn ksbm_third_coeff<T: Real>(index: &StableIndex<T>, length: T) -> Result<T> {
    let a = index.alpha();
    if index.regime() != Regime::HighStable {
        return Err(domain("ksbm_third_coeff", a.as_f64(), "alpha in (1, 2)"));
    }
    if !(length > T::zero()) || !length.is_finite() {
        return Err(domain("ksbm_third_coeff", length.as_f64(), "length > 0"));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let num = two.powf(a) * gamma((one + a) / two)?;
    let den = (a - one) * T::PI().sqrt() * gamma(one - a / two)? * length.powf(a - one);
    Ok(num / den)
}

/// `I(x) = ∫_0^{1/x} ln v / (1 + v^2) dv`.
///
/// The range is split at `min(1, 1/x)`; the piece touching the logarithmic
/// singularity is mapped through `v = e^{-s}`.
pub fn catalan_exponent<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(domain("catalan_exponent", x.as_f64(), "(0, inf)"));
    }
    let one = T::one();
    let eps = T::epsilon().as_f64();
    let tol = Tolerance::new(1e-300, (1e-14f64).max(20.0 * eps));
    let y = one / x;
    let v0 = y.min(one);
    let s0 = -v0.ln();
    let near_zero = integrate_to_infinity(
        |s: T| {
            let e = (-s).exp();
            -s * e / (one + e * e)
        },
        s0,
        one,
        tol,
    )
    .value;
    if y <= one {
        return Ok(near_zero);
    }
    let upper = integrate(|v: T| v.ln() / (one + v * v), one, y, tol).value;
    Ok(near_zero + upper)
}

/// Riemann zeta on the real axis, `s != 1`, via Borwein's alternating-series
/// acceleration of the Dirichlet eta function.
pub fn zeta<T: Real>(s: T) -> Result<T> {
    if s == T::one() || !s.is_finite() {
        return Err(domain("zeta", s.as_f64(), "reals excluding 1"));
    }
    if s < T::zero() {
        // functional equation keeps the alternating sum in its accurate range
        let one = T::one();
        let two = T::lit(2.0);
        let pi = T::PI();
        let g = gamma(one - s)?;
        let z = zeta(one - s)?;
        return Ok(two.powf(s) * pi.powf(s - one) * sin_pi(s / two) * g * z);
    }
    const N: usize = 40;
    let n = T::from_usize_lossy(N);
    let four = T::lit(4.0);
    let mut term = T::one() / n;
    let mut partial = term;
    let mut d = Vec::with_capacity(N + 1);
    d.push(n * partial);
    for i in 0..N {
        let fi = T::from_usize_lossy(i);
        let two_i = T::lit(2.0) * fi;
        term = term * four * (n + fi) * (n - fi) / ((two_i + T::one()) * (two_i + T::lit(2.0)));
        partial = partial + term;
        d.push(n * partial);
    }
    let dn = d[N];
    let mut acc = T::zero();
    for k in 0..N {
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        acc = acc + sign * (d[k] - dn) / T::from_usize_lossy(k + 1).powf(s);
    }
    let eta = -acc / dn;
    Ok(eta / (T::one() - T::lit(2.0).powf(T::one() - s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Γ(1/3) from 3∫_0^∞ exp(-s^3) ds by composite Simpson (see oracle below).
    const GAMMA_ONE_THIRD: f64 = 2.678_938_534_707_747_6;

    fn simpson_gamma_one_third() -> f64 {
        let (a, b, n) = (0.0f64, 7.0f64, 20_000usize);
        let h = (b - a) / n as f64;
        let f = |s: f64| (-s * s * s).exp();
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        3.0 * acc * h / 3.0
    }

    #[test]
    fn gamma_oracle_agrees_with_frozen_value() {
        let oracle = simpson_gamma_one_third();
        assert!((oracle - GAMMA_ONE_THIRD).abs() < 1e-12, "{oracle}");
        let g = gamma(1.0f64 / 3.0).unwrap();
        assert!((g - oracle).abs() / oracle < 1e-12, "{g}");
        assert!((g - GAMMA_ONE_THIRD).abs() / GAMMA_ONE_THIRD < 1e-13, "{g}");
    }

    #[test]
    fn gamma_trivial_values() {
        assert!((gamma(0.5f64).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(1.0f64).unwrap() - 1.0).abs() < 1e-15);
        let g30 = gamma(30.0f64).unwrap();
        let fact29 = 8_841_761_993_739_701_954_543_616_000_000.0f64;
        assert!((g30 - fact29).abs() / fact29 < 1e-13);
        let gm = gamma(-0.5f64).unwrap();
        assert!((gm + 2.0 * PI.sqrt()).abs() < 1e-13);
        // Γ(-9.5) = Γ(0.5) / prod_{k=0}^{9} (-9.5 + k)
        let prod: f64 = (0..10).map(|k| -9.5 + k as f64).product();
        let expected = PI.sqrt() / prod;
        assert!((gamma(-9.5f64).unwrap() - expected).abs() / expected.abs() < 1e-12);
    }

    #[test]
    fn gamma_poles_are_domain_errors() {
        for x in [0.0f64, -1.0, -2.0, -10.0] {
            assert!(gamma(x).is_err());
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for x in [0.1f64, 0.4, 1.7, 5.5, 29.0] {
            let a = ln_gamma(x).unwrap();
            let b = gamma(x).unwrap().ln();
            assert!((a - b).abs() < 1e-13 * b.abs().max(1.0), "{x}: {a} {b}");
        }
        assert!((ln_gamma(171.5f64).unwrap() - 709.143_163_030_928_2).abs() < 1e-10);
    }

    #[test]
    fn gamma_single_precision() {
        let g = gamma(1.0f32 / 3.0).unwrap();
        assert!((g - GAMMA_ONE_THIRD as f32).abs() < 1e-5);
    }

    #[test]
    fn erfc_reference_values() {
        // erfc reference digits
        let cases = [
            (0.0f64, 1.0f64),
            (0.5, 0.479_500_122_186_953_5),
            (1.0, 0.157_299_207_050_285_13),
            (2.0, 4.677_734_981_047_265_8e-3),
            (5.0, 1.537_459_794_428_034_8e-12),
            (10.0, 2.088_487_583_762_544_8e-45),
        ];
        for (z, want) in cases {
            let got = erfc(z);
            assert!((got - want).abs() <= 1e-14 * want, "erfc({z}) = {got}, want {want}");
        }
        assert!((erfc(-1.0f64) - (2.0 - 0.157_299_207_050_285_13)).abs() < 1e-15);
    }

    #[test]
    fn erfc_halved_edge_cases() {
        assert_eq!(erfc_halved(0.0f64), 1.0);
        let u = 10.0f64;
        let asym = 2.0 / (PI.sqrt() * u) * (-u * u / 4.0).exp();
        assert!((erfc_halved(u) / asym - 1.0).abs() < 0.02);
        // ∫_0^∞ erfc(u/2) du = E[|W_1|] = 2/√π
        let m = integrate_to_infinity(erfc_halved::<f64>, 0.0, 2.0, Tolerance::default()).value;
        assert!((m - 2.0 / PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn levy_constant_values() {
        let c1 = levy_constant(&StableIndex::new(1.0f64).unwrap());
        assert!((c1 - 1.0 / PI).abs() < 1e-15);
        // α = 1.5: 1.5 · 2^{0.5} Γ(1.25) / (√π Γ(0.25))
        let c = levy_constant(&StableIndex::new(1.5f64).unwrap());
        let expected = 1.5 * 2f64.sqrt() * 0.906_402_477_055_477 / (PI.sqrt() * 3.625_609_908_221_908);
        assert!((c - expected).abs() < 1e-13, "{c}");
        assert!((c - 0.299_206_710_301_075).abs() < 1e-13);
        let small = levy_constant(&StableIndex::new(1e-6f64).unwrap());
        assert!(small > 0.0 && small < 1e-6);
        assert!(StableIndex::new(2.0f64).is_err());
    }

    #[test]
    fn skbm_second_coeff_values() {
        let c = skbm_second_coeff(&StableIndex::new(1.5f64).unwrap()).unwrap();
        assert!((c - 2.0 * GAMMA_ONE_THIRD / PI).abs() < 1e-13);
        assert!((c - 1.7055).abs() < 1e-4);
        assert!(skbm_second_coeff(&StableIndex::new(1.0f64).unwrap()).is_err());
        let near_one = skbm_second_coeff(&StableIndex::new(1.0f64 + 1e-6).unwrap()).unwrap();
        assert!(near_one > 1e5);
        let near_two = skbm_second_coeff(&StableIndex::new(2.0f64 - 1e-9).unwrap()).unwrap();
        assert!((near_two - 2.0 / PI.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn ksbm_third_coeff_values() {
        let idx = StableIndex::new(1.5f64).unwrap();
        let c = ksbm_third_coeff(&idx, 1.0).unwrap();
        let expected = 2f64.powf(1.5) * 0.906_402_477_055_477 / (0.5 * PI.sqrt() * 3.625_609_908_221_908);
        assert!((c - expected).abs() < 1e-12, "{c}");
        assert!((c - 0.798).abs() < 1e-3);
        let c2 = ksbm_third_coeff(&idx, 2.0).unwrap();
        assert!((c2 - c / 2f64.sqrt()).abs() < 1e-14);
        let near = ksbm_third_coeff(&StableIndex::new(1.0 + 1e-8).unwrap(), 1.0).unwrap();
        assert!((near * 1e-8 - 2.0 / PI).abs() < 1e-6);
        assert!(ksbm_third_coeff(&StableIndex::new(1.0f64).unwrap(), 1.0).is_err());
        assert!(ksbm_third_coeff(&idx, 0.0).is_err());
    }

    fn catalan_series() -> f64 {
        // Σ (-1)^n / (2n+1)^2, averaged partial sums for the alternating tail
        let mut s = 0.0;
        let mut prev = 0.0;
        for n in 0..200_000 {
            prev = s;
            let k = (2 * n + 1) as f64;
            s += if n % 2 == 0 { 1.0 } else { -1.0 } / (k * k);
        }
        0.5 * (s + prev)
    }

    #[test]
    fn catalan_exponent_at_one_is_minus_catalan() {
        let g = catalan_series();
        assert!((g - CATALAN).abs() < 1e-12);
        let i1 = catalan_exponent(1.0f64).unwrap();
        assert!((i1 + g).abs() < 1e-12, "{i1}");
    }

    #[test]
    fn catalan_exponent_limits_and_tail_form() {
        assert!(catalan_exponent(1e12f64).unwrap().abs() < 1e-10);
        assert!(catalan_exponent(0.0f64).is_err());
        assert!(catalan_exponent(-1.0f64).is_err());
        // ∫_0^∞ ln v/(1+v^2) = 0, so I(x) -> 0 as x -> 0 as well
        assert!(catalan_exponent(1e-9f64).unwrap().abs() < 1e-7);
        // (1/π)∫_x^∞ ln y/(1+y^2) dy = -(1/π) I(x)
        for x in [0.3f64, 2.0, 17.0] {
            let tail = integrate_to_infinity(|y: f64| y.ln() / (1.0 + y * y), x, 1.0, Tolerance::default()).value;
            assert!((tail + catalan_exponent(x).unwrap()).abs() < 1e-11, "{x}");
        }
    }

    #[test]
    fn zeta_reference_values() {
        assert!((zeta(2.0f64).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(0.5f64).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-13);
        assert!((zeta(0.0f64).unwrap() + 0.5).abs() < 1e-14);
        assert!((zeta(-1.0f64).unwrap() + 1.0 / 12.0).abs() < 1e-13);
        assert!(zeta(1.0f64).is_err());
    }
}
