//! Closed-form predictions for the three temperature regimes, with numerical
//! oracles for the constants and for the angle-averaged edge probability.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::gamma::{gamma, ln_gamma};
use thiserror::Error;

use crate::model::{connection_probability, distance_polar, ModelParams, Regime};
use crate::quadrature::{integrate, integrate_endpoint_singular, integrate_pieces, QuadratureError};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TheoryError {
    #[error("predictions require 0 < ζ/α < 2, got ζ/α = {0}")]
    InvalidRatio(f64),
    #[error("hot-regime constant undefined: 2α − βζ = {0} is not positive")]
    HotConstantUndefined(f64),
    #[error("{what} requires the {expected} regime, got β = {beta}")]
    WrongRegime {
        what: &'static str,
        expected: Regime,
        beta: f64,
    },
    #[error("the threshold (disc) model has no Fermi-Dirac constants")]
    DiscModel,
    #[error("cutoff x0 = {x0} exceeds the disc radius R = {radius}")]
    CutoffBeyondRadius { x0: f64, radius: f64 },
    #[error("type {t} outside [0, {radius}]")]
    TypeOutOfRange { t: f64, radius: f64 },
    #[error("mixed-Poisson remainder bound {0:e} exceeds 1e-13")]
    RemainderTooLarge(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Constants of the angle-averaged edge probability and the expected degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeConstants {
    pub regime: Regime,
    /// `C_β`: `p̂ ≈ C_β/A` (cold), `C_β ln A/A` (critical), `C_β/A^β` (hot).
    pub c_beta: f64,
    /// `K`: the leading constant of the conditional expected degree.
    pub k_const: f64,
    /// Degree tail exponent `2α/ζ + 1`; cold regime only.
    pub power_exponent: Option<f64>,
}

/// `C_β = (2/β)/sin(π/β)` for `β > 1`.
pub fn c_beta_cold(beta: f64) -> f64 {
    2.0 / (beta * (PI / beta).sin())
}

/// `C_1 = 2/π`.
pub fn c_beta_critical() -> f64 {
    2.0 / PI
}

/// `C_β = Γ((1−β)/2)/(√π Γ(1−β/2))` for `β < 1`.
pub fn c_beta_hot(beta: f64) -> f64 {
    gamma(0.5 * (1.0 - beta)) / (PI.sqrt() * gamma(1.0 - 0.5 * beta))
}

/// `C_β` for `β > 1` by quadrature of `(2/π) ∫_0^∞ dz/(1 + z^β)`.
///
/// The half-line is split at 1 and the upper part mapped to `(0, 1]` by
/// `z = 1/s`, which leaves `s^{β−2}/(1 + s^β)`, singular at 0 when `β < 2`.
pub fn c_beta_cold_quadrature(beta: f64) -> Result<f64, QuadratureError> {
    assert!(beta > 1.0);
    let lower = integrate(|z: f64| 1.0 / (1.0 + z.powf(beta)), 0.0, 1.0, 0.0, 1e-14)?;
    let gamma_sing = (2.0 - beta).max(0.0);
    let upper = integrate_endpoint_singular(
        |s: f64| s.powf(beta - 2.0) / (1.0 + s.powf(beta)),
        0.0,
        1.0,
        gamma_sing,
        0.0,
        1e-14,
    )?;
    Ok(2.0 / PI * (lower.value + upper.value))
}

/// `C_β` for `β < 1` by quadrature of `(1/π) ∫_0^π sin^{−β}(θ/2) dθ`.
pub fn c_beta_hot_quadrature(beta: f64) -> Result<f64, QuadratureError> {
    assert!(beta > 0.0 && beta < 1.0);
    let q = integrate_endpoint_singular(|th: f64| (0.5 * th).sin().powf(-beta), 0.0, PI, beta, 0.0, 1e-14)?;
    Ok(q.value / PI)
}

fn check_theory(params: &ModelParams) -> Result<(), TheoryError> {
    if params.disc {
        return Err(TheoryError::DiscModel);
    }
    if !params.theory_valid {
        return Err(TheoryError::InvalidRatio(params.zeta / params.alpha));
    }
    Ok(())
}

fn expect_regime(params: &ModelParams, expected: Regime, what: &'static str) -> Result<(), TheoryError> {
    if params.regime() != expected {
        return Err(TheoryError::WrongRegime {
            what,
            expected,
            beta: params.beta,
        });
    }
    Ok(())
}

pub fn cold_constants(params: &ModelParams) -> Result<RegimeConstants, TheoryError> {
    expect_regime(params, Regime::Cold, "cold constants")?;
    check_theory(params)?;
    let (a, z, b) = (params.alpha, params.zeta, params.beta);
    let c_beta = c_beta_cold(b);
    Ok(RegimeConstants {
        regime: Regime::Cold,
        c_beta,
        k_const: 2.0 * a / (2.0 * a - z) * c_beta,
        power_exponent: Some(2.0 * a / z + 1.0),
    })
}

pub fn critical_constants(params: &ModelParams) -> Result<RegimeConstants, TheoryError> {
    expect_regime(params, Regime::Critical, "critical constants")?;
    check_theory(params)?;
    let (a, z) = (params.alpha, params.zeta);
    Ok(RegimeConstants {
        regime: Regime::Critical,
        c_beta: c_beta_critical(),
        k_const: 2.0 * a * z / (PI * (2.0 * a - z)),
        power_exponent: None,
    })
}

pub fn hot_constants(params: &ModelParams) -> Result<RegimeConstants, TheoryError> {
    expect_regime(params, Regime::Hot, "hot constants")?;
    let (a, z, b) = (params.alpha, params.zeta, params.beta);
    let denominator = 2.0 * a - b * z;
    if denominator.is_nan() || denominator <= 0.0 {
        return Err(TheoryError::HotConstantUndefined(denominator));
    }
    check_theory(params)?;
    let c_beta = c_beta_hot(b);
    Ok(RegimeConstants {
        regime: Regime::Hot,
        c_beta,
        k_const: 2.0 * a / denominator * c_beta,
        power_exponent: None,
    })
}

pub fn regime_constants(params: &ModelParams) -> Result<RegimeConstants, TheoryError> {
    match params.regime() {
        Regime::Cold => cold_constants(params),
        Regime::Critical => critical_constants(params),
        Regime::Hot => hot_constants(params),
    }
}

/// Limit of the mean degree in the cold regime, `K · 2α/(2α − ζ)`.
pub fn cold_mean_degree(params: &ModelParams) -> Result<f64, TheoryError> {
    let c = cold_constants(params)?;
    Ok(c.k_const * 2.0 * params.alpha / (2.0 * params.alpha - params.zeta))
}

fn check_type(t: f64, params: &ModelParams) -> Result<(), TheoryError> {
    if !(0.0..=params.radius).contains(&t) {
        return Err(TheoryError::TypeOutOfRange { t, radius: params.radius });
    }
    Ok(())
}

/// `p̂ = (1/π) ∫_0^π p(d(θ)) dθ` for vertices of types `t_u`, `t_v`, using the
/// exact distance.
///
/// The integrand drops from near 1 to its tail around `θ ≈ 1/A`, which can be
/// far below machine epsilon relative to π, so all but a short initial piece
/// is integrated in `ln θ`. The tolerance is relative (`1e-10`) because `p̂`
/// itself can be many orders of magnitude below any fixed absolute tolerance.
pub fn angle_avg_probability_numeric(t_u: f64, t_v: f64, params: &ModelParams) -> Result<f64, TheoryError> {
    check_type(t_u, params)?;
    check_type(t_v, params)?;
    let (r_u, r_v, zeta) = (params.radius - t_u, params.radius - t_v, params.zeta);
    let dist = |th: f64| distance_polar(r_u, r_v, th, zeta);

    if params.disc {
        // p is the indicator of d(θ) < R and d increases in θ.
        if dist(PI) < params.radius {
            return Ok(1.0);
        }
        if dist(0.0) >= params.radius {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if dist(mid) < params.radius {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Ok(lo / PI);
    }

    let p = |th: f64| connection_probability(dist(th), params);
    let a = crate::model::a_factor(t_u, t_v, params);
    let theta_lo = (PI / 2.0).min(1e-3 / a.max(1.0));
    let head = integrate(p, 0.0, theta_lo, 0.0, 1e-12)?;
    let (s_lo, s_hi) = (theta_lo.ln(), PI.ln());
    let mut breaks = vec![s_lo];
    let s_mid = (-a.max(1.0).ln()).clamp(s_lo, s_hi);
    if s_mid > s_lo && s_mid < s_hi {
        breaks.push(s_mid);
    }
    breaks.push(s_hi);
    let tail = integrate_pieces(
        |s: f64| {
            let th = s.exp();
            p(th) * th
        },
        &breaks,
        0.0,
        1e-12,
    )?;
    let total = head.value + tail.value;
    let err = head.abs_error + tail.abs_error;
    if err > 1e-10 * total.abs() && err > f64::MIN_POSITIVE {
        return Err(TheoryError::Quadrature(QuadratureError::NotConverged {
            value: total,
            error: err,
            intervals: 0,
        }));
    }
    Ok(total / PI)
}

/// Leading-order `p̂`: `C_β/A`, `C_β ln A/A` or `C_β/A^β` by regime.
pub fn angle_avg_probability_asymptotic(t_u: f64, t_v: f64, params: &ModelParams) -> Result<f64, TheoryError> {
    let c = regime_constants(params)?;
    let a = crate::model::a_factor(t_u, t_v, params);
    Ok(match c.regime {
        Regime::Cold => c.c_beta / a,
        Regime::Critical => c.c_beta * a.ln() / a,
        Regime::Hot => c.c_beta * a.powf(-params.beta),
    })
}

/// `A^{−1}/θ̂`, which diverges when `R − t_u − t_v → ∞`; this separation is
/// what makes the asymptotic distance usable on the bulk of the angle range.
pub fn angular_scale_ratio(t_u: f64, t_v: f64, params: &ModelParams) -> f64 {
    1.0 / (crate::model::a_factor(t_u, t_v, params) * crate::model::theta_hat(t_u, t_v, params))
}

/// Type cutoff `x0 = ζR/(2α) + ω`; with high probability no vertex has a
/// larger type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveCutoff {
    pub x0: f64,
    pub omega: f64,
}

/// Default slack `ω(N) = max(1, ln ln N)`.
pub fn default_omega(params: &ModelParams) -> f64 {
    let lnn = params.n().ln();
    if lnn > 1.0 {
        lnn.ln().max(1.0)
    } else {
        1.0
    }
}

impl EffectiveCutoff {
    pub fn new(params: &ModelParams, omega: Option<f64>) -> Result<Self, TheoryError> {
        let c = Self::unchecked(params, omega);
        if c.x0 > params.radius {
            return Err(TheoryError::CutoffBeyondRadius {
                x0: c.x0,
                radius: params.radius,
            });
        }
        Ok(c)
    }

    /// Same value without the `x0 ≤ R` check (small `N` can violate it).
    pub fn unchecked(params: &ModelParams, omega: Option<f64>) -> Self {
        let omega = omega.unwrap_or_else(|| default_omega(params));
        Self {
            x0: params.zeta * params.radius / (2.0 * params.alpha) + omega,
            omega,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreePrediction {
    pub t: f64,
    pub expected_degree: f64,
    /// The type lies beyond the cutoff `x0`, where the formula is not claimed.
    pub extrapolation: bool,
}

/// `(N − 1) q(t)` with `q = K e^{ζt/2}/N` (cold), `K (R − t) e^{ζt/2}/N`
/// (critical) or `K (e^{ζt/2}/N)^β` (hot).
pub fn expected_degree(t: f64, params: &ModelParams) -> Result<DegreePrediction, TheoryError> {
    expected_degree_with(t, params, &regime_constants(params)?, None)
}

pub fn expected_degree_with(
    t: f64,
    params: &ModelParams,
    constants: &RegimeConstants,
    omega: Option<f64>,
) -> Result<DegreePrediction, TheoryError> {
    check_type(t, params)?;
    let n = params.n();
    let growth = (0.5 * params.zeta * t).exp() / n;
    let q = match constants.regime {
        Regime::Cold => constants.k_const * growth,
        Regime::Critical => constants.k_const * (params.radius - t) * growth,
        Regime::Hot => constants.k_const * growth.powf(params.beta),
    };
    Ok(DegreePrediction {
        t,
        expected_degree: (n - 1.0) * q,
        extrapolation: t > EffectiveCutoff::unchecked(params, omega).x0,
    })
}

/// Pareto law `F(t) = 1 − (K/t)^s` on `[K, ∞)`, `s = 2α/ζ`: the limit law of
/// a vertex's expected degree in the cold regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingDistribution {
    pub k_const: f64,
    pub shape: f64,
    pub support_min: f64,
}

impl MixingDistribution {
    pub fn new(params: &ModelParams) -> Result<Self, TheoryError> {
        let c = cold_constants(params)?;
        Ok(Self::from_parts(c.k_const, 2.0 * params.alpha / params.zeta))
    }

    pub fn from_parts(k_const: f64, shape: f64) -> Self {
        Self {
            k_const,
            shape,
            support_min: k_const,
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t < self.k_const {
            0.0
        } else {
            1.0 - (self.k_const / t).powf(self.shape)
        }
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t < self.k_const {
            0.0
        } else {
            self.shape / t * (self.k_const / t).powf(self.shape)
        }
    }

    /// Inverse CDF for `u ∈ [0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        self.k_const * (1.0 - u).powf(-1.0 / self.shape)
    }
}

/// Poisson mixture with the [`MixingDistribution`] as rate law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedPoisson {
    pub mixing: MixingDistribution,
}

impl MixedPoisson {
    pub fn new(params: &ModelParams) -> Result<Self, TheoryError> {
        Ok(Self {
            mixing: MixingDistribution::new(params)?,
        })
    }

    pub fn from_mixing(mixing: MixingDistribution) -> Self {
        Self { mixing }
    }

    /// `P(MP = k) = s K^s ∫_K^∞ e^{−t} t^{k−s−1}/k! dt`.
    ///
    /// Integrated on `[K, K + 60 + 10k]`; the rest is bounded through the
    /// upper incomplete gamma function and must be below `1e-13`.
    pub fn pmf(&self, k: u64) -> Result<f64, TheoryError> {
        let (kc, s) = (self.mixing.k_const, self.mixing.shape);
        let kf = k as f64;
        let log_norm = s.ln() + s * kc.ln() - ln_gamma(kf + 1.0);
        let power = kf - s - 1.0;
        let upper = kc + 60.0 + 10.0 * kf;

        // ∫_T^∞ e^{−t} t^{a−1} dt ≤ T^{a−1} e^{−T}/(1 − (a−1)/T) for T > a − 1.
        let a_minus_1 = power;
        let denom = 1.0 - a_minus_1.max(0.0) / upper;
        let log_rem = log_norm + a_minus_1 * upper.ln() - upper - denom.ln();
        let remainder = log_rem.exp();
        if remainder >= 1e-13 {
            return Err(TheoryError::RemainderTooLarge(remainder));
        }

        let f = |t: f64| (log_norm - t + power * t.ln()).exp();
        let mut breaks = vec![kc];
        let peak = power;
        if peak > kc {
            let width = peak.max(1.0).sqrt();
            for x in [peak - 6.0 * width, peak, peak + 6.0 * width] {
                if x > kc && x < upper {
                    breaks.push(x);
                }
            }
        }
        breaks.push(upper);
        let q = integrate_pieces(f, &breaks, 1e-14, 1e-10)?;
        Ok(q.value)
    }

    /// `pmf(k) · k^{s+1} / (s K^s)`, which tends to 1.
    pub fn tail_ratio(&self, k: u64) -> Result<f64, TheoryError> {
        let (kc, s) = (self.mixing.k_const, self.mixing.shape);
        Ok(self.pmf(k)? * (k as f64).powf(s + 1.0) / (s * kc.powf(s)))
    }

    /// `pmf(0..=k_max)`.
    pub fn table(&self, k_max: u64) -> Result<Vec<f64>, TheoryError> {
        (0..=k_max).map(|k| self.pmf(k)).collect()
    }
}

pub fn mixed_poisson_pmf(k: u64, params: &ModelParams) -> Result<f64, TheoryError> {
    MixedPoisson::new(params)?.pmf(k)
}

/// Weight `√C_β e^{ζt/2}` of a vertex of type `t` in the comparison graph.
pub fn chung_lu_weight(t: f64, params: &ModelParams) -> Result<f64, TheoryError> {
    let c = cold_constants(params)?;
    Ok(c.c_beta.sqrt() * (0.5 * params.zeta * t).exp())
}

/// Rank-one kernel `κ(t_u, t_v) = C_β e^{ζt_u/2} e^{ζt_v/2}`, chosen so that
/// `κ/N = C_β/A(t_u, t_v)`, the leading-order angle-averaged edge probability.
pub fn chung_lu_kernel(t_u: f64, t_v: f64, params: &ModelParams) -> Result<f64, TheoryError> {
    let c = cold_constants(params)?;
    Ok(c.c_beta * (0.5 * params.zeta * (t_u + t_v)).exp())
}

/// Qualitative growth of the mean degree in `N`.
pub fn growth_label(regime: Regime) -> &'static str {
    match regime {
        Regime::Cold => "constant",
        Regime::Critical => "logarithmic",
        Regime::Hot => "polynomial",
    }
}

/// Everything the theory says about one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryPrediction {
    pub regime: Regime,
    pub constants: RegimeConstants,
    pub growth: &'static str,
    pub cutoff: EffectiveCutoff,
    pub expected_degree: Vec<DegreePrediction>,
    /// Cold regime: the limiting mean degree and degree distribution.
    pub mean_degree_limit: Option<f64>,
    pub mixing: Option<MixingDistribution>,
    pub mp_pmf: Option<Vec<f64>>,
}

/// Builds a [`TheoryPrediction`] with the expected degree on `t_points`
/// equally spaced types in `[0, R]` and, in the cold regime, the pmf for
/// `k ≤ k_cap`.
pub fn predict(
    params: &ModelParams,
    k_cap: u64,
    t_points: usize,
    omega: Option<f64>,
) -> Result<TheoryPrediction, TheoryError> {
    let constants = regime_constants(params)?;
    let cutoff = EffectiveCutoff::unchecked(params, omega);
    let steps = t_points.max(2) - 1;
    let expected_degree = (0..=steps)
        .map(|i| {
            let t = params.radius * i as f64 / steps as f64;
            expected_degree_with(t.min(params.radius), params, &constants, omega)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (mean_degree_limit, mixing, mp_pmf) = if constants.regime == Regime::Cold {
        let mp = MixedPoisson::new(params)?;
        (Some(cold_mean_degree(params)?), Some(mp.mixing), Some(mp.table(k_cap)?))
    } else {
        (None, None, None)
    };
    Ok(TheoryPrediction {
        regime: constants.regime,
        constants,
        growth: growth_label(constants.regime),
        cutoff,
        expected_degree,
        mean_degree_limit,
        mixing,
        mp_pmf,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn params(beta: f64) -> ModelParams {
        ModelParams::new(100_000, 1.0, 1.0, beta).unwrap()
    }

    #[test]
    fn constants_examples() {
        let c = regime_constants(&params(2.0)).unwrap();
        assert!((c.k_const - 2.0).abs() < 1e-14);
        assert!((c.c_beta - 1.0).abs() < 1e-14);
        assert_eq!(c.power_exponent, Some(3.0));
        let c = regime_constants(&params(1.0)).unwrap();
        assert!((c.k_const - 2.0 / PI).abs() < 1e-15);
        let c = regime_constants(&params(0.5)).unwrap();
        // (1/√π)(4/3) Γ(1/4)/Γ(3/4)
        let want = 4.0 / 3.0 * 3.625_609_908_221_908_3 / (1.225_416_702_465_177_6 * PI.sqrt());
        assert!((c.k_const - want).abs() < 1e-12, "{}", c.k_const);
        assert!((c.k_const - 2.2257).abs() < 1e-4);
    }

    #[test]
    fn cold_identity_between_forms() {
        for &(a, z, b) in &[(1.0, 1.0, 2.0), (0.8, 1.1, 1.7), (2.0, 1.0, 3.5)] {
            let p = ModelParams::new(1000, z, a, b).unwrap();
            let c = cold_constants(&p).unwrap();
            let direct = 4.0 * a / (2.0 * a - z) / b / (PI / b).sin();
            assert!((c.k_const - direct).abs() < 1e-13 * direct);
        }
    }

    #[test]
    fn regime_errors() {
        assert!(matches!(cold_constants(&params(1.0)), Err(TheoryError::WrongRegime { .. })));
        assert!(matches!(hot_constants(&params(1.0)), Err(TheoryError::WrongRegime { .. })));
        let bad = ModelParams::new(1000, 4.0, 1.0, 0.6).unwrap();
        let err = regime_constants(&bad).unwrap_err();
        assert!(err.to_string().contains("hot-regime constant undefined"));
        let invalid = ModelParams::new(1000, 2.0, 1.0, 2.0).unwrap();
        assert!(matches!(regime_constants(&invalid), Err(TheoryError::InvalidRatio(_))));
        let disc = ModelParams::new_disc(1000, 1.0, 1.0).unwrap();
        assert!(matches!(regime_constants(&disc), Err(TheoryError::DiscModel)));
    }

    #[test]
    fn c_beta_quadrature_matches_closed_form() {
        for beta in [1.2, 1.5, 2.0, 3.0, 7.0] {
            let q = c_beta_cold_quadrature(beta).unwrap();
            assert!((q - c_beta_cold(beta)).abs() < 1e-10, "β={beta}: {q}");
        }
        for beta in [0.1, 0.25, 0.5, 0.75, 0.95] {
            let q = c_beta_hot_quadrature(beta).unwrap();
            assert!((q - c_beta_hot(beta)).abs() < 1e-10, "β={beta}: {q}");
        }
    }

    #[test]
    fn reciprocal_reading_of_cold_constant() {
        // ∫_0^∞ dz/(1+z^β) = (π/β)/sin(π/β); an arcsine reading would be
        // undefined for β < π.
        let beta = 2.0;
        assert!((c_beta_cold_quadrature(beta).unwrap() * PI / 2.0 - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn p_hat_at_origin_is_p_of_zero() {
        let p = params(2.0);
        let got = angle_avg_probability_numeric(p.radius, p.radius, &p).unwrap();
        let want = connection_probability(0.0, &p);
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn p_hat_leading_order_examples() {
        // R = 60, t_u = t_v = 5
        for (beta, lo, hi) in [(2.0, 0.95, 1.05), (0.5, 0.9, 1.1)] {
            let mut p = ModelParams::new(1000, 1.0, 1.0, beta).unwrap();
            p.radius = 60.0;
            let num = angle_avg_probability_numeric(5.0, 5.0, &p).unwrap();
            let asym = angle_avg_probability_asymptotic(5.0, 5.0, &p).unwrap();
            let ratio = num / asym;
            assert!(ratio > lo && ratio < hi, "β={beta}: {ratio}");
        }
    }

    #[test]
    fn p_hat_against_brute_force() {
        // Composite Simpson on a fine uniform grid, valid when 1/A is not tiny.
        let mut p = ModelParams::new(1000, 1.0, 1.0, 1.5).unwrap();
        p.radius = 8.0;
        let (tu, tv) = (2.0, 3.0);
        let f = |th: f64| connection_probability(distance_polar(p.radius - tu, p.radius - tv, th, p.zeta), &p);
        let m = 200_000;
        let h = PI / m as f64;
        let mut s = f(0.0) + f(PI);
        for i in 1..m {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let brute = s * h / 3.0 / PI;
        let got = angle_avg_probability_numeric(tu, tv, &p).unwrap();
        assert!((got - brute).abs() < 1e-10, "{got} vs {brute}");
    }

    #[test]
    fn p_hat_disc_mode() {
        let p = ModelParams::new_disc(10_000, 1.0, 1.0).unwrap();
        let v = angle_avg_probability_numeric(3.0, 4.0, &p).unwrap();
        // Threshold angle from the law of cosines.
        let (ru, rv) = (p.radius - 3.0, p.radius - 4.0);
        let c = ((ru.cosh() * rv.cosh() - p.radius.cosh()) / (ru.sinh() * rv.sinh())).clamp(-1.0, 1.0);
        assert!((v - c.acos() / PI).abs() < 1e-9);
    }

    #[test]
    fn expected_degree_examples() {
        let p = params(2.0);
        let d = expected_degree(0.0, &p).unwrap();
        assert!((d.expected_degree - 2.0 * (p.n() - 1.0) / p.n()).abs() < 1e-12);
        assert!(!d.extrapolation);
        let crit = params(1.0);
        let d = expected_degree(0.0, &crit).unwrap();
        let want = 4.0 / PI * crit.n().ln() * (crit.n() - 1.0) / crit.n();
        assert!((d.expected_degree - want).abs() < 1e-10);
        let hot = params(0.5);
        let k = hot_constants(&hot).unwrap().k_const;
        let d = expected_degree(0.0, &hot).unwrap();
        assert!((d.expected_degree / (k * hot.n().sqrt()) - 1.0).abs() < 1e-4);
        let x0 = EffectiveCutoff::new(&p, None).unwrap().x0;
        assert!(expected_degree(x0 + 0.1, &p).unwrap().extrapolation);
        assert!(!expected_degree(x0 - 0.1, &p).unwrap().extrapolation);
    }

    #[test]
    fn cutoff() {
        let p = params(2.0);
        let c = EffectiveCutoff::new(&p, None).unwrap();
        assert!((c.omega - p.n().ln().ln()).abs() < 1e-15);
        assert!((c.x0 - (p.radius / 2.0 + c.omega)).abs() < 1e-14);
        assert!(EffectiveCutoff::new(&p, Some(20.0)).is_err());
        let tiny = ModelParams::new(3, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(default_omega(&tiny), 1.0);
    }

    #[test]
    fn mixing_distribution_is_a_cdf() {
        let m = MixingDistribution::from_parts(2.0, 2.0);
        assert_eq!(m.cdf(1.9), 0.0);
        assert_eq!(m.cdf(2.0), 0.0);
        assert!((m.cdf(4.0) - 0.75).abs() < 1e-15);
        assert!(m.cdf(1e12) >= 1.0 - 1e-15);
        // Density integrates to 1: substitute t = K/u.
        let q = integrate(|u: f64| m.pdf(2.0 / u) * 2.0 / (u * u), 1e-300, 1.0, 0.0, 1e-13).unwrap();
        assert!((q.value - 1.0).abs() < 1e-10);
        assert!((m.cdf(m.quantile(0.3)) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn pmf_against_closed_form() {
        // For K = 2, s = 2: pmf(0) = 2·4·Γ(−2, 2), pmf(1) = 8 Γ(−1, 2) and
        // pmf(2) = 4 Γ(0, 2), from mpmath.
        let mp = MixedPoisson::from_mixing(MixingDistribution::from_parts(2.0, 2.0));
        let want = [0.060_266_759_595_631_786, 0.150_137_047_281_961_81, 0.195_602_042_832_244_48];
        for (k, w) in want.iter().enumerate() {
            let got = mp.pmf(k as u64).unwrap();
            assert!((got - w).abs() < 1e-12, "k={k}: {got} vs {w}");
        }
        assert!(mp.pmf(300).unwrap() > 0.0);
    }

    #[test]
    fn pmf_mean_matches_mixing_mean() {
        // E[MP] = E[rate] = sK/(s − 1) = 4 for K = 2, s = 2, but the tail is
        // heavy; check the truncated partial sum against the exact truncated
        // mean instead: Σ_{k≤k_max} k pmf(k) approaches 4 from below.
        let mp = MixedPoisson::from_mixing(MixingDistribution::from_parts(2.0, 2.0));
        let table = mp.table(400).unwrap();
        let partial: f64 = table.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        // tail contribution ≈ Σ_{k>400} 8 k^{-2} ≈ 8/400
        assert!((partial - (4.0 - 8.0 / 400.0)).abs() < 2e-3, "{partial}");
    }

    #[test]
    fn chung_lu_kernel_properties() {
        let p = params(2.0);
        assert!((chung_lu_kernel(0.0, 0.0, &p).unwrap() - 1.0).abs() < 1e-15);
        let k = |a, b| chung_lu_kernel(a, b, &p).unwrap();
        assert_eq!(k(1.0, 3.0), k(3.0, 1.0));
        let lhs = k(1.0, 2.0) * k(4.0, 5.0);
        let rhs = k(1.0, 5.0) * k(4.0, 2.0);
        assert!((lhs - rhs).abs() < 1e-12 * lhs);
        let a = crate::model::a_factor(1.0, 2.0, &p);
        assert!((k(1.0, 2.0) / p.n() - regime_constants(&p).unwrap().c_beta / a).abs() < 1e-18);
        assert!(chung_lu_kernel(0.0, 0.0, &params(1.0)).is_err());
    }

    #[test]
    fn angular_scale_separation_grows() {
        for &(fu, fv) in &[(0.0, 0.0), (0.25, 0.25), (0.5, 0.0), (0.25, 0.5)] {
            let small = ModelParams::new(1000, 1.0, 1.0, 2.0).unwrap();
            let big = ModelParams::new(1_000_000, 1.0, 1.0, 2.0).unwrap();
            let at = |p: &ModelParams| {
                let x = p.zeta * p.radius / (2.0 * p.alpha);
                angular_scale_ratio(fu * x, fv * x, p)
            };
            assert!(at(&big) > at(&small));
        }
    }

    #[test]
    fn predict_payload() {
        let pred = predict(&params(2.0), 30, 11, None).unwrap();
        assert_eq!(pred.growth, "constant");
        assert_eq!(pred.mp_pmf.as_ref().unwrap().len(), 31);
        assert_eq!(pred.expected_degree.len(), 11);
        assert!((pred.mean_degree_limit.unwrap() - 4.0).abs() < 1e-13);
        let pred = predict(&params(1.0), 30, 5, None).unwrap();
        assert_eq!(pred.growth, "logarithmic");
        assert!(pred.mp_pmf.is_none());
    }
}
