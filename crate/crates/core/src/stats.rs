//! Goodness-of-fit tests and small regression helpers used by the analysis
//! and validation code.

use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF, StudentsT};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Survival function of the Kolmogorov distribution, `P(K > λ)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.3 {
        // The alternating series converges slowly here; the Jacobi-transformed
        // form converges fast.
        let x = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / lambda
            * (1..=20)
                .map(|k| (-((2 * k - 1) as f64).powi(2) * x).exp())
                .sum::<f64>();
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
///
/// The p-value uses the asymptotic distribution with Stephens' finite-sample
/// correction `λ = (√n + 0.12 + 0.11/√n) D`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<TestResult, StatsError> {
    let n = samples.len();
    if n == 0 {
        return Err(StatsError::TooFewObservations { needed: 1, got: 0 });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = n as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / nf).max((i + 1) as f64 / nf - f)
        })
        .fold(0.0, f64::max);
    let sqrt_n = nf.sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    Ok(TestResult {
        statistic: d,
        p_value: kolmogorov_sf(lambda),
    })
}

/// Pearson chi-square test of observed counts against expected counts.
pub fn chi_square_test(observed: &[u64], expected: &[f64]) -> Result<TestResult, StatsError> {
    if observed.len() != expected.len() {
        return Err(StatsError::LengthMismatch(observed.len(), expected.len()));
    }
    if observed.len() < 2 {
        return Err(StatsError::TooFewObservations {
            needed: 2,
            got: observed.len(),
        });
    }
    if expected.iter().any(|&e| e.is_nan() || e <= 0.0) {
        return Err(StatsError::InvalidArgument("expected counts must be positive"));
    }
    let statistic: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    let dist = ChiSquared::new((observed.len() - 1) as f64).expect("positive degrees of freedom");
    Ok(TestResult {
        statistic,
        p_value: dist.sf(statistic),
    })
}

/// Equal-tailed acceptance region `[lo, hi]` for `Bin(n, p)` with total
/// rejection probability at most `alpha`.
pub fn binomial_band(n: u64, p: f64, alpha: f64) -> (u64, u64) {
    if p <= 0.0 {
        return (0, 0);
    }
    if p >= 1.0 {
        return (n, n);
    }
    let dist = Binomial::new(p, n).expect("valid binomial");
    let half = 0.5 * alpha;
    // smallest lo with P(X < lo) ≤ α/2 < P(X ≤ lo)
    let lo = first_where(0, n, |k| dist.cdf(k) > half);
    // smallest hi with P(X > hi) ≤ α/2
    let hi = first_where(0, n, |k| dist.sf(k) <= half);
    (lo, hi)
}

fn first_where(mut lo: u64, mut hi: u64, pred: impl Fn(u64) -> bool) -> u64 {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Two-sided exact test that two Binomial samples with the same number of
/// trials share a success probability.
///
/// Conditional on the total `x1 + x2 = s`, `x1 ~ Bin(s, 1/2)` under the null
/// hypothesis.
pub fn equal_proportions_p_value(x1: u64, x2: u64) -> f64 {
    let s = x1 + x2;
    if s == 0 {
        return 1.0;
    }
    let dist = Binomial::new(0.5, s).expect("valid binomial");
    let lower = dist.cdf(x1);
    let upper = if x1 == 0 { 1.0 } else { dist.sf(x1 - 1) };
    (2.0 * lower.min(upper)).min(1.0)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample Pearson correlation; `0` when either variable is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewObservations {
            needed: 2,
            got: x.len(),
        });
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_std_error: f64,
}

/// Ordinary least squares `y = intercept + slope·x`.
pub fn linear_regression(x: &[f64], y: &[f64]) -> Result<LinearFit, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::TooFewObservations { needed: 3, got: n });
    }
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(StatsError::InvalidArgument("regressor is constant"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        slope_std_error: (sse / (n - 2) as f64 / sxx).sqrt(),
    })
}

/// Half-width of the two-sided Student-t confidence interval for the mean.
pub fn mean_confidence_half_width(xs: &[f64], level: f64) -> Result<f64, StatsError> {
    let n = xs.len();
    if n < 2 {
        return Err(StatsError::TooFewObservations { needed: 2, got: n });
    }
    if !(0.0..1.0).contains(&level) {
        return Err(StatsError::InvalidArgument("confidence level must be in [0, 1)"));
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.5 + 0.5 * level);
    Ok(t * (var / n as f64).sqrt())
}

/// Median of a non-empty slice (mean of the middle pair for even length).
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn kolmogorov_distribution_reference_points() {
        // Standard table values of the limiting distribution.
        assert!((kolmogorov_sf(1.358_098_8) - 0.05).abs() < 1e-6);
        assert!((kolmogorov_sf(1.627_623_9) - 0.01).abs() < 1e-6);
        assert!((kolmogorov_sf(1.0) - 0.269_999_9).abs() < 1e-6);
        // The two series agree where they overlap.
        let lam: f64 = 0.3;
        let x = std::f64::consts::PI.powi(2) / (8.0 * lam * lam);
        let jacobi = 1.0
            - (2.0 * std::f64::consts::PI).sqrt() / lam
                * (1..=20).map(|k| (-((2 * k - 1) as f64).powi(2) * x).exp()).sum::<f64>();
        assert!((kolmogorov_sf(lam) - jacobi).abs() < 1e-12);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
        assert!(kolmogorov_sf(5.0) < 1e-20);
    }

    #[test]
    fn ks_accepts_true_law_and_rejects_wrong_one() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let ok = ks_test(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(ok.p_value > 0.01, "{ok:?}");
        let bad = ks_test(&xs, |x| x.clamp(0.0, 1.0).powf(1.1)).unwrap();
        assert!(bad.p_value < 1e-6, "{bad:?}");
    }

    #[test]
    fn chi_square_matches_closed_form() {
        // Two cells: statistic 4 on one degree of freedom, p = erfc(√2).
        let r = chi_square_test(&[60, 40], &[50.0, 50.0]).unwrap();
        assert!((r.statistic - 4.0).abs() < 1e-12);
        assert!((r.p_value - 0.045_500_263_896_358_4).abs() < 1e-9);
        assert!(chi_square_test(&[1], &[1.0]).is_err());
    }

    #[test]
    fn binomial_band_covers_expected_mass() {
        let (n, p, alpha) = (1000, 0.3, 0.01);
        let (lo, hi) = binomial_band(n, p, alpha);
        let d = Binomial::new(p, n).unwrap();
        let outside = d.cdf(lo - 1) + d.sf(hi);
        assert!(outside <= alpha);
        // Tight: widening either end by one would be unnecessary.
        assert!(d.cdf(lo) > alpha / 2.0 && d.sf(hi - 1) > alpha / 2.0);
        assert_eq!(binomial_band(10, 0.0, 0.01), (0, 0));
        assert_eq!(binomial_band(10, 1.0, 0.01), (10, 10));
    }

    #[test]
    fn equal_proportions() {
        assert_eq!(equal_proportions_p_value(0, 0), 1.0);
        assert!((equal_proportions_p_value(50, 50) - 1.0).abs() < 1e-12);
        // P(X ≤ 0) for Bin(10, 1/2), doubled
        assert!((equal_proportions_p_value(0, 10) - 2.0 / 1024.0).abs() < 1e-15);
        assert!(equal_proportions_p_value(520, 480) > 0.2);
        assert!(equal_proportions_p_value(600, 400) < 1e-8);
    }

    #[test]
    fn pearson_edges() {
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap(), 1.0);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&[1.0, 1.0], &[0.0, 5.0]).unwrap(), 0.0);
        assert!(pearson(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn regression_recovers_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 0.5 * v).collect();
        let fit = linear_regression(&x, &y).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-14 && (fit.intercept - 2.0).abs() < 1e-13);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);
    }

    #[test]
    fn t_interval_against_table() {
        // t_{0.975, 4} = 2.776445
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let hw = mean_confidence_half_width(&xs, 0.95).unwrap();
        let se = (2.5f64 / 5.0).sqrt();
        assert!((hw - 2.776_445_105 * se).abs() < 1e-6);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
