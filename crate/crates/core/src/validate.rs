//! Check battery comparing generated graphs with the theory for one regime.

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    conditional_degree_from, degree_report_from_degrees, scaling_experiment, type_law_discrepancy,
};
use crate::generator::{generate_degrees, Algorithm};
use crate::model::{ModelParams, Regime};
use crate::rng::SampleSeed;
use crate::sampler::{radial_cdf, sample_positions};
use crate::stats::ks_test;
use crate::theory::{
    angle_avg_probability_asymptotic, angle_avg_probability_numeric, c_beta_cold, c_beta_cold_quadrature, c_beta_hot,
    c_beta_hot_quadrature, cold_mean_degree, regime_constants, TheoryError,
};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ValidationError {
    #[error(
        "refusing to validate: every degree law assumes 0 < ζ/α < 2, but ζ/α = {0}; \
         the generator is defined for these parameters, the predictions are not"
    )]
    TheoryPrecondition(f64),
    #[error("refusing to validate the threshold (disc) model: the predictions are for finite β")]
    DiscModel,
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationConfig {
    pub params: ModelParams,
    pub seed: u64,
    pub stream: u64,
    pub algorithm: Algorithm,
    pub k_min: usize,
    pub k_cap: usize,
    pub n_grid: Vec<usize>,
    pub replicates: usize,
    pub omega: Option<f64>,
}

impl ValidationConfig {
    pub fn new(params: ModelParams) -> Self {
        Self {
            params,
            seed: 0,
            stream: 0,
            algorithm: Algorithm::Accelerated,
            k_min: 10,
            k_cap: 30,
            n_grid: (10..=16).step_by(2).map(|e| 1usize << e).collect(),
            replicates: 5,
            omega: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub value: Option<f64>,
    pub criterion: String,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub profile: Regime,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

fn outcome(name: &'static str, value: f64, passed: bool, criterion: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: passed && value.is_finite(),
        value: Some(value),
        criterion,
        detail: None,
    }
}

fn failure(name: &'static str, criterion: String, err: impl std::fmt::Display) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: false,
        value: None,
        criterion,
        detail: Some(err.to_string()),
    }
}

/// Worst relative deviation of numeric `p̂` from its leading-order form over
/// types `{0, ¼, ½} · ζR/(2α)` at disc radius `radius`.
pub fn angle_average_worst_ratio(params: &ModelParams, radius: f64) -> Result<f64, TheoryError> {
    let mut p = *params;
    p.radius = radius;
    let scale = p.zeta * radius / (2.0 * p.alpha);
    let fractions = [0.0, 0.25, 0.5];
    let mut worst: f64 = 0.0;
    for &fu in &fractions {
        for &fv in &fractions {
            let (tu, tv) = (fu * scale, fv * scale);
            let ratio = angle_avg_probability_numeric(tu, tv, &p)? / angle_avg_probability_asymptotic(tu, tv, &p)?;
            if (ratio - 1.0).abs() > (worst - 1.0).abs() || worst == 0.0 {
                worst = ratio;
            }
        }
    }
    Ok(worst)
}

/// Runs the battery for the regime of `config.params`.
///
/// Every profile checks the constants, the angle average, the radial and type
/// laws and the conditional degree at `t = 0`. The cold profile adds the mean
/// degree, the tail exponent and the distance to the mixed-Poisson law; the
/// critical profile adds logarithmic growth and the hot profile the growth
/// exponent.
pub fn validate(config: &ValidationConfig) -> Result<ValidationReport, ValidationError> {
    let params = &config.params;
    if params.disc {
        return Err(ValidationError::DiscModel);
    }
    if !params.theory_valid {
        return Err(ValidationError::TheoryPrecondition(params.zeta / params.alpha));
    }
    let constants = regime_constants(params)?;
    let regime = constants.regime;
    let mut checks = Vec::new();

    match regime {
        Regime::Cold => {
            let criterion = "|closed form − quadrature| ≤ 1e-8".to_string();
            checks.push(match c_beta_cold_quadrature(params.beta) {
                Ok(q) => {
                    let diff = (q - c_beta_cold(params.beta)).abs();
                    outcome("constants-oracle", diff, diff <= 1e-8, criterion)
                }
                Err(e) => failure("constants-oracle", criterion, e),
            });
        }
        Regime::Hot => {
            let criterion = "|closed form − quadrature| ≤ 1e-8".to_string();
            checks.push(match c_beta_hot_quadrature(params.beta) {
                Ok(q) => {
                    let diff = (q - c_beta_hot(params.beta)).abs();
                    outcome("constants-oracle", diff, diff <= 1e-8, criterion)
                }
                Err(e) => failure("constants-oracle", criterion, e),
            });
        }
        Regime::Critical => {}
    }

    let criterion = "worst p̂ / leading-order ratio within 5% at R = 90".to_string();
    checks.push(match angle_average_worst_ratio(params, 90.0) {
        Ok(r) => outcome("angle-average", r, (r - 1.0).abs() <= 0.05, criterion),
        Err(e) => failure("angle-average", criterion, e),
    });

    let positions = sample_positions(params, SampleSeed::new(config.seed, config.stream));
    let n = positions.len();

    let radii: Vec<f64> = positions.iter().map(|p| p.r).collect();
    let criterion = "KS p-value > 0.01".to_string();
    checks.push(match ks_test(&radii, |r| radial_cdf(r.clamp(0.0, params.radius), params).unwrap_or(1.0)) {
        Ok(t) => outcome("radial-ks", t.p_value, t.p_value > 0.01, criterion),
        Err(e) => failure("radial-ks", criterion, e),
    });

    let band = 3.0 / (n as f64).sqrt();
    let disc = type_law_discrepancy(&positions, params.alpha);
    checks.push(outcome(
        "type-law",
        disc,
        disc <= band,
        format!("sup |F̂(t) − (1 − e^(−αt))| ≤ 3/√N = {band:.4}"),
    ));

    let (degrees, _) = generate_degrees(config.algorithm, &positions, params, config.seed);

    let criterion = "empirical/predicted degree at t ≈ 0 in [0.85, 1.15]".to_string();
    checks.push(
        match conditional_degree_from(&positions, &degrees, params, 0.0, 0.05, config.omega) {
            Ok(c) => {
                let r = c.ratio();
                outcome("conditional-degree", r, (0.85..=1.15).contains(&r), criterion)
            }
            Err(e) => failure("conditional-degree", criterion, e),
        },
    );

    match regime {
        Regime::Cold => {
            let limit = cold_mean_degree(params)?;
            let mean = degrees.iter().sum::<usize>() as f64 / n as f64;
            checks.push(outcome(
                "mean-degree",
                mean,
                (mean / limit - 1.0).abs() <= 0.15,
                format!("within 15% of {limit:.4}"),
            ));
            let target = constants.power_exponent.expect("cold regime has an exponent");
            let tail_criterion = format!("MLE exponent within {target} ± 0.3");
            let tv_criterion = format!("TV distance over k ≤ {} at most 0.05", config.k_cap);
            match degree_report_from_degrees(&degrees, params, config.k_min, config.k_cap) {
                Ok(report) => {
                    checks.push(match (&report.tail_fit, &report.tail_error) {
                        (Some(fit), _) => outcome(
                            "tail-exponent",
                            fit.exponent,
                            (fit.exponent - target).abs() <= 0.3,
                            tail_criterion,
                        ),
                        (None, err) => failure("tail-exponent", tail_criterion, err.clone().unwrap_or_default()),
                    });
                    let tv = report.tv_distance_to_mp.unwrap_or(f64::NAN);
                    checks.push(outcome("tv-distance", tv, tv <= 0.05, tv_criterion));
                }
                Err(e) => {
                    checks.push(failure("tail-exponent", tail_criterion, &e));
                    checks.push(failure("tv-distance", tv_criterion, &e));
                }
            }
        }
        Regime::Critical => {
            let criterion = "mean degree linear in ln N: R² ≥ 0.98, slope > 0".to_string();
            checks.push(
                match scaling_experiment(params, &config.n_grid, config.replicates, config.seed, config.algorithm) {
                    Ok(s) => {
                        let fit = s.linear_in_log_n;
                        let mut o = outcome(
                            "log-growth",
                            fit.r_squared,
                            fit.r_squared >= 0.98 && fit.slope > 0.0,
                            criterion,
                        );
                        o.detail = Some(format!("slope {:.4}", fit.slope));
                        o
                    }
                    Err(e) => failure("log-growth", criterion, e),
                },
            );
        }
        Regime::Hot => {
            let target = 1.0 - params.beta;
            let criterion = format!("log-log slope within {target} ± 0.05");
            checks.push(
                match scaling_experiment(params, &config.n_grid, config.replicates, config.seed, config.algorithm) {
                    Ok(s) => {
                        let slope = s.log_log.slope;
                        outcome("polynomial-growth", slope, (slope - target).abs() <= 0.05, criterion)
                    }
                    Err(e) => failure("polynomial-growth", criterion, e),
                },
            );
        }
    }

    Ok(ValidationReport {
        profile: regime,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
