//! Empirical degree statistics and comparisons with the theory module.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::generator::{generate_degrees, Algorithm};
use crate::graph::{degree_sequence, Graph};
use crate::model::{ModelParams, Regime, VertexPosition};
use crate::rng::{hash_words, SampleSeed};
use crate::sampler::sample_positions;
use crate::special::{hurwitz_zeta, ZetaDomainError};
use crate::stats::{self, LinearFit, StatsError};
use crate::theory::{expected_degree_with, regime_constants, MixedPoisson, TheoryError};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("insufficient tail: {count} vertices with degree ≥ {k_min}, need at least 100")]
    InsufficientTail { count: usize, k_min: usize },
    #[error("empty window: no vertex has type within {window} of {t_star}")]
    EmptyWindow { t_star: f64, window: f64 },
    #[error("insufficient samples: need at least 2, got {0}")]
    InsufficientSamples(usize),
    #[error("size grid must be strictly ascending with at least 4 points")]
    BadGrid,
    #[error("need at least 2 designated vertices and no more than N")]
    BadVertexCount,
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Zeta(#[from] ZetaDomainError),
}

/// Discrete power law `P(k) = k^{−γ}/ζ(γ, k_min)` fitted to the tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub std_error: f64,
    pub k_min: usize,
    pub tail_count: usize,
}

/// Maximum-likelihood exponent of a discrete power law for the values
/// `≥ k_min`, with the standard error from the Fisher information.
pub fn fit_discrete_power_law(values: &[usize], k_min: usize) -> Result<PowerLawFit, AnalysisError> {
    let k_min = k_min.max(1);
    let tail: Vec<f64> = values.iter().filter(|&&k| k >= k_min).map(|&k| k as f64).collect();
    let n = tail.len();
    if n < 100 {
        return Err(AnalysisError::InsufficientTail { count: n, k_min });
    }
    let mean_log = tail.iter().map(|k| k.ln()).sum::<f64>() / n as f64;
    let q = k_min as f64;
    let log_z = |g: f64| hurwitz_zeta(g, q).map(f64::ln);
    // Per-observation negative log-likelihood; convex in γ.
    let nll = |g: f64| log_z(g).map(|lz| lz + g * mean_log);

    // Golden-section search on a bracket that contains every sensible exponent.
    let (mut a, mut b) = (1.0 + 1e-6, 50.0);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (nll(c)?, nll(d)?);
    while b - a > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = nll(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = nll(d)?;
        }
    }
    let exponent = 0.5 * (a + b);
    // Fisher information per observation is the second derivative of ln ζ(γ, k_min).
    let h = 1e-3 * exponent;
    let curvature = (log_z(exponent + h)? - 2.0 * log_z(exponent)? + log_z((exponent - h).max(1.0 + 1e-9))?) / (h * h);
    Ok(PowerLawFit {
        exponent,
        std_error: 1.0 / (n as f64 * curvature).sqrt(),
        k_min,
        tail_count: n,
    })
}

/// `½ Σ_{k≤k_cap} |f_k − p_k| + ½ |Σ_{k>k_cap} f_k − Σ_{k>k_cap} p_k|` for an
/// empirical frequency vector `f` and a pmf table `p` covering `0..=k_cap`.
pub fn tv_distance(histogram: &BTreeMap<usize, usize>, n: usize, pmf: &[f64]) -> f64 {
    let nf = n as f64;
    let mut body = 0.0;
    let mut emp_head = 0.0;
    for (k, p) in pmf.iter().enumerate() {
        let f = histogram.get(&k).copied().unwrap_or(0) as f64 / nf;
        emp_head += f;
        body += (f - p).abs();
    }
    let model_tail = (1.0 - pmf.iter().sum::<f64>()).max(0.0);
    let emp_tail = (1.0 - emp_head).max(0.0);
    (0.5 * body + 0.5 * (emp_tail - model_tail).abs()).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    pub n: usize,
    /// `k → N_k`, the number of vertices of degree `k` (zero counts omitted).
    pub histogram: BTreeMap<usize, usize>,
    pub mean_degree: f64,
    pub k_min: usize,
    pub k_cap: usize,
    pub tail_fit: Option<PowerLawFit>,
    /// Why `tail_fit` is missing, if it is.
    pub tail_error: Option<String>,
    /// Cold regime only.
    pub tv_distance_to_mp: Option<f64>,
    /// `P(MP = k)` for `k ≤ k_cap`, cold regime only.
    pub mp_pmf: Option<Vec<f64>>,
}

pub fn histogram(degrees: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &d in degrees {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

pub fn degree_report(g: &Graph, k_min: usize, k_cap: usize) -> Result<DegreeReport, AnalysisError> {
    degree_report_from_degrees(&degree_sequence(g), g.params(), k_min, k_cap)
}

/// As [`degree_report`], from a degree sequence.
///
/// The mixed-Poisson comparison is attempted only for Fermi-Dirac parameters
/// in the cold regime; theory failures there are returned as errors.
pub fn degree_report_from_degrees(
    degrees: &[usize],
    params: &ModelParams,
    k_min: usize,
    k_cap: usize,
) -> Result<DegreeReport, AnalysisError> {
    let n = degrees.len();
    let hist = histogram(degrees);
    let mean_degree = if n == 0 {
        0.0
    } else {
        degrees.iter().sum::<usize>() as f64 / n as f64
    };
    let (tail_fit, tail_error) = match fit_discrete_power_law(degrees, k_min) {
        Ok(fit) => (Some(fit), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (tv, pmf) = if !params.disc && params.regime() == Regime::Cold && params.theory_valid && n > 0 {
        let table = MixedPoisson::new(params)?.table(k_cap as u64)?;
        (Some(tv_distance(&hist, n, &table)), Some(table))
    } else {
        (None, None)
    };
    Ok(DegreeReport {
        n,
        histogram: hist,
        mean_degree,
        k_min,
        k_cap,
        tail_fit,
        tail_error,
        tv_distance_to_mp: tv,
        mp_pmf: pmf,
    })
}

/// Seeds for replicate `r` at grid point `i`, derived from the run seed.
fn replicate_seeds(seed: u64, i: usize, r: usize) -> (SampleSeed, u64) {
    let positions = SampleSeed::new(seed, hash_words(&[i as u64, r as u64]));
    (positions, hash_words(&[seed, 0x6564_6765, i as u64, r as u64]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub mean_degree: f64,
    /// Half-width of the 95% Student-t interval over replicates.
    pub ci_half_width: Option<f64>,
    pub replicate_means: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Mean degree against `ln N`.
    pub linear_in_log_n: LinearFit,
    /// `ln` mean degree against `ln N`.
    pub log_log: LinearFit,
}

/// Mean degree over `replicates` fresh graphs at each size in `n_grid`.
pub fn scaling_experiment(
    base: &ModelParams,
    n_grid: &[usize],
    replicates: usize,
    seed: u64,
    algorithm: Algorithm,
) -> Result<ScalingReport, AnalysisError> {
    if n_grid.len() < 4 || n_grid.windows(2).any(|w| w[0] >= w[1]) || n_grid[0] < 2 {
        return Err(AnalysisError::BadGrid);
    }
    let replicates = replicates.max(1);
    let mut rows = Vec::with_capacity(n_grid.len());
    for (i, &n) in n_grid.iter().enumerate() {
        let params = base.with_n(n).expect("grid sizes are positive");
        let replicate_means: Vec<f64> = (0..replicates)
            .map(|r| {
                let (pos_seed, edge_seed) = replicate_seeds(seed, i, r);
                let positions = sample_positions(&params, pos_seed);
                let (degrees, _) = generate_degrees(algorithm, &positions, &params, edge_seed);
                degrees.iter().sum::<usize>() as f64 / n as f64
            })
            .collect();
        rows.push(ScalingRow {
            n,
            mean_degree: stats::mean(&replicate_means),
            ci_half_width: stats::mean_confidence_half_width(&replicate_means, 0.95).ok(),
            replicate_means,
        });
    }
    let ln_n: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let means: Vec<f64> = rows.iter().map(|r| r.mean_degree).collect();
    let ln_means: Vec<f64> = means.iter().map(|m| m.max(f64::MIN_POSITIVE).ln()).collect();
    Ok(ScalingReport {
        linear_in_log_n: stats::linear_regression(&ln_n, &means)?,
        log_log: stats::linear_regression(&ln_n, &ln_means)?,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalDegree {
    pub t_star: f64,
    pub window: f64,
    pub vertices: usize,
    pub empirical_mean: f64,
    pub predicted: f64,
    /// `t_star` lies beyond the cutoff `x0`.
    pub extrapolation: bool,
}

impl ConditionalDegree {
    pub fn ratio(&self) -> f64 {
        self.empirical_mean / self.predicted
    }
}

/// Mean degree of the vertices with `|t − t_star| ≤ window` against the
/// predicted conditional expected degree at `t_star`.
pub fn conditional_degree_check(
    g: &Graph,
    t_star: f64,
    window: f64,
    omega: Option<f64>,
) -> Result<ConditionalDegree, AnalysisError> {
    conditional_degree_from(g.positions(), &degree_sequence(g), g.params(), t_star, window, omega)
}

pub fn conditional_degree_from(
    positions: &[VertexPosition],
    degrees: &[usize],
    params: &ModelParams,
    t_star: f64,
    window: f64,
    omega: Option<f64>,
) -> Result<ConditionalDegree, AnalysisError> {
    let selected: Vec<usize> = positions
        .iter()
        .zip(degrees)
        .filter(|(p, _)| (p.t - t_star).abs() <= window)
        .map(|(_, &d)| d)
        .collect();
    if selected.is_empty() {
        return Err(AnalysisError::EmptyWindow { t_star, window });
    }
    let constants = regime_constants(params)?;
    let pred = expected_degree_with(t_star, params, &constants, omega)?;
    Ok(ConditionalDegree {
        t_star,
        window,
        vertices: selected.len(),
        empirical_mean: selected.iter().sum::<usize>() as f64 / selected.len() as f64,
        predicted: pred.expected_degree,
        extrapolation: pred.extrapolation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub m: usize,
    pub samples: usize,
    /// Pairwise Pearson correlations, `m × m` with unit diagonal.
    pub correlations: Vec<Vec<f64>>,
    pub max_abs_correlation: f64,
}

/// Pairwise correlations of the degrees of vertices `0..m` over `samples`
/// independent graphs, each with freshly sampled positions.
pub fn independence_check(
    params: &ModelParams,
    m: usize,
    samples: usize,
    seed: u64,
    algorithm: Algorithm,
) -> Result<IndependenceReport, AnalysisError> {
    if samples < 2 {
        return Err(AnalysisError::InsufficientSamples(samples));
    }
    if m < 2 || m > params.n_vertices {
        return Err(AnalysisError::BadVertexCount);
    }
    let rows: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let (pos_seed, edge_seed) = replicate_seeds(seed, 0, s);
            let positions = sample_positions(params, pos_seed);
            let (degrees, _) = generate_degrees(algorithm, &positions, params, edge_seed);
            degrees[..m].iter().map(|&d| d as f64).collect()
        })
        .collect();
    let columns: Vec<Vec<f64>> = (0..m).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    correlation_summary(&columns, samples)
}

/// Correlation matrix of equally long columns.
pub fn correlation_summary(columns: &[Vec<f64>], samples: usize) -> Result<IndependenceReport, AnalysisError> {
    let m = columns.len();
    let mut correlations = vec![vec![1.0; m]; m];
    let mut max_abs: f64 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            let r = stats::pearson(&columns[i], &columns[j])?;
            correlations[i][j] = r;
            correlations[j][i] = r;
            max_abs = max_abs.max(r.abs());
        }
    }
    Ok(IndependenceReport {
        m,
        samples,
        correlations,
        max_abs_correlation: max_abs,
    })
}

/// Global transitivity `3·triangles / connected triples`; 0 without triples.
pub fn clustering_coefficient(g: &Graph) -> f64 {
    let n = g.vertex_count();
    let triples: f64 = (0..n)
        .map(|u| {
            let d = g.degree(u) as f64;
            0.5 * d * (d - 1.0)
        })
        .sum();
    if triples == 0.0 {
        return 0.0;
    }
    // Each triangle is found once from each of its three edges.
    let closed: usize = (0..n)
        .into_par_iter()
        .map(|u| {
            let nu = g.neighbors(u);
            nu.iter()
                .filter(|&&v| (v as usize) > u)
                .map(|&v| sorted_intersection_count(nu, g.neighbors(v as usize)))
                .sum::<usize>()
        })
        .sum();
    closed as f64 / triples
}

fn sorted_intersection_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// `sup_x |F̂(x) − (1 − e^{−αx})|` for the vertex types; the limiting type
/// law is exponential with rate `α`.
pub fn type_law_discrepancy(positions: &[VertexPosition], alpha: f64) -> f64 {
    let mut types: Vec<f64> = positions.iter().map(|p| p.t).collect();
    types.sort_by(f64::total_cmp);
    let n = types.len() as f64;
    types
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let f = -(-alpha * t).exp_m1();
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
