//! Acceptance battery. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits non-zero if any criterion outside `KNOWN_INFEASIBLE` fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use hrg::analysis::{
    degree_report_from_degrees, independence_check, scaling_experiment, type_law_discrepancy,
};
use hrg::model::{connection_probability, exact_distance};
use hrg::sampler::radial_cdf;
use hrg::stats::{binomial_band, equal_proportions_p_value, ks_test, median};
use hrg::theory::{
    c_beta_cold, c_beta_cold_quadrature, c_beta_hot, c_beta_hot_quadrature, cold_mean_degree, MixedPoisson,
};
use hrg::validate::angle_average_worst_ratio;
use hrg::{generate, generate_accelerated, generate_degrees, sample_positions, Algorithm, ModelParams, SampleSeed};

/// Criteria that cannot hold in `f64` for the stated parameters. They are run
/// and reported like the rest; a pass here is reported too so the list can be
/// pruned.
const KNOWN_INFEASIBLE: &[&str] = &["9a"];

struct Outcome {
    id: &'static str,
    passed: bool,
    summary: String,
}

fn cold(n: usize) -> ModelParams {
    ModelParams::new(n, 1.0, 1.0, 2.0).unwrap()
}

fn criterion_1() -> Vec<Outcome> {
    let mut worst: f64 = 0.0;
    for beta in [1.5, 2.0, 3.0] {
        let quad = PI * c_beta_cold_quadrature(beta).unwrap();
        let closed = (2.0 * PI / beta) / (PI / beta).sin();
        worst = worst.max((quad - closed).abs());
        debug_assert!((c_beta_cold(beta) * PI - closed).abs() < 1e-12);
    }
    for beta in [0.25, 0.5, 0.75] {
        let quad = c_beta_hot_quadrature(beta).unwrap();
        worst = worst.max((quad - c_beta_hot(beta)).abs());
    }
    vec![Outcome {
        id: "1",
        passed: worst <= 1e-8,
        summary: format!("constants oracle: max |quadrature − closed form| = {worst:.2e} (≤ 1e-8)"),
    }]
}

fn criterion_2() -> Vec<Outcome> {
    let mut out = Vec::new();
    for (label, beta) in [("cold", 2.0), ("critical", 1.0), ("hot", 0.5)] {
        let p = ModelParams::new(1000, 1.0, 1.0, beta).unwrap();
        let ratios: Vec<f64> = [30.0, 60.0, 90.0]
            .iter()
            .map(|&r| angle_average_worst_ratio(&p, r).unwrap())
            .collect();
        out.push(Outcome {
            id: "2",
            passed: (ratios[2] - 1.0).abs() <= 0.05,
            summary: format!(
                "angle average, {label}: worst p̂/closed form at R = 30, 60, 90: {:.4}, {:.4}, {:.4} (R = 90 within 5%)",
                ratios[0], ratios[1], ratios[2]
            ),
        });
    }
    out
}

fn criterion_3() -> Vec<Outcome> {
    let p = cold(1_000_000);
    let radii: Vec<f64> = sample_positions(&p, SampleSeed::new(3, 0)).iter().map(|v| v.r).collect();
    let ks = ks_test(&radii, |r| radial_cdf(r.clamp(0.0, p.radius), &p).unwrap()).unwrap();

    let q = cold(100_000);
    let disc = type_law_discrepancy(&sample_positions(&q, SampleSeed::new(3, 1)), q.alpha);
    let band = 3.0 / (q.n_vertices as f64).sqrt();
    vec![
        Outcome {
            id: "3",
            passed: ks.p_value > 0.01,
            summary: format!("radial law: KS over 1e6 radii D = {:.2e}, p = {:.3} (> 0.01)", ks.statistic, ks.p_value),
        },
        Outcome {
            id: "3",
            passed: disc <= band,
            summary: format!("type law: sup deviation {disc:.2e} at N = 1e5 (≤ {band:.2e})"),
        },
    ]
}

fn criterion_4() -> Vec<Outcome> {
    let p = cold(50);
    let pos = sample_positions(&p, SampleSeed::new(2024, 0));
    let n = pos.len();
    let trials: u64 = 100_000;
    let pairs = n * (n - 1) / 2;

    let count = |algorithm: Algorithm, offset: u64| -> Vec<u64> {
        (0..trials)
            .into_par_iter()
            .fold(
                || vec![0u64; n * n],
                |mut acc, s| {
                    let g = generate(algorithm, pos.clone(), &p, offset + s);
                    for (u, v) in g.edges() {
                        acc[u * n + v] += 1;
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; n * n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    let naive = count(Algorithm::Naive, 0);
    let accel = count(Algorithm::Accelerated, trials);

    // Family-wise 99.9% over every pair of both generators.
    let alpha = 0.001 / (2 * pairs) as f64;
    let mut outside = [0usize; 2];
    let mut min_equal_p: f64 = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            let prob = connection_probability(exact_distance(&pos[i], &pos[j], &p), &p);
            let (lo, hi) = binomial_band(trials, prob, alpha);
            for (slot, counts) in [&naive, &accel].into_iter().enumerate() {
                if !(lo..=hi).contains(&counts[i * n + j]) {
                    outside[slot] += 1;
                }
            }
            min_equal_p = min_equal_p.min(equal_proportions_p_value(naive[i * n + j], accel[i * n + j]));
        }
    }
    let threshold = 0.01 / pairs as f64;
    vec![
        Outcome {
            id: "4",
            passed: outside == [0, 0],
            summary: format!(
                "per-pair frequencies, N = 50, 1e5 seeds: pairs outside 99.9% band naive {}, accelerated {} (of {pairs})",
                outside[0], outside[1]
            ),
        },
        Outcome {
            id: "4",
            passed: min_equal_p >= threshold,
            summary: format!("naive vs accelerated proportions: min p = {min_equal_p:.2e} (≥ {threshold:.2e})"),
        },
    ]
}

fn cold_tv(n: usize, replicate: u64) -> f64 {
    let p = cold(n);
    let pos = sample_positions(&p, SampleSeed::new(55, replicate));
    let (degrees, _) = generate_degrees(Algorithm::Accelerated, &pos, &p, 550 + replicate);
    degree_report_from_degrees(&degrees, &p, 10, 30).unwrap().tv_distance_to_mp.unwrap()
}

fn criterion_5() -> Vec<Outcome> {
    let p = cold(100_000);
    let pos = sample_positions(&p, SampleSeed::new(5, 0));
    let (degrees, _) = generate_degrees(Algorithm::Accelerated, &pos, &p, 5);
    let report = degree_report_from_degrees(&degrees, &p, 10, 30).unwrap();
    let limit = cold_mean_degree(&p).unwrap();
    let exponent = report.tail_fit.as_ref().map_or(f64::NAN, |f| f.exponent);
    let tv = report.tv_distance_to_mp.unwrap();

    let medians: Vec<f64> = [1_000, 10_000, 100_000]
        .iter()
        .map(|&n| median(&(0..10).map(|r| cold_tv(n, r)).collect::<Vec<_>>()))
        .collect();
    vec![
        Outcome {
            id: "5a",
            passed: (report.mean_degree / limit - 1.0).abs() <= 0.15,
            summary: format!("cold mean degree {:.4} (within 15% of {limit})", report.mean_degree),
        },
        Outcome {
            id: "5b",
            passed: (exponent - 3.0).abs() <= 0.3,
            summary: format!("cold tail exponent MLE {exponent:.4} at k_min = 10 (3 ± 0.3)"),
        },
        Outcome {
            id: "5c",
            passed: tv <= 0.05,
            summary: format!("TV to mixed Poisson over k ≤ 30: {tv:.4} (≤ 0.05)"),
        },
        Outcome {
            id: "5d",
            passed: medians.windows(2).all(|w| w[1] < w[0]),
            summary: format!(
                "median TV at N = 1e3, 1e4, 1e5: {:.4}, {:.4}, {:.4} (decreasing)",
                medians[0], medians[1], medians[2]
            ),
        },
    ]
}

fn grid() -> Vec<usize> {
    (10..=16).map(|e| 1usize << e).collect()
}

fn criterion_6() -> Vec<Outcome> {
    let p = ModelParams::new(1024, 1.0, 1.0, 1.0).unwrap();
    let s = scaling_experiment(&p, &grid(), 5, 6, Algorithm::Accelerated).unwrap();
    let fit = s.linear_in_log_n;
    vec![Outcome {
        id: "6",
        passed: fit.r_squared >= 0.98 && fit.slope > 0.0,
        summary: format!(
            "critical mean degree vs ln N: slope {:.4}, R² = {:.5} (≥ 0.98, slope > 0)",
            fit.slope, fit.r_squared
        ),
    }]
}

fn criterion_7() -> Vec<Outcome> {
    let p = ModelParams::new(1024, 1.0, 1.0, 0.5).unwrap();
    let s = scaling_experiment(&p, &grid(), 5, 7, Algorithm::Accelerated).unwrap();
    let slope = s.log_log.slope;
    vec![Outcome {
        id: "7",
        passed: (slope - 0.5).abs() <= 0.05,
        summary: format!("hot log-log slope {slope:.4} (0.5 ± 0.05)"),
    }]
}

fn criterion_8() -> Vec<Outcome> {
    let r = independence_check(&cold(10_000), 2, 500, 8, Algorithm::Accelerated).unwrap();
    vec![Outcome {
        id: "8",
        passed: r.max_abs_correlation <= 0.1,
        summary: format!(
            "degree independence, m = 2, 500 graphs at N = 1e4: max |ρ| = {:.4} (≤ 0.1)",
            r.max_abs_correlation
        ),
    }]
}

fn criterion_9() -> Vec<Outcome> {
    let mp = MixedPoisson::new(&cold(100_000)).unwrap();
    let total: f64 = mp.table(500).unwrap().iter().sum();
    let ratio = mp.tail_ratio(200).unwrap();
    vec![
        Outcome {
            id: "9a",
            passed: (total - 1.0).abs() <= 1e-8,
            summary: format!(
                "mixed-Poisson mass over k ≤ 500: 1 − Σ = {:.3e} (|·| ≤ 1e-8; the k > 500 tail alone is of order 500^-2)",
                1.0 - total
            ),
        },
        Outcome {
            id: "9b",
            passed: (ratio - 1.0).abs() <= 0.05,
            summary: format!("scaled pmf at k = 200 over its limit: {ratio:.4} (within 5%)"),
        },
    ]
}

fn criterion_10() -> Vec<Outcome> {
    let p = cold(100_000);
    let start = Instant::now();
    let pos = sample_positions(&p, SampleSeed::new(10, 0));
    let g = generate_accelerated(pos, &p, 10);
    let secs = start.elapsed().as_secs_f64();
    let predicted = p.n() * cold_mean_degree(&p).unwrap() / 2.0;
    let m = g.edge_count() as f64;
    vec![Outcome {
        id: "10",
        passed: secs < 10.0 && (m / predicted - 1.0).abs() <= 0.1,
        summary: format!(
            "accelerated N = 1e5: {secs:.2} s on {} thread(s) (< 10 s), {m} edges vs predicted {predicted:.0} (within 10%)",
            rayon::current_num_threads()
        ),
    }]
}

fn main() -> ExitCode {
    let criteria: [fn() -> Vec<Outcome>; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut unexpected = 0;
    for criterion in criteria {
        for o in criterion() {
            let known = KNOWN_INFEASIBLE.contains(&o.id);
            let tag = if o.passed { "PASS" } else { "FAIL" };
            let note = match (o.passed, known) {
                (false, true) => " [known infeasible]",
                (true, true) => " [listed as infeasible but passed]",
                _ => "",
            };
            println!("[{tag}] {:>3}  {}{note}", o.id, o.summary);
            if !o.passed && !known {
                unexpected += 1;
            }
        }
    }
    if unexpected == 0 {
        println!("acceptance: all criteria met apart from the known-infeasible list");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
