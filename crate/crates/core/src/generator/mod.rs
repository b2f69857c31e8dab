//! Edge generation for the binomial model.
//!
//! Two samplers share one driver. Each emits, for a vertex `u`, a list of
//! "forward" partners such that every unordered pair is offered exactly once
//! across all vertices. The driver runs vertices in parallel and either builds
//! a [`Graph`] or only accumulates degrees.

mod accelerated;
mod chung_lu;
mod naive;

pub use accelerated::AcceleratedSampler;
pub use chung_lu::generate_chung_lu;
pub use naive::{naive_pair_present, NaiveSampler};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{GeneratorKind, Graph, Provenance};
use crate::model::{ModelParams, VertexPosition};

/// Work counters from one generation run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenerationStats {
    /// Pairs whose exact probability was evaluated.
    pub candidates: u64,
    pub edges: u64,
}

pub(crate) trait ForwardSampler: Sync {
    fn vertex_count(&self) -> usize;

    /// Appends the forward partners of `u` to `out`; returns the number of
    /// candidate pairs examined.
    fn emit_forward(&self, u: usize, out: &mut Vec<u32>) -> u64;
}

fn collect_forward<S: ForwardSampler>(sampler: &S) -> (Vec<Vec<u32>>, GenerationStats) {
    let rows: Vec<(Vec<u32>, u64)> = (0..sampler.vertex_count())
        .into_par_iter()
        .map(|u| {
            let mut out = Vec::new();
            let candidates = sampler.emit_forward(u, &mut out);
            (out, candidates)
        })
        .collect();
    let mut stats = GenerationStats::default();
    let forward = rows
        .into_iter()
        .map(|(row, c)| {
            stats.candidates += c;
            stats.edges += row.len() as u64;
            row
        })
        .collect();
    (forward, stats)
}

fn accumulate_degrees<S: ForwardSampler>(sampler: &S) -> (Vec<usize>, GenerationStats) {
    let n = sampler.vertex_count();
    let (degrees, stats) = (0..n)
        .into_par_iter()
        .fold(
            || (vec![0usize; n], GenerationStats::default(), Vec::new()),
            |(mut deg, mut stats, mut buf), u| {
                buf.clear();
                stats.candidates += sampler.emit_forward(u, &mut buf);
                stats.edges += buf.len() as u64;
                deg[u] += buf.len();
                for &v in &buf {
                    deg[v as usize] += 1;
                }
                (deg, stats, buf)
            },
        )
        .map(|(deg, stats, _)| (deg, stats))
        .reduce(
            || (vec![0usize; n], GenerationStats::default()),
            |(mut a, sa), (b, sb)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                (
                    a,
                    GenerationStats {
                        candidates: sa.candidates + sb.candidates,
                        edges: sa.edges + sb.edges,
                    },
                )
            },
        );
    (degrees, stats)
}

fn provenance(params: &ModelParams, seed: u64, kind: GeneratorKind) -> Provenance {
    Provenance {
        seed,
        kind: if params.disc { GeneratorKind::Disc } else { kind },
    }
}

/// Reference generator: every pair `{i, j}` is an edge iff its keyed uniform
/// falls below `p_{ij}` (or, in disc mode, iff `d(i, j) < R`).
pub fn generate_naive(positions: Vec<VertexPosition>, params: &ModelParams, seed: u64) -> Graph {
    generate_naive_with_stats(positions, params, seed).0
}

pub fn generate_naive_with_stats(
    positions: Vec<VertexPosition>,
    params: &ModelParams,
    seed: u64,
) -> (Graph, GenerationStats) {
    let (forward, stats) = collect_forward(&NaiveSampler::new(&positions, params, seed));
    let prov = provenance(params, seed, GeneratorKind::Naive);
    (Graph::from_forward_lists(*params, positions, forward, prov), stats)
}

/// Envelope-rejection generator with the same per-pair edge law as
/// [`generate_naive`] (but a different sample for a given seed).
pub fn generate_accelerated(positions: Vec<VertexPosition>, params: &ModelParams, seed: u64) -> Graph {
    generate_accelerated_with_stats(positions, params, seed).0
}

pub fn generate_accelerated_with_stats(
    positions: Vec<VertexPosition>,
    params: &ModelParams,
    seed: u64,
) -> (Graph, GenerationStats) {
    match AcceleratedSampler::new(&positions, params, seed) {
        Ok(sampler) => {
            let (forward, stats) = collect_forward(&sampler);
            if !sampler.envelope_failed() {
                let prov = provenance(params, seed, GeneratorKind::Accelerated);
                return (Graph::from_forward_lists(*params, positions, forward, prov), stats);
            }
            log::warn!("envelope produced a non-finite bound; falling back to the naive generator");
        }
        Err(reason) => {
            log::warn!("cannot build envelope ({reason}); falling back to the naive generator");
        }
    }
    generate_naive_with_stats(positions, params, seed)
}

/// Edge-sampling algorithm for the hyperbolic model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Naive,
    #[default]
    Accelerated,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Naive => "naive",
            Algorithm::Accelerated => "accelerated",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Algorithm::Naive),
            "accelerated" => Ok(Algorithm::Accelerated),
            other => Err(format!("unknown generator `{other}` (expected naive or accelerated)")),
        }
    }
}

/// Generates with the requested algorithm.
pub fn generate(
    algorithm: Algorithm,
    positions: Vec<VertexPosition>,
    params: &ModelParams,
    seed: u64,
) -> Graph {
    match algorithm {
        Algorithm::Naive => generate_naive(positions, params, seed),
        Algorithm::Accelerated => generate_accelerated(positions, params, seed),
    }
}

/// Degree sequence of a fresh graph without materialising its edges. Same
/// sample as [`generate`] with the same arguments.
pub fn generate_degrees(
    algorithm: Algorithm,
    positions: &[VertexPosition],
    params: &ModelParams,
    seed: u64,
) -> (Vec<usize>, GenerationStats) {
    if algorithm == Algorithm::Accelerated {
        match AcceleratedSampler::new(positions, params, seed) {
            Ok(sampler) => {
                let out = accumulate_degrees(&sampler);
                if !sampler.envelope_failed() {
                    return out;
                }
                log::warn!("envelope produced a non-finite bound; falling back to the naive generator");
            }
            Err(reason) => log::warn!("cannot build envelope ({reason}); falling back to the naive generator"),
        }
    }
    accumulate_degrees(&NaiveSampler::new(positions, params, seed))
}
