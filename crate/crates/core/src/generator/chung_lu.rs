//! Rank-one comparison graph with the same expected degrees as the cold
//! regime of the hyperbolic model.

use rayon::prelude::*;

use crate::graph::{GeneratorKind, Graph, Provenance};
use crate::model::{ModelParams, VertexPosition};
use crate::rng::{CounterRng, TAG_CHUNG_LU};
use crate::theory::{cold_constants, TheoryError};

/// Independent edges with `p_{uv} = min(1, w_u w_v / N)`, `w_u = √C_β e^{ζt_u/2}`,
/// i.e. `κ(t_u, t_v)/N` for the kernel of [`crate::theory::chung_lu_kernel`]
/// (weights as in [`crate::theory::chung_lu_weight`]).
///
/// Uses the Miller–Hagberg skipping scheme over vertices sorted by weight, so
/// the work is linear in `N` plus the number of edges.
pub fn generate_chung_lu(
    positions: Vec<VertexPosition>,
    params: &ModelParams,
    seed: u64,
) -> Result<Graph, TheoryError> {
    let n = positions.len();
    let root_c = cold_constants(params)?.c_beta.sqrt();
    let weights: Vec<f64> = positions
        .iter()
        .map(|v| root_c * (0.5 * params.zeta * v.t).exp())
        .collect();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| weights[b as usize].total_cmp(&weights[a as usize]).then(a.cmp(&b)));
    let scale = params.n();

    let rows: Vec<(u32, Vec<u32>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let u = order[i];
            let wu = weights[u as usize];
            let mut rng = CounterRng::new(&[TAG_CHUNG_LU, seed, u as u64]);
            let mut out = Vec::new();
            let mut j = i + 1;
            let mut p = if j < n {
                (wu * weights[order[j] as usize] / scale).min(1.0)
            } else {
                0.0
            };
            while j < n && p > 0.0 {
                if p < 1.0 {
                    let jump = (rng.next_f64_open0().ln() / (-p).ln_1p()).floor();
                    if jump >= (n - j) as f64 {
                        break;
                    }
                    j += jump as usize;
                }
                let v = order[j];
                let q = (wu * weights[v as usize] / scale).min(1.0);
                if rng.next_f64() * p < q {
                    out.push(v);
                }
                p = q;
                j += 1;
            }
            (u, out)
        })
        .collect();

    let mut forward = vec![Vec::new(); n];
    for (u, row) in rows {
        forward[u as usize] = row;
    }
    let prov = Provenance {
        seed,
        kind: GeneratorKind::ChungLu,
    };
    Ok(Graph::from_forward_lists(*params, positions, forward, prov))
}
