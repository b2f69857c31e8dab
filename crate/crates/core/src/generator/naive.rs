use super::ForwardSampler;
use crate::model::{connection_probability, relative_angle, ModelParams, VertexPosition};
use crate::rng::pair_uniform;

/// Per-vertex quantities reused across all pairs.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Prepared {
    pub r: f64,
    pub theta: f64,
    pub sinh_zr: f64,
}

impl Prepared {
    pub fn new(v: &VertexPosition, zeta: f64) -> Self {
        Self {
            r: v.r,
            theta: v.theta,
            sinh_zr: (zeta * v.r).sinh(),
        }
    }

    /// Same value as [`crate::model::distance_polar`], with the per-vertex
    /// `sinh` terms cached.
    #[inline]
    pub fn distance(&self, other: &Prepared, zeta: f64) -> f64 {
        let half_diff = (0.5 * zeta * (self.r - other.r)).sinh();
        let half_angle = (0.5 * relative_angle(self.theta, other.theta)).sin();
        let y = 2.0 * half_diff * half_diff + 2.0 * self.sinh_zr * other.sinh_zr * half_angle * half_angle;
        crate::model::acosh1p(y.max(0.0)) / zeta
    }
}

/// Visits every pair `{i, j}`, `i < j`, from vertex `i`.
pub struct NaiveSampler {
    params: ModelParams,
    seed: u64,
    vertices: Vec<Prepared>,
}

impl NaiveSampler {
    pub fn new(positions: &[VertexPosition], params: &ModelParams, seed: u64) -> Self {
        assert!(positions.len() <= u32::MAX as usize, "vertex ids are stored as u32");
        Self {
            params: *params,
            seed,
            vertices: positions.iter().map(|v| Prepared::new(v, params.zeta)).collect(),
        }
    }

    #[inline]
    fn present(&self, i: usize, j: usize) -> bool {
        let d = self.vertices[i].distance(&self.vertices[j], self.params.zeta);
        if self.params.disc {
            d < self.params.radius
        } else {
            pair_uniform(self.seed, i, j) < connection_probability(d, &self.params)
        }
    }
}

impl ForwardSampler for NaiveSampler {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn emit_forward(&self, u: usize, out: &mut Vec<u32>) -> u64 {
        let n = self.vertices.len();
        out.extend((u + 1..n).filter(|&v| self.present(u, v)).map(|v| v as u32));
        (n - u - 1) as u64
    }
}

/// Whether the naive generator puts `{i, j}` in the graph for `seed`; a pure
/// function of the pair, independent of any iteration order.
pub fn naive_pair_present(
    positions: &[VertexPosition],
    params: &ModelParams,
    seed: u64,
    i: usize,
    j: usize,
) -> bool {
    let zeta = params.zeta;
    let d = Prepared::new(&positions[i], zeta).distance(&Prepared::new(&positions[j], zeta), zeta);
    if params.disc {
        d < params.radius
    } else {
        pair_uniform(seed, i, j) < connection_probability(d, params)
    }
}
