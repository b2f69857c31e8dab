//! Vertex sampling: radius from `ρ(r) = α sinh(αr)/(cosh(αR) − 1)` by inverse
//! transform, angle uniform on `(0, 2π]`.

use std::f64::consts::{LN_2, TAU};
use std::ops::Range;

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{acosh1p, ModelParams, VertexPosition};
use crate::rng::{hash_words, unit_f64, SampleSeed, TAG_POSITION};

#[derive(Error, Debug, Clone, PartialEq)]
#[error("radius {r} outside [0, {radius}]")]
pub struct RadiusDomainError {
    pub r: f64,
    pub radius: f64,
}

/// `ln sinh(x)` for `x ≥ 0`, finite for arguments far beyond `sinh` overflow.
pub(crate) fn ln_sinh(x: f64) -> f64 {
    if x < 20.0 {
        x.sinh().ln()
    } else {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

/// `P(r_v ≤ r) = (cosh αr − 1)/(cosh αR − 1)`.
pub fn radial_cdf(r: f64, params: &ModelParams) -> Result<f64, RadiusDomainError> {
    let radius = params.radius;
    if !(0.0..=radius).contains(&r) {
        return Err(RadiusDomainError { r, radius });
    }
    if r == radius {
        return Ok(1.0);
    }
    // cosh x − 1 = 2 sinh²(x/2)
    let half = 0.5 * params.alpha;
    Ok((2.0 * (ln_sinh(half * r) - ln_sinh(half * radius))).exp())
}

/// `ρ(r)`, the radial density.
pub fn radial_pdf(r: f64, params: &ModelParams) -> f64 {
    let a = params.alpha;
    if !(0.0..=params.radius).contains(&r) {
        return 0.0;
    }
    // α sinh(αr) / (2 sinh²(αR/2))
    if r == 0.0 {
        return 0.0;
    }
    a * (ln_sinh(a * r) - 2.0 * ln_sinh(0.5 * a * params.radius) - LN_2).exp()
}

/// Inverse of [`radial_cdf`]: `r = acosh(1 + u(cosh αR − 1))/α`.
pub fn sample_radius(uniform: f64, params: &ModelParams) -> f64 {
    let a = params.alpha;
    let radius = params.radius;
    if uniform <= 0.0 {
        return 0.0;
    }
    // y = u (cosh αR − 1) = 2u sinh²(αR/2), carried in log space.
    let ln_y = (2.0 * uniform).ln() + 2.0 * ln_sinh(0.5 * a * radius);
    let r = if ln_y < 40.0 {
        acosh1p(ln_y.exp()) / a
    } else {
        // acosh(1 + y) = ln(2(1 + y)) + O(y^{-2})
        (LN_2 + ln_y + (-ln_y).exp().ln_1p()) / a
    };
    r.min(radius)
}

/// Angle in `(0, 2π]` from a uniform in `[0, 1)`.
pub fn sample_angle(uniform: f64) -> f64 {
    TAU * (1.0 - uniform)
}

/// Position of vertex `index`; a pure function of `(seed, stream, index)`.
pub fn sample_position(index: usize, params: &ModelParams, seed: SampleSeed) -> VertexPosition {
    let base = [TAG_POSITION, seed.seed, seed.stream_id, index as u64];
    let radial = unit_f64(hash_words(&[base[0], base[1], base[2], base[3], 0]));
    let angular = unit_f64(hash_words(&[base[0], base[1], base[2], base[3], 1]));
    VertexPosition::new_unchecked(sample_radius(radial, params), sample_angle(angular), params.radius)
}

/// Positions for the vertex indices in `range`.
pub fn sample_position_range(
    params: &ModelParams,
    seed: SampleSeed,
    range: Range<usize>,
) -> Vec<VertexPosition> {
    range
        .into_par_iter()
        .map(|i| sample_position(i, params, seed))
        .collect()
}

/// All `N` positions.
pub fn sample_positions(params: &ModelParams, seed: SampleSeed) -> Vec<VertexPosition> {
    sample_position_range(params, seed, 0..params.n_vertices)
}
