//! Envelope-rejection edge sampling.
//!
//! Vertices are grouped into radial bands of width `2 ln 2/ζ` (so `A(t_u, t_v)`
//! changes by at most a factor 2 across a band) and sorted by angle inside
//! each band. Vertex `u` handles all pairs with partners in its own band at a
//! forward angular offset in `[0, π]`, and all pairs with partners in outer
//! bands. For each such band, the angular offsets around `u` are cut into
//! rings `[0, δ), [δ, 2δ), [2δ, 4δ), …` (mirrored on the other side), where
//! `δ` is roughly the angle at which pairs stop being likely neighbours. On
//! each ring the smallest possible distance gives a bound `p̄ ≥ p`; partners
//! are drawn by geometric skipping with parameter `p̄` and kept with
//! probability `p/p̄`. Every pair is therefore an edge with probability exactly
//! `p_{uv}`, independently of the others.

use std::f64::consts::{LN_2, PI, TAU};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use thiserror::Error;

use super::naive::Prepared;
use super::ForwardSampler;
use crate::model::{connection_probability, distance_polar, ModelParams, VertexPosition};
use crate::rng::{CounterRng, TAG_CANDIDATE};

const HALF_TURN: u128 = 1 << 63;
const FULL_TURN: u128 = 1 << 64;
const RADIANS_PER_UNIT: f64 = TAU / 18_446_744_073_709_551_616.0;

/// Below this temperature parameter every pair has `p ≈ 1/2` and no envelope
/// can beat enumerating all pairs.
const MIN_BETA: f64 = 1e-3;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum EnvelopeError {
    #[error("β = {0} is too small for envelope sampling")]
    BetaTooSmall(f64),
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("{0} vertices exceed the 32-bit id range")]
    TooManyVertices(usize),
}

/// Angular coordinate as a fraction of a full turn in 64-bit fixed point.
fn angle_key(theta: f64) -> u64 {
    ((theta / TAU) * FULL_TURN as f64) as u128 as u64
}

#[derive(Debug, Clone, Copy)]
struct Member {
    id: u32,
    v: Prepared,
}

#[derive(Debug, Default)]
struct Band {
    angles: Vec<u64>,
    members: Vec<Member>,
    r_min: f64,
    r_max: f64,
}

pub struct AcceleratedSampler {
    params: ModelParams,
    seed: u64,
    vertices: Vec<Prepared>,
    angles: Vec<u64>,
    band_of: Vec<u32>,
    bands: Vec<Band>,
    failed: AtomicBool,
    violations: AtomicU64,
}

impl AcceleratedSampler {
    pub fn new(positions: &[VertexPosition], params: &ModelParams, seed: u64) -> Result<Self, EnvelopeError> {
        let n = positions.len();
        if n > u32::MAX as usize {
            return Err(EnvelopeError::TooManyVertices(n));
        }
        if !params.disc && params.beta < MIN_BETA {
            return Err(EnvelopeError::BetaTooSmall(params.beta));
        }
        if !params.radius.is_finite() || !params.zeta.is_finite() || !params.beta.is_finite() {
            return Err(EnvelopeError::NonFinite("model parameter"));
        }
        if positions.iter().any(|p| !p.r.is_finite() || !p.theta.is_finite()) {
            return Err(EnvelopeError::NonFinite("vertex position"));
        }

        let width = 2.0 * LN_2 / params.zeta;
        let band_count = (params.radius / width).floor() as usize + 1;
        let band_index = |r: f64| ((r / width) as usize).min(band_count - 1);

        let vertices: Vec<Prepared> = positions.iter().map(|v| Prepared::new(v, params.zeta)).collect();
        let angles: Vec<u64> = positions.iter().map(|v| angle_key(v.theta)).collect();
        let band_of: Vec<u32> = positions.iter().map(|v| band_index(v.r) as u32).collect();

        let mut sorted: Vec<Vec<(u64, u32)>> = vec![Vec::new(); band_count];
        for (i, &b) in band_of.iter().enumerate() {
            sorted[b as usize].push((angles[i], i as u32));
        }
        let bands = sorted
            .into_iter()
            .map(|mut list| {
                list.sort_unstable();
                let members: Vec<Member> = list
                    .iter()
                    .map(|&(_, id)| Member {
                        id,
                        v: vertices[id as usize],
                    })
                    .collect();
                let (r_min, r_max) = members
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m| (lo.min(m.v.r), hi.max(m.v.r)));
                Band {
                    angles: list.iter().map(|&(a, _)| a).collect(),
                    members,
                    r_min,
                    r_max,
                }
            })
            .collect();

        Ok(Self {
            params: *params,
            seed,
            vertices,
            angles,
            band_of,
            bands,
            failed: AtomicBool::new(false),
            violations: AtomicU64::new(0),
        })
    }

    /// Whether some envelope evaluated to a non-finite value; the sample is
    /// then unusable and the caller should fall back to the naive generator.
    pub fn envelope_failed(&self) -> bool {
        self.failed.load(Ordering::Relaxed)
    }

    /// Candidates whose exact probability exceeded the envelope. Always zero
    /// unless the bound is wrong.
    pub fn envelope_violations(&self) -> u64 {
        self.violations.load(Ordering::Relaxed)
    }

    /// Forward offsets `0, δ, 2δ, 4δ, …, 2^63` for `u` against a band whose
    /// innermost member sits at `r_min`.
    fn ring_cuts(&self, r_u: f64, r_min: f64, cuts: &mut Vec<u128>) {
        cuts.clear();
        cuts.push(0);
        let a_min = (0.5 * self.params.zeta * (r_u + r_min - self.params.radius)).exp();
        if a_min > 1.0 {
            let delta = 2.0 * (1.0 / a_min).asin();
            let mut c = ((delta / RADIANS_PER_UNIT) as u128).max(1);
            while c < HALF_TURN {
                cuts.push(c);
                c *= 2;
            }
        }
        cuts.push(HALF_TURN);
    }

    /// Upper bound on `p_{uv}` over all `v` in `band` whose relative angle to
    /// `u` is at least the angle of offset `cut`.
    fn envelope(&self, u: &Prepared, band: &Band, cut: u128) -> f64 {
        let zeta = self.params.zeta;
        // Offsets are quantised angles; allow for rounding on both vertices.
        let phi = ((cut as f64 * RADIANS_PER_UNIT).min(PI) * (1.0 - 1e-12) - 1e-14).max(0.0);
        let r = closest_radius(u.r, phi, band.r_min, band.r_max, zeta);
        let d = distance_polar(u.r, r, phi, zeta);
        let d = (d - 1e-9 * (1.0 + d)).max(0.0);
        if !d.is_finite() {
            self.failed.store(true, Ordering::Relaxed);
            return 1.0;
        }
        if self.params.disc {
            if d < self.params.radius {
                1.0
            } else {
                0.0
            }
        } else {
            connection_probability(d, &self.params)
        }
    }
}

/// Radius in `[lo, hi]` minimising the distance to a vertex at radius `r_u`
/// at relative angle `phi`.
///
/// The unconstrained minimiser solves `tanh(ζr) = tanh(ζr_u) cos φ`; writing
/// `1 − tanh(ζr_u) cos φ` as a sum of positive terms keeps it accurate when
/// `tanh` saturates.
fn closest_radius(r_u: f64, phi: f64, lo: f64, hi: f64, zeta: f64) -> f64 {
    let x = zeta * r_u;
    let e = (-2.0 * x).exp();
    let s = (0.5 * phi).sin();
    let eps = 2.0 * e / (1.0 + e) + x.tanh() * 2.0 * s * s;
    let r_star = if eps >= 1.0 {
        0.0
    } else {
        ((2.0 - eps) / eps).ln() / (2.0 * zeta)
    };
    r_star.min(r_u).clamp(lo, hi)
}

/// First index `k` in `from..n` with `!below(k)`, for a predicate that is
/// true on a prefix.
#[inline]
fn gallop(from: usize, n: usize, below: impl Fn(usize) -> bool) -> usize {
    let mut lo = from;
    let mut hi = from;
    let mut step = 1;
    loop {
        if hi >= n {
            hi = n;
            break;
        }
        if !below(hi) {
            break;
        }
        lo = hi + 1;
        hi += step;
        step *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if below(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

impl ForwardSampler for AcceleratedSampler {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn emit_forward(&self, u: usize, out: &mut Vec<u32>) -> u64 {
        let pu = self.vertices[u];
        let au = self.angles[u];
        let bu = self.band_of[u] as usize;
        let mut rng = CounterRng::new(&[TAG_CANDIDATE, self.seed, u as u64]);
        let mut candidates = 0u64;
        let mut cuts = Vec::with_capacity(130);
        let mut intervals: Vec<(u128, usize)> = Vec::with_capacity(260);

        for (b, band) in self.bands.iter().enumerate().skip(bu) {
            let n_b = band.angles.len();
            if n_b == 0 {
                continue;
            }
            let same_band = b == bu;
            self.ring_cuts(pu.r, band.r_min, &mut cuts);
            let rings = cuts.len() - 1;

            // (upper offset bound, ring whose inner cut bounds the angle)
            intervals.clear();
            for j in 0..rings {
                intervals.push((cuts[j + 1], j));
            }
            if same_band {
                // Include the antipodal offset itself; ties are resolved below.
                intervals.last_mut().expect("at least one ring").0 = HALF_TURN + 1;
            } else {
                for j in (0..rings).rev() {
                    intervals.push((FULL_TURN - cuts[j], j));
                }
            }

            let start = band.angles.partition_point(|&a| a < au);
            let rotated = |k: usize| if start + k < n_b { start + k } else { start + k - n_b };
            let offset = |k: usize| band.angles[rotated(k)].wrapping_sub(au) as u128;

            let mut cursor = 0usize;
            for &(upper, ring) in &intervals {
                if cursor >= n_b {
                    break;
                }
                let end = gallop(cursor, n_b, |k| offset(k) < upper);
                if end == cursor {
                    continue;
                }
                let bound = self.envelope(&pu, band, cuts[ring]);
                if bound <= 0.0 {
                    cursor = end;
                    continue;
                }
                let log_q = (-bound).ln_1p();
                let mut k = cursor;
                loop {
                    if bound < 1.0 {
                        let jump = (rng.next_f64_open0().ln() / log_q).floor();
                        if jump >= (end - k) as f64 {
                            break;
                        }
                        k += jump as usize;
                    } else if k >= end {
                        break;
                    }
                    let idx = rotated(k);
                    let member = &band.members[idx];
                    let v = member.id as usize;
                    k += 1;
                    if v == u {
                        continue;
                    }
                    if same_band && v < u {
                        let off = band.angles[idx].wrapping_sub(au) as u128;
                        if off == 0 || off == HALF_TURN {
                            continue;
                        }
                    }
                    candidates += 1;
                    let d = pu.distance(&member.v, self.params.zeta);
                    let p = connection_probability(d, &self.params);
                    if p > bound * (1.0 + 1e-12) {
                        self.violations.fetch_add(1, Ordering::Relaxed);
                    }
                    if rng.next_f64() * bound < p {
                        out.push(v as u32);
                    }
                }
                cursor = end;
            }
        }
        candidates
    }
}
