//! Model parameters and hyperbolic geometry in the native representation.
//!
//! Points are stored in polar coordinates `(r, θ)` where `r` is the hyperbolic
//! distance from the origin of a plane with curvature `-ζ²`. The disc radius is
//! tied to the vertex count through `N = exp(ζR/2)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ModelError {
    #[error("vertex count must be positive")]
    EmptyGraph,
    #[error("parameter `{name}` must be finite and positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("asymptotic distance is undefined at relative angle 0")]
    ZeroAngle,
    #[error("radius {r} outside [0, {radius}]")]
    RadiusOutOfRange { r: f64, radius: f64 },
    #[error("angle {theta} outside (0, 2π]")]
    AngleOutOfRange { theta: f64 },
}

/// Temperature regime selected by β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// β > 1: bounded degrees with a power-law tail.
    Cold,
    /// β = 1: logarithmic mean degree.
    Critical,
    /// β < 1: polynomial mean degree.
    Hot,
}

impl Regime {
    pub fn of(beta: f64) -> Self {
        if beta > 1.0 {
            Regime::Cold
        } else if beta < 1.0 {
            Regime::Hot
        } else {
            Regime::Critical
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Cold => "cold",
            Regime::Critical => "critical",
            Regime::Hot => "hot",
        })
    }
}

/// Parameters of `G(N; ζ, α, β)`.
///
/// `theory_valid` records whether `ζ/α < 2`; generation is defined for every
/// positive parameter set, the asymptotic predictions are not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_vertices: usize,
    pub zeta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub radius: f64,
    /// Hard threshold rule `d < R` (the β → ∞ limit). β is kept but unused.
    pub disc: bool,
    pub theory_valid: bool,
}

fn check_positive(name: &'static str, value: f64) -> Result<(), ModelError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ModelError::NonPositive { name, value })
    }
}

impl ModelParams {
    pub fn new(n_vertices: usize, zeta: f64, alpha: f64, beta: f64) -> Result<Self, ModelError> {
        if n_vertices == 0 {
            return Err(ModelError::EmptyGraph);
        }
        check_positive("zeta", zeta)?;
        check_positive("alpha", alpha)?;
        check_positive("beta", beta)?;
        Ok(Self {
            n_vertices,
            zeta,
            alpha,
            beta,
            radius: 2.0 / zeta * (n_vertices as f64).ln(),
            disc: false,
            theory_valid: zeta / alpha < 2.0,
        })
    }

    /// Disc model on the same vertex law; `beta` only matters if the flag is
    /// switched off again.
    pub fn new_disc(n_vertices: usize, zeta: f64, alpha: f64) -> Result<Self, ModelError> {
        Ok(Self::new(n_vertices, zeta, alpha, 1.0)?.with_disc(true))
    }

    pub fn with_disc(mut self, disc: bool) -> Self {
        self.disc = disc;
        self
    }

    /// Same ζ, α, β and disc flag at a different vertex count.
    pub fn with_n(&self, n_vertices: usize) -> Result<Self, ModelError> {
        Ok(Self::new(n_vertices, self.zeta, self.alpha, self.beta)?.with_disc(self.disc))
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.beta)
    }

    /// `N` as a real number.
    pub fn n(&self) -> f64 {
        self.n_vertices as f64
    }
}

/// A vertex in polar coordinates, with its type `t = R − r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexPosition {
    pub r: f64,
    pub theta: f64,
    pub t: f64,
}

impl VertexPosition {
    pub fn new(r: f64, theta: f64, params: &ModelParams) -> Result<Self, ModelError> {
        let radius = params.radius;
        if !(0.0..=radius).contains(&r) {
            return Err(ModelError::RadiusOutOfRange { r, radius });
        }
        if !(theta > 0.0 && theta <= TAU) {
            return Err(ModelError::AngleOutOfRange { theta });
        }
        Ok(Self::new_unchecked(r, theta, radius))
    }

    pub(crate) fn new_unchecked(r: f64, theta: f64, radius: f64) -> Self {
        Self {
            r,
            theta,
            t: radius - r,
        }
    }

    /// Position given by its type rather than its radius.
    pub fn from_type(t: f64, theta: f64, params: &ModelParams) -> Result<Self, ModelError> {
        Self::new(params.radius - t, theta, params)
    }

    /// The origin, with the conventional angle 2π.
    pub fn origin(params: &ModelParams) -> Self {
        Self::new_unchecked(0.0, TAU, params.radius)
    }
}

/// The quantities attached to a vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairGeometry {
    pub distance: f64,
    pub rel_angle: f64,
    /// `A(t_u, t_v) = exp((ζ/2)(R − t_u − t_v))`.
    pub a_factor: f64,
    /// `(e^{−2ζ(R−t_u)} + e^{−2ζ(R−t_v)})^{1/2}`, the angular scale below
    /// which the asymptotic distance formula breaks down.
    pub theta_hat: f64,
}

/// Relative angle of two angular coordinates, folded into `[0, π]`.
pub fn relative_angle(theta_u: f64, theta_v: f64) -> f64 {
    let diff = (theta_u - theta_v).abs() % TAU;
    if diff > PI {
        TAU - diff
    } else {
        diff
    }
}

/// `acosh(1 + y)` without cancellation for small `y`.
pub(crate) fn acosh1p(y: f64) -> f64 {
    (y + (y * (y + 2.0)).sqrt()).ln_1p()
}

/// Hyperbolic distance from radii and relative angle.
///
/// Uses `cosh(ζd) = 1 + 2 sinh²(ζ(r_u−r_v)/2) + 2 sinh(ζr_u) sinh(ζr_v) sin²(θ/2)`,
/// which is the law of cosines rearranged into a sum of non-negative terms.
pub fn distance_polar(r_u: f64, r_v: f64, rel_angle: f64, zeta: f64) -> f64 {
    let half_diff = (0.5 * zeta * (r_u - r_v)).sinh();
    let half_angle = (0.5 * rel_angle).sin();
    let y = 2.0 * half_diff * half_diff
        + 2.0 * (zeta * r_u).sinh() * (zeta * r_v).sinh() * half_angle * half_angle;
    acosh1p(y.max(0.0)) / zeta
}

pub fn exact_distance(u: &VertexPosition, v: &VertexPosition, params: &ModelParams) -> f64 {
    distance_polar(u.r, v.r, relative_angle(u.theta, v.theta), params.zeta)
}

/// `2R − t_u − t_v + (2/ζ) ln sin(θ/2)`, valid when `θ ≫ θ̂`.
pub fn approx_distance(
    u: &VertexPosition,
    v: &VertexPosition,
    params: &ModelParams,
) -> Result<f64, ModelError> {
    let theta = relative_angle(u.theta, v.theta);
    if theta == 0.0 {
        return Err(ModelError::ZeroAngle);
    }
    Ok(2.0 * params.radius - u.t - v.t + 2.0 / params.zeta * (0.5 * theta).sin().ln())
}

/// Logistic function `1/(1+e^{−x})` evaluated with `exp` of non-positive
/// arguments only.
pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Fermi-Dirac connection probability `1/(exp(β(ζ/2)(d − R)) + 1)`.
///
/// In disc mode this is the step function, with `1/2` at `d = R`.
pub fn connection_probability(d: f64, params: &ModelParams) -> f64 {
    if params.disc {
        return if d < params.radius {
            1.0
        } else if d > params.radius {
            0.0
        } else {
            0.5
        };
    }
    sigmoid(-params.beta * 0.5 * params.zeta * (d - params.radius))
}

pub fn a_factor(t_u: f64, t_v: f64, params: &ModelParams) -> f64 {
    (0.5 * params.zeta * (params.radius - t_u - t_v)).exp()
}

pub fn theta_hat(t_u: f64, t_v: f64, params: &ModelParams) -> f64 {
    let z2 = 2.0 * params.zeta;
    ((-z2 * (params.radius - t_u)).exp() + (-z2 * (params.radius - t_v)).exp()).sqrt()
}

pub fn pair_geometry(u: &VertexPosition, v: &VertexPosition, params: &ModelParams) -> PairGeometry {
    let rel_angle = relative_angle(u.theta, v.theta);
    PairGeometry {
        distance: distance_polar(u.r, v.r, rel_angle, params.zeta),
        rel_angle,
        a_factor: a_factor(u.t, v.t, params),
        theta_hat: theta_hat(u.t, v.t, params),
    }
}
