//! Binomial random hyperbolic graphs `G(N; ζ, α, β)`.
//!
//! Vertices are placed in a hyperbolic disc of radius `R = (2/ζ) ln N` and
//! every pair is joined independently with the Fermi-Dirac probability
//! `1/(exp(β(ζ/2)(d − R)) + 1)`. Besides sampling, the crate computes the
//! predicted degree laws for `β > 1`, `β = 1` and `β < 1` and compares them
//! with generated graphs.
//!
//! ```
//! use hrg::{generate, sample_positions, Algorithm, ModelParams, SampleSeed};
//!
//! let params = ModelParams::new(1000, 1.0, 1.0, 2.0).unwrap();
//! let positions = sample_positions(&params, SampleSeed::new(7, 0));
//! let g = generate(Algorithm::Accelerated, positions, &params, 7);
//! assert_eq!(g.vertex_count(), 1000);
//! ```

pub mod analysis;
pub mod generator;
pub mod graph;
pub mod model;
pub mod quadrature;
pub mod rng;
pub mod sampler;
pub mod special;
pub mod stats;
pub mod theory;
pub mod validate;

pub use generator::{generate, generate_accelerated, generate_degrees, generate_naive, Algorithm};
pub use graph::{degree_sequence, GeneratorKind, Graph, Provenance};
pub use model::{ModelError, ModelParams, Regime, VertexPosition};
pub use rng::SampleSeed;
pub use sampler::sample_positions;
