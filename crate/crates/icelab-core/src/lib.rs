//! Exact structures and samplers for the six-vertex model, together with the
//! random-matrix reference stack used to verify its scaling limits at desk
//! scale.
//!
//! The crate is organized around three layers:
//!
//! * exact finite-size objects: vertex weights and gauge transformations
//!   ([`core_model`]), brute-force enumeration ([`exact_enum`]), the
//!   Yang-Baxter checker ([`yang_baxter`]), determinant evaluations
//!   ([`ik_determinants`]) and Schur-measure machinery ([`schur_engine`]);
//! * asymptotic machinery: contour integrals and steepest-descent limits
//!   ([`contour_asymptotics`]);
//! * stochastic verification: the Markovian sampler
//!   ([`stochastic_simulator`]), a Metropolis chain for domain-wall boundary
//!   conditions ([`dwbc_mcmc`]) and the GUE / Airy / Tracy-Widom reference
//!   numerics ([`rmt_reference`]).
//!
//! Every identity shipped here is cross-checked against an independent route
//! (enumeration, quadrature or closed form); the [`suite`] module bundles
//! those checks into pass/fail criteria.

pub mod contour_asymptotics;
pub mod core_model;
pub mod dd;
pub mod dwbc_mcmc;
pub mod error;
pub mod exact_enum;
pub mod ik_determinants;
pub mod linalg;
pub mod rmt_reference;
pub mod rng;
pub mod schur_engine;
pub mod stats;
pub mod stochastic_simulator;
pub mod suite;
pub mod yang_baxter;

pub use error::{Error, Result};

pub use core_model::{
    BoundaryCondition, BoundaryData, SixVertexConfig, SpectralParams, VertexType, WeightField,
    WeightTable,
};
pub use exact_enum::EnumerationResult;
pub use ik_determinants::SpectralVectors;
pub use schur_engine::{Partition, PointConfiguration};
// TEMP pub use stochastic_simulator::{HeightSample, SampleBatch, StochasticParams};

pub use num_complex::Complex64;
