//! Step-graphon numerics for the edge-triangle exponential random graph model.
//!
//! - [`graphon`]: step graphons, homomorphism densities, the edge-removal
//!   operator, L¹ and cut distances.
//! - [`model`]: the feasible (edge, triangle) region, critical directions,
//!   entropy and free energy.
//! - [`perturbation`]: tangent-cone free-energy estimates around Turán
//!   graphons and the ground-state comparison along critical directions.
//! - [`sampler`]: Metropolis sampling and exhaustive small-n enumeration.

pub mod error;
pub mod graphon;
pub mod model;
pub mod perturbation;
pub mod sampler;

pub use error::{Error, Result};
