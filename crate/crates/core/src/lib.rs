//! Numerical laboratory for Bartnik quasi-local mass of rotationally
//! symmetric regions.
//!
//! Metrics are handled in the form `ds² + r(s)² dΩ²` ([`RadialProfile`]).
//! The crate provides curvature and mass quantities, a collar extension with
//! positive scalar curvature, conformal perturbations with exact mass
//! bookkeeping, corner smoothing, horizon and outward-minimizing predicates,
//! and a constrained ADM-mass minimizer over parametric extensions.

pub mod bartnik_search;
pub mod conformal_deform;
pub mod error;
pub mod horizon_analysis;
pub mod io;
pub mod jet;
pub mod local_extension;
pub mod masses;
pub mod numerics;
pub mod plot;
pub mod radial_geometry;
pub mod smoothing_pipeline;
pub mod verify;

pub use error::{Error, Result};
pub use radial_geometry::{BoundaryData, CornerManifold, RadialProfile, WarpedProfile};
