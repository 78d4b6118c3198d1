//! Curvature analysis for three-dimensional metric Lie algebras and locally
//! homogeneous 3-manifold models.
//!
//! The crate computes Levi-Civita connections and full curvature data of
//! left-invariant metrics, decides the constant-vector-curvature property
//! cvc(eps) with extremal curvature, reconstructs the classified homogeneous
//! families, evolves the adapted-frame quantities along distinguished
//! geodesics, and tests positive hyperbolic rank through Jacobi fields.

pub mod adapted_frame;
pub mod connection_curvature;
pub mod cvc_analysis;
pub mod error;
pub mod families;
pub mod geodesic_ode;
pub mod jacobi_rank;
pub mod lie_metric;
pub mod linalg;
pub mod report;
pub mod rng;

pub use error::{CvcError, Result};

/// Default tolerance for symmetry, Jacobi and equality-with-epsilon checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Looser tolerance for sampled oracles, where discretization error
/// dominates floating-point error.
pub const SAMPLED_TOL: f64 = 1e-6;
