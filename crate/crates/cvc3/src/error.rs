//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CvcError {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("frame is not orthonormal (gram deviates from identity by {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("L is not self-adjoint (asymmetry {residual:.3e}); the group is not unimodular")]
    NotUnimodular { residual: f64 },

    #[error("structure constants violate the Jacobi identity (residual {residual:.3e})")]
    JacobiViolation { residual: f64 },

    #[error("vectors span a degenerate 2-plane")]
    DegeneratePlane,

    #[error("vector is not unit length (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("traceless symmetric part vanishes; the canonical frame angle is undefined")]
    DegenerateA0,

    #[error("isotropic point: all planes share one curvature, the distinguished direction is undefined")]
    IsotropicPoint,

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("ell(t) <= 0 at t = {t}: initial data is not realizable along a complete geodesic")]
    EllNonpositive { t: f64 },

    #[error("initial data (tr A, det A) = ({tr_a0}, {det_a0}) forces ell to vanish")]
    InvalidInitialData { tr_a0: f64, det_a0: f64 },

    #[error("frame direction e{axis} is not geodesic for this model")]
    NotGeodesicDirection { axis: usize },

    #[error("isotropic model: all tangent planes share one curvature")]
    IsotropicModel,

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
}

pub type Result<T> = std::result::Result<T, CvcError>;
