use thiserror::Error;

/// Every way a geometric operation can refuse its input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index {value} out of range for {what}")]
    Index { what: &'static str, value: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("matrix is not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },
    #[error("pole: point within {norm:e} of a singularity (generator {index:?})")]
    Pole { index: Option<usize>, norm: f64 },
    #[error("annulus condition violated: need {t} < |A(p)| = {norm} < 1")]
    Annulus { t: f64, norm: f64 },
    #[error("projective third coordinate vanished; the point maps to infinity")]
    Projective,
    #[error("point is the southern pole of the sphere")]
    SouthPole,
    #[error("point is not on the Siegel boundary (residual {residual:e})")]
    NotOnBoundary { residual: f64 },
    #[error("quadrature did not converge: relative change {relative_change:e} > {tolerance:e}")]
    Convergence { relative_change: f64, tolerance: f64 },
    #[error("insufficient data: have {have}, need at least {need}")]
    InsufficientData { have: usize, need: usize },
    #[error("word budget exceeded: {requested} words requested, budget {budget}")]
    Capacity { requested: usize, budget: usize },
    #[error("field evaluation returned a non-finite value")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, GeometryError>;
