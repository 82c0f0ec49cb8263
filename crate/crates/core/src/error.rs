use thiserror::Error;

pub type Result<T, E = WireError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WireError {
    #[error("site index {index} outside 1..={n_sites}")]
    SiteOutOfRange { index: usize, n_sites: usize },

    #[error("Majorana index {index} outside 1..={dim}")]
    MajoranaOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not antisymmetric (deviation {deviation:e})")]
    NotAntisymmetric { deviation: f64 },

    #[error("non-physical covariance: eigenvalue {eigenvalue} of Γ² outside [-1, 0]")]
    NonPhysical { eigenvalue: f64 },

    #[error("step-size guard violated: dt·rate = {product} ≥ {limit}")]
    StepSizeGuard { product: f64, limit: f64 },

    #[error("state left the physical region during integration at t = {time} (eigenvalue {eigenvalue})")]
    NonPhysicalDrift { time: f64, eigenvalue: f64 },

    #[error("inconsistent model: Y couples degenerate zero modes (|Y_rs| = {coupling:e})")]
    InconsistentModel { coupling: f64 },

    #[error("model has no dissipative zero modes")]
    NoZeroModes,

    #[error("momentum mode k = {k} is undamped (κ_k = {rate:e})")]
    UndampedMode { k: f64, rate: f64 },

    #[error("Bloch vector vanishes at k = {k} (|n_k| = {norm:e}); invariant undefined")]
    InvariantUndefined { k: f64, norm: f64 },

    #[error("winding estimates disagree by {residual:e}; grid too coarse")]
    GridTooCoarse { residual: f64 },

    #[error("field has no chiral axis: {0}")]
    NotChiral(String),

    #[error("zero-mode construction singular at theta = {theta}")]
    SingularZeroMode { theta: f64 },

    #[error("Fock space limited to {max} sites, requested {requested}")]
    FockDimension { requested: usize, max: usize },

    #[error("trace drifted to {trace} during Fock evolution")]
    TraceDrift { trace: f64 },

    #[error("covariance extracted from ρ has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error("pairing function undefined: u_k = 0 at paired mode k = {k}")]
    PairingUndefined { k: f64 },
}

impl WireError {
    /// Errors raised by numerical guards rather than by malformed input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            WireError::StepSizeGuard { .. }
                | WireError::NonPhysicalDrift { .. }
                | WireError::InconsistentModel { .. }
                | WireError::UndampedMode { .. }
                | WireError::InvariantUndefined { .. }
                | WireError::GridTooCoarse { .. }
                | WireError::TraceDrift { .. }
                | WireError::ImaginaryResidue { .. }
                | WireError::NonPhysical { .. }
                | WireError::SingularZeroMode { .. }
                | WireError::PairingUndefined { .. }
                | WireError::NotChiral(_)
                | WireError::NoZeroModes
        )
    }
}
