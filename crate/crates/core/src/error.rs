use thiserror::Error;

/// Errors raised by the simulator and the protocols built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count must be at least 1")]
    ZeroModes,
    #[error("mode index {mode} out of range for {mode_count} modes")]
    ModeOutOfRange { mode: usize, mode_count: usize },
    #[error("mode count mismatch: {left} vs {right}")]
    ModeCountMismatch { left: usize, right: usize },
    #[error("photon number mismatch: input has {input}, output has {output}")]
    PhotonNumberMismatch { input: u32, output: u32 },
    #[error("{photons} photons exceed the cutoff of {cutoff}")]
    CutoffExceeded { photons: u32, cutoff: u32 },
    #[error("matrix is not unitary (max deviation from identity {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("element needs two distinct modes, got {0} twice")]
    RepeatedMode(usize),
    #[error("rail {rail} holds {found} photons in at least one branch, expected exactly one")]
    RailOccupancy { rail: usize, found: u32 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("distribution has zero mean")]
    ZeroMean,
    #[error("solver did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("graph has {vertices} vertices, at most {max} are supported")]
    TooManyVertices { vertices: usize, max: usize },
    #[error("no complete fringe across the field of view (fringe spacing {spacing:e} exceeds length {length:e})")]
    ZeroFringe { spacing: f64, length: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
