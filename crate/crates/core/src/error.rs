use thiserror::Error;

/// Errors produced by the dynamics, region and symbolic layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid map parameters: {0}")]
    InvalidParams(String),

    #[error("evaluation at the pole z = 0")]
    Pole,

    #[error("rotation symmetry is trivial for n = 2")]
    SymmetryUndefined,

    #[error("family (n = {n}, d = {d}) has no principal Mandelbrot sets")]
    UnsupportedFamily { n: u32, d: u32 },

    #[error("cardioid index {k} out of range for n = {n}")]
    CardioidIndex { n: u32, k: u32 },

    #[error("index map mismatch at component {j}: closed form {expected}, numeric {found:?}")]
    IndexMapMismatch { j: u32, expected: u32, found: Option<u32> },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("viewport too small: {0}")]
    ViewportTooSmall(String),

    #[error("resolution too coarse: {0}")]
    ResolutionTooCoarse(String),

    #[error("unresolvable at this resolution: {0}")]
    Unresolvable(String),

    #[error("point {0} lies in an identified Fatou component")]
    NotInSector(String),

    #[error("itinerary step {step} landed in an identified Fatou component")]
    SectorAmbiguity { step: usize },

    #[error("region map has no connecting components to define sectors")]
    NoSectors,

    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(u32, u32),
}

impl Error {
    /// True for the errors that a finer grid or a larger iteration budget may cure.
    pub fn is_resolution_issue(&self) -> bool {
        matches!(
            self,
            Error::Unresolvable(_) | Error::ResolutionTooCoarse(_) | Error::SectorAmbiguity { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
