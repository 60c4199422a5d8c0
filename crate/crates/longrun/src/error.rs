use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("binary sequence must be nonempty")]
    EmptySequence,

    #[error("number of ones k = {k} exceeds sequence length n = {n}")]
    OnesOutOfRange { k: usize, n: usize },

    #[error("sample size n = {n} too small (minimum {min})")]
    SampleTooSmall { n: usize, min: usize },

    #[error("observed run length {observed} must be at least 1")]
    ObservedOutOfRange { observed: usize },

    #[error("target level {level} must lie strictly between 0 and 1")]
    InvalidLevel { level: f64 },

    #[error("x and y lengths differ ({x_len} vs {y_len})")]
    LengthMismatch { x_len: usize, y_len: usize },

    #[error("non-finite value in {field} at row {index}")]
    NonFinite { field: &'static str, index: usize },

    #[error("design points must be sorted nondecreasing (violation at index {index})")]
    UnsortedDesign { index: usize },

    #[error("design has no spread (all x equal); mean estimation is singular")]
    SingularDesign,

    #[error("bandwidth {bandwidth} must be positive and finite")]
    InvalidBandwidth { bandwidth: f64 },

    #[error(
        "kernel neighborhood at index {index} is empty for bandwidth {bandwidth}; \
         choose a larger bandwidth"
    )]
    EmptyKernelNeighborhood { index: usize, bandwidth: f64 },

    #[error(
        "automatic bandwidth selection needs at least 10 points (got {n}); \
         use the linear least-squares estimator instead"
    )]
    AutoBandwidthTooFewPoints { n: usize },

    #[error("known-function estimator requires {expected} mean values (got {got})")]
    KnownMeanLength { expected: usize, got: usize },

    #[error("known-function estimator requires mean values at the design points")]
    KnownMeanMissing,

    #[error("model id must be 1, 2, or 3 (got {id})")]
    InvalidModelId { id: u8 },

    #[error("heteroscedasticity strength c = {c} must be finite and nonnegative")]
    InvalidStrength { c: f64 },

    #[error("simulation sample size n = {n} outside supported range [{min}, {max}]")]
    SimulationSizeOutOfRange { n: usize, min: usize, max: usize },

    #[error("replicate count must be at least 1")]
    InvalidReplicates,
}

pub type Result<T> = std::result::Result<T, Error>;
