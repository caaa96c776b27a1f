use thiserror::Error;

/// Errors raised by the measure, outer-function, Schur and polynomial layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpucError {
    #[error("measure has zero total mass and cannot be normalized")]
    NonNormalizable,
    #[error("negative input: {0}")]
    NegativeInput(String),
    #[error("total mass {0} differs from 1")]
    NotProbability(f64),
    #[error("invalid atom: {0}")]
    InvalidAtom(String),
    #[error("measure is not numerically Szego (weight sample {sample:e} below floor {floor:e})")]
    NotSzego { sample: f64, floor: f64 },
    #[error("point {0} is not strictly inside the unit disk")]
    BoundaryPoint(f64),
    #[error("point of modulus {0} is not on the unit circle")]
    NotOnBoundary(f64),
    #[error("moment index {index} exceeds the anti-aliasing limit {limit}")]
    AliasRisk { index: usize, limit: usize },
    #[error("sample sequence of length {got} does not match grid size {expected}")]
    GridMismatch { expected: usize, got: usize },
    #[error("moment c_0 = {0} is not normalized to 1")]
    BadNormalization(f64),
    #[error("power-series division by a series with constant term of modulus {0:e}")]
    DivisionBlowup(f64),
    #[error("Schur parameter {index} has modulus {modulus} (too close to the unit circle)")]
    ParameterEscape { index: usize, modulus: f64 },
    #[error("Toeplitz positivity lost at step {index}: |a| = {modulus}")]
    PositivityLoss { index: usize, modulus: f64 },
    #[error("argument modulus {0:e} is below the pointwise Schur iteration limit")]
    NearZeroArgument(f64),
    #[error("Schur iterate {index} lost contractivity (modulus {modulus})")]
    ContractivityLoss { index: usize, modulus: f64 },
    #[error("degenerate denominator of modulus {0:e}")]
    DegenerateDenominator(f64),
    #[error("requested index {requested} exceeds available {available}")]
    OutOfRange { requested: usize, available: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, OpucError>;
