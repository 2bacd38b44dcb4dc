use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is neither 0 nor a prime")]
    InvalidCharacteristic(u64),
    #[error("coefficients live in different fields (characteristic {0} vs {1})")]
    MixedField(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("operands belong to different rings")]
    MixedRing,
    #[error("invalid variable list: {0}")]
    InvalidVariables(String),
    #[error("negative exponent on non-Laurent variable `{0}`")]
    NegativeExponent(String),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("relation is zero")]
    ZeroRelation,
    #[error("polynomial is not weighted-homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("residual does not split over the coefficient field: {residual}")]
    DoesNotSplit { residual: String },
    #[error("algebra has no Laurent model")]
    NoLaurentModel,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("weights are inconsistent with the Laurent model: {0}")]
    InconsistentWeights(String),
    #[error("degree bound {bound} is smaller than the element degree {degree}")]
    BoundTooSmall { bound: u32, degree: u32 },
    #[error("exponential map is trivial")]
    TrivialMap,
    #[error("map is not an exponential map: {0}")]
    NotExponential(String),
    #[error("phi-degree {degree} is not divisible by {n}")]
    NonDivisibleDegree { degree: u32, n: u32 },
    #[error("phi-degree did not drop during recursion (degree {0})")]
    RecursionNoProgress(u32),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("operation undefined on the zero element")]
    ZeroElement,
    #[error("homogenized map failed verification:\n{0}")]
    HomogenizationNotExponential(String),
    #[error("exponents must both be at least 2 (got {0}, {1})")]
    InvalidExponents(u32, u32),
    #[error("scalars c1, c2 must be nonzero invariants")]
    NonInvariantScalars,
}
