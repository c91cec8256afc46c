use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid generator `{0}`: {1}")]
    InvalidGenerator(String, String),
    #[error("cannot parse rational `{0}`")]
    ParseRational(String),
    #[error("points live over different generator bases")]
    BasisMismatch,
    #[error("coefficient vector has length {got}, basis expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("interval lower endpoint {lo} is not below upper endpoint {hi}")]
    InvalidInterval { lo: String, hi: String },
    #[error("sign of {value} could not be certified within {bits} bits; the generators may not be independent")]
    PrecisionExhausted { value: String, bits: u32 },
    #[error("empty point set")]
    EmptySet,
    #[error("the gap of a singleton is undefined at 0")]
    ZeroSingleton,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
    #[error("enumeration cap exceeded: {needed} > {cap}")]
    EnumerationCap { needed: u128, cap: u128 },
    #[error("density ratio needs at least two independent generators (nu = 1); count the arithmetic progression exactly with `count_in_interval`")]
    SingleGenerator,
    #[error("lambda profile exceeds the piece cap of {cap}")]
    PieceCap { cap: usize },
    #[error("no admissible lambda: {0}")]
    LambdaNotFound(String),
    #[error(
        "witness pair not reached by m = {m_max}; best #E/#G = {best_ratio}, needed > {needed}"
    )]
    MExhausted {
        m_max: u64,
        best_ratio: String,
        needed: String,
    },
    #[error("measure sequence exhausted after index {last_index}; next factor needs support below {required}")]
    SequenceExhausted { last_index: usize, required: String },
    #[error("brute-force size {size} exceeds cap {cap}")]
    BruteForceCap { size: u128, cap: u128 },
    #[error("witness needs {m} factors, above the cap of {cap}")]
    FactorCap { m: u64, cap: u64 },
    #[error("{0}")]
    Inconsistent(String),
}

impl Error {
    /// Errors raised because a configured cap or precision budget ran out.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. }
                | Error::EnumerationCap { .. }
                | Error::PieceCap { .. }
                | Error::LambdaNotFound(_)
                | Error::MExhausted { .. }
                | Error::SequenceExhausted { .. }
                | Error::BruteForceCap { .. }
                | Error::FactorCap { .. }
        )
    }
}
