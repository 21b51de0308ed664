use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown generator in token `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent in token `{0}`")]
    MalformedExponent(String),
    #[error("factor {0} is not peripheral")]
    NotPeripheral(usize),
    #[error("radius {radius} exceeds the enumeration cap {cap}")]
    RadiusExceedsCap { radius: usize, cap: usize },
    #[error("relative distance {distance} exceeds the enumeration limit {limit}")]
    DistanceTooLarge { distance: usize, limit: usize },
    #[error("relative length {length} exceeds the search cap {cap}")]
    SearchCapExceeded { length: usize, cap: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("x does not conjugate a to b")]
    NotAConjugator,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Configuration problems (bad group file, bad constants file) as opposed
    /// to errors in the mathematical request itself.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Io(_) | Error::Json(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownGenerator(_) => "UnknownGenerator",
            Error::MalformedExponent(_) => "MalformedExponent",
            Error::NotPeripheral(_) => "NotPeripheral",
            Error::RadiusExceedsCap { .. } => "RadiusExceedsCap",
            Error::DistanceTooLarge { .. } => "DistanceTooLarge",
            Error::SearchCapExceeded { .. } => "SearchCapExceeded",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NotAConjugator => "NotAConjugator",
            Error::Config(_) => "Config",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }
}
