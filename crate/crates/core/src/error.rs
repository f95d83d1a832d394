use thiserror::Error;

/// Errors raised across the toolkit.
///
/// The variants split into two families: argument errors (bad input,
/// violated preconditions) and computational errors (a well-posed request
/// that the numerics could not finish). [`Error::is_computational`] tells
/// them apart; the CLI maps them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: i64, modulus: u64 },

    #[error("modulus {modulus} exceeds the supported bound 2^40")]
    ModulusTooLarge { modulus: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource guard: {0}")]
    ResourceLimit(String),

    #[error("local density at p = {p} did not stabilize by k = {k_max}")]
    NotStabilized { p: u64, k_max: u32 },

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("no integer points on the sphere F(x) = {n}")]
    EmptySphere { n: u64 },

    #[error("insufficient data: {usable} usable checkpoints, need at least 3")]
    InsufficientData { usable: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of a well-posed computation.
    pub fn is_computational(&self) -> bool {
        matches!(
            self,
            Error::NotStabilized { .. }
                | Error::NonConvergence(_)
                | Error::EmptySphere { .. }
                | Error::InsufficientData { .. }
        )
    }

    /// True for rejected inputs.
    pub fn is_argument(&self) -> bool {
        matches!(
            self,
            Error::NotInvertible { .. }
                | Error::ModulusTooLarge { .. }
                | Error::InvalidArgument(_)
                | Error::ResourceLimit(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
