use thiserror::Error;

use crate::rays::RayLabel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parts are not non-increasing: {0:?}")]
    NotPartition(Vec<u64>),
    #[error("invalid cone point: {0}")]
    InvalidConePoint(String),
    #[error("label {label} is not a vertex label of P_{r}")]
    InvalidLabel { r: usize, label: RayLabel },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} exceeded the configured limit of {limit}")]
    ResourceCap { what: &'static str, limit: u64 },
    #[error("fitted coefficient alpha_{k} = {value} is not a nonnegative integer")]
    BadCoefficient { k: usize, value: String },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}

impl Error {
    /// True for errors caused by a configured resource limit rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
