use alloc::string::String;

/// Errors raised by the core algorithms.
///
/// The variants mirror the failure classes the tooling distinguishes: bad
/// arguments, broken preconditions of a construction, malformed
/// configurations, and requests that exceed a configured size limit.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An input does not satisfy the contract a construction relies on.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A forecasting system or other configuration is malformed.
    #[error("configuration error: {0}")]
    Config(String),
    /// A search did not terminate within its configured horizon.
    #[error("horizon exceeded: {0}")]
    Horizon(String),
    /// A computation would exceed a configured resource cap.
    #[error("resource cap exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! contract {
    ($($arg:tt)*) => { $crate::error::Error::Contract(alloc::format!($($arg)*)) };
}
pub(crate) use contract;
pub(crate) use domain;
