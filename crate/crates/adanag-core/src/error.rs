use alloc::string::String;

/// Errors raised by objectives, schedules and solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numeric overflow: non-finite {what} at coordinate {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("initialization failed: {0}")]
    Init(String),
    #[error("schedule error: {0}")]
    Schedule(String),
    #[error("divergence at iteration {k}: f = {f}")]
    Divergence { k: usize, f: f64 },
    #[error("capability error: {0}")]
    Capability(String),
}

pub type Result<T> = core::result::Result<T, Error>;
