use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value iteration did not converge after {iters} sweeps (residual {residual:e})")]
    NonConvergence { iters: usize, residual: f64 },

    #[error("discount factor must be < 1 for this solver")]
    DiscountOne,

    #[error("observed tuple {0:?} has an empty preimage")]
    EmptyPreimage(Vec<usize>),

    #[error("mode is not parent-closed: variable {var} depends on unattended variable {parent}")]
    ModeNotParentClosed { var: usize, parent: usize },

    #[error("enumerated {count} states, exceeding the cap of {cap}")]
    StateSpaceTooLarge { count: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error at `{path}`: {msg}")]
    Validation { path: String, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn validation(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
