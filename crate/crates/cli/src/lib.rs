//! Experiment runner behind the `attnplan` binary.
//!
//! Every command is a pure function of its [`RunParams`] to a set of output
//! files, which is what makes manifest replay byte-exact.

pub mod manifest;
pub mod run;

pub use manifest::{Manifest, MANIFEST_FILE};
pub use run::{execute, resolve_config, Command, ConfigSource, Outputs, RunParams};

use attnplan::Error;

/// Process exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonConvergence { .. } => 2,
        Error::StateSpaceTooLarge { .. } => 3,
        _ => 1,
    }
}
