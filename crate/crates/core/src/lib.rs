//! Attention-based active perception planning for factored-state MDPs.
//!
//! A factored MDP is abstracted under spotlight attention modes (subsets of
//! state variables the robot monitors). Each mode yields an aggregated MDP
//! whose optimal subpolicy can be run without observing unattended variables.
//! The attention-shift semi-MDP then chooses which subpolicy to run and for
//! how many steps, trading task reward against the sensor cost saved while
//! attention is sustained.

pub mod attention;
pub mod dbn;
pub mod error;
pub mod export;
pub mod mdp;
pub mod pursuit;
pub mod shift;
pub mod sim;
pub mod sparse;

pub use error::{Error, Result};
