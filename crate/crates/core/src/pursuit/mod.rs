//! Gridworld pursuit domain: a robot captures randomly moving agents.
//!
//! Coordinates are `[x, y]` with `x` in `0..width` and `y` in `0..height`;
//! `N` decreases `y`, `E` increases `x`.

mod compile;
mod spec;

pub use compile::{compile, CompiledWorld, GridLayout, ACTIONS, CAPTURED_LABEL};
pub use spec::{
    bundled_config, load_spec, AgentDynamics, AgentSpec, CaptureSpec, Cell, GridworldSpec, PenaltyCell,
    BUNDLED_CONFIGS,
};
