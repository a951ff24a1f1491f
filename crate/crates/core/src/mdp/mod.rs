//! Finite factored-state MDPs and exact dynamic-programming primitives.

mod chain;
mod model;
mod policy;
mod solve;

pub use chain::{induce_chain, t_step_kernel, truncated_discounted_return, InducedChain};
pub use model::{ActionId, FactoredMdp, StateId, Variable, DEFAULT_STATE_CAP};
pub use policy::{Policy, ValueFunction};
pub use solve::{
    bellman_residual, evaluate_policy, greedy_policy, value_iteration, value_iteration_from,
    ValueIterationOutcome, DEFAULT_MAX_SWEEPS, DEFAULT_TOL,
};

/// Absolute tolerance for stochasticity checks.
pub const STOCHASTIC_TOL: f64 = 1e-9;

/// Two action values closer than this (relative to their magnitude) are ties.
pub(crate) fn is_strictly_better(candidate: f64, best: f64) -> bool {
    candidate > best + 1e-10 * (1.0 + best.abs())
}
