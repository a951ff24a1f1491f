//! Monte-Carlo execution of attention-shift policies.

mod estimate;
mod rollout;
mod sampler;

pub use estimate::{estimate_returns, rollout_seed, Estimate, ReturnEstimate};
pub use rollout::{rollout, rollout_from, Executor, StepRecord, TrajectoryLog};
pub use sampler::{DbnSampler, JointSampler, StepSampler, Substreams};
