//! Spotlight attention: modes, projections, disaggregation and the
//! attentional (aggregated) MDPs they induce.

mod abstraction;
mod disaggregation;
mod mode;

pub use abstraction::{
    build_attentional_mdp, build_attentional_mdp_factored, lift_policy, solve_mode, AttentionalMdp,
};
pub use disaggregation::{uniform_disaggregation, Disaggregation};
pub use mode::{preimage, project, AttentionMode, ObservedSpace};
