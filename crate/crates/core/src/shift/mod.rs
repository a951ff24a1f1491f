//! The attention-shift semi-MDP: choose a subpolicy and how long to sustain
//! it, trading task reward against sensor cost saved.

mod model;
mod search;
mod solve;

pub use model::{build_shift_mdp, build_shift_mdp_with, AttentionShiftMdp, InfoAccounting, SustainAction, Weights};
pub use search::{pareto_sweep, sustain_bound_search, sweep_sustain_bounds, ParetoPoint, SustainBoundReport};
pub use solve::{evaluate_objectives, solve_shift, solve_shift_from, ShiftSolution};
